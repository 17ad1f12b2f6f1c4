// The three-stage polynomial approximation pipeline: cutoff, mollification by
// the scaled entire kernel, and the Taylor-polynomial stage, with split-error
// diagnostics and bound evaluation.
#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/conjugate.hpp"
#include "polydense/cutoff.hpp"
#include "polydense/grids.hpp"
#include "polydense/kernel.hpp"
#include "polydense/multipoly.hpp"
#include "polydense/quadrature.hpp"
#include "polydense/smoothfn.hpp"
#include "polydense/weights.hpp"

namespace polydense {

struct StageReport {
    std::string stage;
    double parameter = 0.0;
    double measured_error = 0.0;
    double bound = 0.0;
    double seconds = 0.0;
};

namespace detail {
struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};
} // namespace detail

// ---- stage 1: cutoff ----

// f_nu(x) = f(x) * eta(x/nu); derivatives by the Leibniz product rule with
// the nu^{|beta|-|alpha|} scaling on the cutoff factors.
inline SmoothFunction stage1_cutoff(const SmoothFunction& f, int nu) {
    if (nu < 1) throw RangeError("stage1_cutoff: nu >= 1");
    SmoothFunction r;
    r.name = f.name + "_nu" + std::to_string(nu);
    r.dim = f.dim;
    r.max_order = std::min(f.max_order, kCutoffMaxOrder);
    double radius = 2.0 * double(nu);
    if (f.support) radius = std::min(radius, f.support->radius);
    r.support = Box{radius, f.dim};
    const double nu_d = double(nu);
    r.deriv_fn = [f, nu_d](const MultiIndex& alpha, const Point& x) {
        Point xs(x);
        for (auto& v : xs) v /= nu_d;
        const int n = int(x.size());
        // sum over beta <= alpha
        MultiIndex beta(n, 0);
        double total = 0.0;
        while (true) {
            MultiIndex gamma(n);
            for (int j = 0; j < n; ++j) gamma[j] = alpha[j] - beta[j];
            const double eta = cutoff_eta_deriv(gamma, xs);
            if (eta != 0.0) {
                const double scale = std::pow(nu_d, double(order_of(beta) - order_of(alpha)));
                total += mi_binomial(alpha, beta) * f.deriv(beta, x) * scale * eta;
            }
            int j = n - 1;
            while (j >= 0 && ++beta[j] > alpha[j]) beta[j--] = 0;
            if (j < 0) break;
        }
        return total;
    };
    return r;
}

// Stage-1 measured error: grid value over Pi_{2 nu} plus the tail certificate
// at r = 2 nu (outside that box f_nu vanishes and |D^a f| <= c_{m+1} theta_{m+1}).
inline double stage1_error(const SmoothFunction& f, const SmoothFunction& f_nu,
                           const WeightFamily& w, int m, int nu, int points_per_axis = 2048) {
    GridSpec g{Box{2.0 * double(nu), f.dim}, points_per_axis};
    const auto grid_part = seminorm_q(sf_subtract(f_nu, f), m, m, w, g);
    const double tail = tail_certificate(f, w, m, 2.0 * double(nu));
    return grid_part.value + tail;
}

// ---- stage 2: mollification ----

namespace detail {

struct MollifyState {
    SmoothFunction f_nu;
    double lambda = 1.0;
    int dim = 1;
    double mass = 1.0;           // A = (A_1)^n
    QuadRule rule;               // 1-D rule over the support, reused per axis
    std::map<MultiIndex, std::vector<double>> deriv_cache; // f_nu derivs at quad nodes
    std::mutex mutex;

    const std::vector<double>& derivs(const MultiIndex& alpha) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = deriv_cache.find(alpha);
        if (it != deriv_cache.end()) return it->second;
        std::vector<double> vals;
        if (dim == 1) {
            vals.resize(rule.nodes.size());
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                vals[i] = f_nu.deriv(alpha, Point{rule.nodes[i]});
        } else {
            const size_t n1 = rule.nodes.size();
            vals.resize(n1 * n1);
            for (size_t i = 0; i < n1; ++i)
                for (size_t j = 0; j < n1; ++j)
                    vals[i * n1 + j] = f_nu.deriv(alpha, Point{rule.nodes[i], rule.nodes[j]});
        }
        return deriv_cache.emplace(alpha, std::move(vals)).first->second;
    }
};

} // namespace detail

// f_{nu,lambda}(x) = (lambda^n / A) * integral of f_nu(y) H(lambda (x-y)) dy
// over the compact support; D^alpha is moved onto f_nu under the integral.
// The quadrature mesh must resolve the kernel scale: panel width <= 0.5/lambda.
inline SmoothFunction stage2_mollify(const SmoothFunction& f_nu, double lambda,
                                     double panels_per_unit) {
    if (!(lambda > 1.0)) throw RangeError("stage2_mollify: lambda > 1 required");
    if (!f_nu.support) throw RangeError("stage2_mollify: f_nu must be compactly supported");
    const double width = 1.0 / panels_per_unit;
    if (width > 0.5 / lambda)
        throw ResolutionError("stage2_mollify: panel width exceeds 0.5/lambda");

    auto st = std::make_shared<detail::MollifyState>();
    st->f_nu = f_nu;
    st->lambda = lambda;
    st->dim = f_nu.dim;
    st->mass = kernel_mass(f_nu.dim);
    const double R = f_nu.support->radius;
    st->rule = QuadRule::composite(-R, R, width);

    SmoothFunction r;
    r.name = f_nu.name + "_moll";
    r.dim = f_nu.dim;
    r.max_order = f_nu.max_order;
    r.deriv_fn = [st](const MultiIndex& alpha, const Point& x) {
        const auto& vals = st->derivs(alpha);
        const auto& nodes = st->rule.nodes;
        const auto& wts = st->rule.weights;
        const double lam = st->lambda;
        double s = 0.0;
        if (st->dim == 1) {
            for (size_t i = 0; i < nodes.size(); ++i)
                s += wts[i] * vals[i] * fejer_h(lam * (x[0] - nodes[i]));
            return lam * s / st->mass;
        }
        const size_t n1 = nodes.size();
        for (size_t i = 0; i < n1; ++i) {
            const double hx = fejer_h(lam * (x[0] - nodes[i]));
            if (hx == 0.0) continue;
            double row = 0.0;
            for (size_t j = 0; j < n1; ++j)
                row += wts[j] * vals[i * n1 + j] * fejer_h(lam * (x[1] - nodes[j]));
            s += wts[i] * hx * row;
        }
        return lam * lam * s / st->mass;
    };
    return r;
}

// K_{nu,m} = max over the support grid of |D^beta f_nu|, |beta| <= m+1.
inline double stage2_K_factor(const SmoothFunction& f_nu, int m, int points_per_axis = 2048) {
    if (!f_nu.support) throw RangeError("stage2_K_factor: support required");
    GridSpec g{*f_nu.support, points_per_axis};
    const auto alphas = multi_indices_up_to(f_nu.dim, std::min(m + 1, f_nu.max_order));
    double mx = 0.0;
    g.for_each_point([&](const Point& x, bool) {
        for (const auto& a : alphas) mx = std::max(mx, std::abs(f_nu.deriv(a, x)));
    });
    return mx;
}

struct SplitBounds {
    double i1 = 0.0;
    double i2 = 0.0;
};

// Paper-form bounds for the near/far split at r(lambda) = lambda^{-2n/(2n+1)}:
//   |I1| <= pi^{n/2} sqrt(n) C_H K / (A Gamma(n/2+1)) * lambda^{-n/(2n+1)}
//   |I2| <= (2 C_H K / A) * tail mass beyond lambda^{1/(2n+1)}
inline SplitBounds split_error_bounds(double lambda, int n, double C_H, double K) {
    const double A = kernel_mass(n);
    SplitBounds b;
    b.i1 = std::pow(M_PI, 0.5 * n) * std::sqrt(double(n)) * C_H * K /
           (A * std::tgamma(0.5 * n + 1.0)) * std::pow(lambda, -double(n) / double(2 * n + 1));
    b.i2 = 2.0 * C_H * K / A *
           kernel_tail_mass_bound(n, std::pow(lambda, 1.0 / double(2 * n + 1)));
    return b;
}

struct SplitError {
    double i1 = 0.0;
    double i2 = 0.0;
};

// Near/far decomposition of (D^a f_{nu,lambda})(x) - (D^a f_nu)(x).
inline SplitError split_error(const SmoothFunction& f_nu, double lambda, const MultiIndex& alpha,
                              const Point& x, double panels_per_unit) {
    if (!f_nu.support) throw RangeError("split_error: support required");
    const double width = 1.0 / panels_per_unit;
    if (width > 0.5 / lambda) throw ResolutionError("split_error: panel width exceeds 0.5/lambda");
    const int n = f_nu.dim;
    const double r = std::pow(lambda, -2.0 * n / double(2 * n + 1));
    const double A = kernel_mass(n);
    const double R = f_nu.support->radius;
    const double gx = f_nu.deriv(alpha, x);

    SplitError out;
    if (n == 1) {
        const double x0 = x[0];
        auto near_f = [&](double y) {
            return (f_nu.deriv(alpha, Point{y}) - gx) * fejer_h(lambda * (x0 - y));
        };
        out.i1 = lambda / A * composite_gl15(near_f, x0 - r, x0 + r, width);
        // far part: supp \ ball carries the f_nu term; the constant term uses
        // the exact kernel mass minus the near-ball kernel integral
        auto fH = [&](double y) {
            return f_nu.deriv(alpha, Point{y}) * fejer_h(lambda * (x0 - y));
        };
        double far_fnu = 0.0;
        if (x0 - r > -R) far_fnu += composite_gl15(fH, -R, std::min(R, x0 - r), width);
        if (x0 + r < R) far_fnu += composite_gl15(fH, std::max(-R, x0 + r), R, width);
        const double near_kernel = composite_gl15(
            [&](double y) { return fejer_h(lambda * (x0 - y)); }, x0 - r, x0 + r, width);
        out.i2 = lambda / A * far_fnu - gx * (1.0 - lambda / A * near_kernel);
        return out;
    }
    if (n == 2) {
        // polar quadrature over the near disk; far part = full - near
        const int n_ang = 128;
        auto disk_integral = [&](auto&& fn) {
            double s = 0.0;
            for (int k = 0; k < n_ang; ++k) {
                const double ang = 2.0 * M_PI * (double(k) + 0.5) / n_ang;
                const double cs = std::cos(ang), sn = std::sin(ang);
                s += composite_gl15(
                    [&](double rho) {
                        const Point y{x[0] - rho * cs, x[1] - rho * sn};
                        return rho * fn(y);
                    },
                    0.0, r, width);
            }
            return s * (2.0 * M_PI / n_ang);
        };
        const double lam2 = lambda * lambda;
        out.i1 = lam2 / A *
                 disk_integral([&](const Point& y) {
                     return (f_nu.deriv(alpha, y) - gx) *
                            fejer_h(lambda * (x[0] - y[0])) * fejer_h(lambda * (x[1] - y[1]));
                 });
        // full difference by direct quadrature minus the near part
        auto moll = stage2_mollify(f_nu, lambda, panels_per_unit);
        const double full = moll.deriv(alpha, x) - gx;
        out.i2 = full - out.i1;
        return out;
    }
    throw RangeError("split_error: n in {1,2}");
}

// ---- stage 3: the polynomial ----

// Moments M_beta = integral f_nu(y) y^beta dy over the support, by composite
// Gauss-Legendre; refinement-stable to 1e-10 (checked by panel doubling).
inline std::map<MultiIndex, double> moments(const SmoothFunction& f_nu, int max_total_degree,
                                            double panels_per_unit = 8.0) {
    if (!f_nu.support) throw RangeError("moments: support required");
    const double R = f_nu.support->radius;
    const int n = f_nu.dim;
    // vals: the moments; scales: the absolute-mass integrals sum w |f| |y^a|,
    // which set the attainable resolution for cancelling (odd) moments
    auto compute = [&](double ppu, std::map<MultiIndex, double>& vals,
                       std::map<MultiIndex, double>& scales) {
        QuadRule rule = QuadRule::composite(-R, R, 1.0 / ppu);
        const auto alphas = multi_indices_up_to(n, max_total_degree);
        if (n == 1) {
            std::vector<double> fv(rule.nodes.size());
            for (size_t i = 0; i < fv.size(); ++i) fv[i] = f_nu(Point{rule.nodes[i]});
            for (const auto& a : alphas) {
                double s = 0.0, sa = 0.0;
                for (size_t i = 0; i < fv.size(); ++i) {
                    const double t = rule.weights[i] * fv[i] * std::pow(rule.nodes[i], double(a[0]));
                    s += t;
                    sa += std::abs(t);
                }
                vals[a] = s;
                scales[a] = sa;
            }
        } else {
            const size_t n1 = rule.nodes.size();
            std::vector<double> fv(n1 * n1);
            for (size_t i = 0; i < n1; ++i)
                for (size_t j = 0; j < n1; ++j)
                    fv[i * n1 + j] = f_nu(Point{rule.nodes[i], rule.nodes[j]});
            for (const auto& a : alphas) {
                double s = 0.0, sa = 0.0;
                for (size_t i = 0; i < n1; ++i) {
                    const double xi = std::pow(rule.nodes[i], double(a[0]));
                    double row = 0.0, rowa = 0.0;
                    for (size_t j = 0; j < n1; ++j) {
                        const double t = rule.weights[j] * fv[i * n1 + j] *
                                         std::pow(rule.nodes[j], double(a[1]));
                        row += t;
                        rowa += std::abs(t);
                    }
                    s += rule.weights[i] * xi * row;
                    sa += std::abs(rule.weights[i] * xi) * rowa;
                }
                vals[a] = s;
                scales[a] = sa;
            }
        }
    };
    // refine until panel doubling moves nothing by more than 1e-10 relative
    // to each moment's cancellation scale
    double ppu = panels_per_unit;
    std::map<MultiIndex, double> coarse, coarse_sc;
    compute(ppu, coarse, coarse_sc);
    for (int round = 0; round < 7; ++round) {
        std::map<MultiIndex, double> fine, fine_sc;
        compute(2.0 * ppu, fine, fine_sc);
        bool stable = true;
        for (const auto& [a, v] : fine) {
            if (std::abs(v - coarse[a]) > 1e-10 * std::max(1.0, fine_sc[a])) {
                stable = false;
                break;
            }
        }
        if (stable) return fine;
        ppu *= 2.0;
        coarse = std::move(fine);
    }
    throw ResolutionError("moments: not refinement-stable within the panel budget");
}

namespace detail {
template <class Fn>
void for_each_sub_index(const MultiIndex& a, Fn&& fn) {
    MultiIndex b(a.size(), 0);
    while (true) {
        fn(const_cast<const MultiIndex&>(b));
        int j = int(a.size()) - 1;
        while (j >= 0 && ++b[j] > a[j]) b[j--] = 0;
        if (j < 0) break;
    }
}
} // namespace detail

// V_N(x) = (lambda^n / A) integral f_nu(y) U_N(lambda(x-y)) dy, assembled by
// binomially expanding (x-y)^alpha against precomputed moments.
inline MultiPoly stage3_polynomial(const SmoothFunction& f_nu, double lambda, int N,
                                   const std::map<MultiIndex, double>& mom) {
    const int n = f_nu.dim;
    const MultiPoly u = taylor_U(N, n);
    const double front = std::pow(lambda, double(n)) / kernel_mass(n);
    MultiPoly v(n);
    for (const auto& [a, ua] : u.terms()) {
        const double la = std::pow(lambda, double(order_of(a)));
        detail::for_each_sub_index(a, [&](const MultiIndex& b) {
            MultiIndex g(n);
            for (int j = 0; j < n; ++j) g[j] = a[j] - b[j];
            auto it = mom.find(g);
            if (it == mom.end()) throw RangeError("stage3_polynomial: moment table too small");
            const double sign = (order_of(g) % 2 == 0) ? 1.0 : -1.0;
            v.add_term(b, front * ua * la * mi_binomial(a, b) * sign * it->second);
        });
    }
    return v;
}

// sup over R^n of (N+1) ln(1+||x||) - phi_m(x), by 1-D maximization along
// sphere directions (log of the weighted polynomial growth term).
inline double log_sup_poly_over_theta(const WeightFamily& w, int m, int Npow) {
    double best = -1e300;
    for (const auto& sigma : sphere_directions(w.dim())) {
        Point x(w.dim());
        auto val = [&](double t) {
            for (int j = 0; j < w.dim(); ++j) x[j] = sigma[j] * t;
            return double(Npow) * std::log1p(t) - w.eval(m, x);
        };
        // bracket: the weight is superlinear so val eventually decreases
        double hi = 1.0;
        while (val(2.0 * hi) > val(hi) && hi < 1e12) hi *= 2.0;
        hi *= 2.0;
        // golden section on [0, hi]
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 0.0, b = hi;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = val(c1), f2 = val(c2);
        for (int it = 0; it < 200; ++it) {
            if (f1 < f2) {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = val(c2);
            } else {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = val(c1);
            }
        }
        best = std::max(best, std::max(f1, f2));
    }
    return best;
}

inline SmoothFunction poly_as_smoothfn(const MultiPoly& p, int max_order) {
    auto cache = std::make_shared<std::map<MultiIndex, MultiPoly>>();
    auto mtx = std::make_shared<std::mutex>();
    SmoothFunction f;
    f.name = "poly_deg" + std::to_string(p.degree());
    f.dim = p.dim();
    f.max_order = max_order;
    f.deriv_fn = [p, cache, mtx](const MultiIndex& a, const Point& x) {
        std::lock_guard<std::mutex> lock(*mtx);
        auto it = cache->find(a);
        if (it == cache->end()) it = cache->emplace(a, p.derivative(a)).first;
        return it->second.eval(x);
    };
    return f;
}

struct Stage3Curve {
    std::vector<StageReport> reports;
    double fitted_C1 = 0.0;
    double fitted_C2 = 0.0;
};

// Measured q_m(f_{nu,lambda} - V_N) along N_range together with the
// N-dependent theoretical factor; C1, C2 are least-squares diagnostics in
// log space for the displayed (C1 C2^N / (N+1)!) * sup-term form.
inline Stage3Curve stage3_error_curve(const SmoothFunction& f_nu, double lambda, int m,
                                      const std::vector<int>& N_range, const WeightFamily& w,
                                      const GridSpec& grid, double panels_per_unit) {
    const int n = f_nu.dim;
    auto moll = stage2_mollify(f_nu, lambda, panels_per_unit);
    const auto alphas = multi_indices_up_to(n, m);

    // cache mollified derivatives and weights over the grid once
    std::vector<Point> pts;
    std::vector<double> phis;
    grid.for_each_point([&](const Point& x, bool) {
        pts.push_back(x);
        phis.push_back(w.eval(m, x));
    });
    std::vector<std::vector<double>> moll_vals(alphas.size());
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        moll_vals[ai].resize(pts.size());
        for (size_t i = 0; i < pts.size(); ++i)
            moll_vals[ai][i] = moll.deriv(alphas[ai], pts[i]);
    }

    int max_n = 0;
    for (int N : N_range) max_n = std::max(max_n, N);
    const auto mom = moments(f_nu, max_n, std::max(8.0, panels_per_unit));
    const auto sigmas = sphere_directions(n);

    Stage3Curve curve;
    std::vector<double> xs_fit, ys_fit;
    for (int N : N_range) {
        detail::Stopwatch sw;
        const MultiPoly v = stage3_polynomial(f_nu, lambda, N, mom);
        double q = 0.0;
        for (size_t ai = 0; ai < alphas.size(); ++ai) {
            const MultiPoly dv = v.derivative(alphas[ai]);
            for (size_t i = 0; i < pts.size(); ++i) {
                const double d = moll_vals[ai][i] - dv.eval(pts[i]);
                if (d == 0.0) continue;
                q = std::max(q, std::exp(std::log(std::abs(d)) - phis[i]));
            }
        }
        double factor = 0.0;
        if (N >= 1) factor = stirling_bound_factor(w, m, N, sigmas);
        curve.reports.push_back({"stage3", double(N), q, factor, sw.seconds()});
        if (q > 0.0 && N >= 1) {
            // ln q ~ ln C1 + N ln C2 + [log_sup_term - ln (N+1)!]
            const double shape = log_sup_poly_over_theta(w, m, N + 1) - log_factorial(N + 1);
            xs_fit.push_back(double(N));
            ys_fit.push_back(std::log(q) - shape);
        }
    }
    if (xs_fit.size() >= 2) {
        // least squares for ys = b0 + b1 * N
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double k = double(xs_fit.size());
        for (size_t i = 0; i < xs_fit.size(); ++i) {
            sx += xs_fit[i];
            sy += ys_fit[i];
            sxx += xs_fit[i] * xs_fit[i];
            sxy += xs_fit[i] * ys_fit[i];
        }
        const double b1 = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        const double b0 = (sy - b1 * sx) / k;
        curve.fitted_C1 = std::exp(b0);
        curve.fitted_C2 = std::exp(b1);
    }
    return curve;
}

// ---- the end-to-end driver ----

struct PipelineOptions {
    std::vector<int> nu_candidates{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> lambda_ladder{2.0, 8.0, 32.0, 1000.0};
    int n_max = 48;
    double q_box_radius = 6.0;
    int q_points = 2048;
    int probe_points = 161;
    double panels_per_unit_min = 8.0;
    int certificate_points = 2048;
    double certificate_radius = 12.0;
};

struct PipelineResult {
    int nu = 0;
    double lambda = 0.0;
    int N = 0;
    MultiPoly poly{1};
    std::vector<StageReport> reports;
    double final_q = 0.0;
    Box certified_box;
};

// Composes the three stages with the greedy eps/3 split: nu from the tail
// certificate, lambda from the measured mollification error, N from the
// measured polynomial error.  BudgetError when the polynomial stage cannot
// reach its target within the degree cap (or provably cannot within double
// range).
inline PipelineResult pipeline_approximate(SmoothFunction f, const WeightFamily& w, int m,
                                           double eps, const PipelineOptions& opts = {}) {
    if (!(eps > 0.0)) throw RangeError("pipeline_approximate: eps > 0");
    PipelineResult res;
    res.certified_box = Box{opts.q_box_radius, f.dim};
    GridSpec qgrid{res.certified_box, opts.q_points};

    // trivial function: exact zero polynomial
    const double qf = seminorm_q(f, std::min(m, f.max_order), m, w, qgrid).value;
    if (qf == 0.0) {
        res.nu = 1;
        res.lambda = opts.lambda_ladder.front();
        res.N = 0;
        res.poly = MultiPoly(f.dim);
        res.final_q = 0.0;
        return res;
    }

    if (f.growth_certificate.find(m + 1) == f.growth_certificate.end())
        attach_measured_certificate(f, w, m + 1, opts.certificate_radius,
                                    opts.certificate_points);

    // stage 1: nu by tail certificate < eps/3
    const double target = eps / 3.0;
    int nu = -1;
    {
        detail::Stopwatch sw;
        double cert = 0.0;
        for (int cand : opts.nu_candidates) {
            cert = tail_certificate(f, w, m, double(cand));
            if (cert < target) {
                nu = cand;
                break;
            }
        }
        if (nu < 0) throw BudgetError("pipeline: no nu candidate meets the tail target");
        res.reports.push_back({"stage1", double(nu), cert, target, sw.seconds()});
    }
    res.nu = nu;
    SmoothFunction f_nu = stage1_cutoff(f, nu);

    // stage 2: lambda by measured error < eps/3 on the probe grid
    double lambda = -1.0;
    SmoothFunction moll;
    {
        GridSpec probe{Box{2.0 * nu + 1.0, f.dim}, opts.probe_points};
        for (double cand : opts.lambda_ladder) {
            detail::Stopwatch sw;
            const double ppu = std::max(opts.panels_per_unit_min, 2.0 * cand + 1.0);
            SmoothFunction mc = stage2_mollify(f_nu, cand, ppu);
            const double err =
                seminorm_q(sf_subtract(mc, f_nu), std::min(m, f_nu.max_order), m, w, probe)
                    .value;
            const double K = stage2_K_factor(f_nu, m, 512);
            const auto b = split_error_bounds(cand, f.dim, estimate_CH(m, f.dim), K);
            res.reports.push_back({"stage2", cand, err, b.i1 + b.i2, sw.seconds()});
            if (err < target) {
                lambda = cand;
                moll = mc;
                break;
            }
        }
        if (lambda < 0.0) throw BudgetError("pipeline: no lambda candidate meets the target");
    }
    res.lambda = lambda;

    // stage 3: N by measured error < eps/3; bail out early when the error
    // scale provably cannot come down to the target within the cap
    {
        // optimistic error scale at x = 0 (unit weight): the remainder there
        // behaves like (lambda R)^{N+1}/(N+1)! and no weighting can shrink
        // it, so if even that stays far above the target the search is
        // hopeless and would only overflow
        const double R = f_nu.support->radius;
        const double z0 = lambda * R;
        double best_log_scale = 1e300;
        for (int N = 1; N <= opts.n_max; ++N)
            best_log_scale = std::min(best_log_scale,
                                      double(N + 1) * std::log(z0) - log_factorial(N + 1));
        if (best_log_scale > std::log(target) + 10.0)
            throw BudgetError("pipeline: polynomial stage cannot reach the target within the "
                              "degree cap at this lambda");

        const double ppu = std::max(opts.panels_per_unit_min, 2.0 * lambda + 1.0);
        const auto mom = moments(f_nu, opts.n_max, std::max(8.0, ppu));
        const auto alphas = multi_indices_up_to(f.dim, std::min(m, f_nu.max_order));
        std::vector<Point> pts;
        std::vector<double> phis;
        qgrid.for_each_point([&](const Point& x, bool) {
            pts.push_back(x);
            phis.push_back(w.eval(m, x));
        });
        std::vector<std::vector<double>> mv(alphas.size());
        for (size_t ai = 0; ai < alphas.size(); ++ai) {
            mv[ai].resize(pts.size());
            for (size_t i = 0; i < pts.size(); ++i) mv[ai][i] = moll.deriv(alphas[ai], pts[i]);
        }
        int chosen = -1;
        for (int N = 0; N <= opts.n_max; ++N) {
            detail::Stopwatch sw;
            const MultiPoly v = stage3_polynomial(f_nu, lambda, N, mom);
            double q = 0.0;
            for (size_t ai = 0; ai < alphas.size(); ++ai) {
                const MultiPoly dv = v.derivative(alphas[ai]);
                for (size_t i = 0; i < pts.size(); ++i) {
                    const double d = mv[ai][i] - dv.eval(pts[i]);
                    if (d != 0.0) q = std::max(q, std::exp(std::log(std::abs(d)) - phis[i]));
                }
            }
            res.reports.push_back({"stage3", double(N), q, target, sw.seconds()});
            if (q < target) {
                chosen = N;
                res.poly = v;
                break;
            }
        }
        if (chosen < 0)
            throw BudgetError("pipeline: degree cap reached before the polynomial target");
        res.N = chosen;
    }

    // final verification on the certified box
    res.final_q =
        seminorm_q(sf_subtract(f, poly_as_smoothfn(res.poly, m)), std::min(m, f.max_order), m,
                   w, qgrid)
            .value;
    return res;
}

} // namespace polydense
