// Young (Legendre-Fenchel) conjugate calculus on grids.
//
// Grid conjugates are certified LOWER bounds of the true suprema: the max is
// taken over sampled nodes with exact node values. A superlinearity
// certificate (end slope of the samples >= twice the largest conjugate
// argument) guarantees the true maximizer does not escape the sampled range;
// when it fails a TruncationError is thrown.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/grids.hpp"
#include "polydense/sampled.hpp"
#include "polydense/weights.hpp"

namespace polydense {

namespace detail {

// max_i (x*y_i - u_i) for each x in ascending xs.  For convex u the argmax
// index is nondecreasing in x and the node sequence is unimodal, so a
// two-pointer sweep is exact and O(#x + #y); otherwise scan everything.
inline std::vector<double> grid_conjugate_values(const std::vector<double>& ys,
                                                 const std::vector<double>& us,
                                                 const std::vector<double>& xs, bool convex) {
    std::vector<double> out(xs.size());
    if (convex) {
        size_t j = 0;
        for (size_t k = 0; k < xs.size(); ++k) {
            const double x = xs[k];
            double best = x * ys[j] - us[j];
            while (j + 1 < ys.size()) {
                const double cand = x * ys[j + 1] - us[j + 1];
                if (cand >= best) {
                    best = cand;
                    ++j;
                } else {
                    break;
                }
            }
            out[k] = best;
        }
    } else {
        for (size_t k = 0; k < xs.size(); ++k) {
            double best = -1e300;
            for (size_t i = 0; i < ys.size(); ++i)
                best = std::max(best, xs[k] * ys[i] - us[i]);
            out[k] = best;
        }
    }
    return out;
}

} // namespace detail

// u*(x) = sup_{y>=0} (xy - u(y)) computed as the grid max over u's nodes.
// x_grid must be strictly increasing with x_grid.front() >= 0.
inline SampledFunction1D young_conjugate(const SampledFunction1D& u,
                                         const std::vector<double>& x_grid) {
    if (u.domain != Domain1D::half_line || u.nodes.front() < 0.0)
        throw RangeError("young_conjugate: input must be sampled on [0,inf)");
    if (x_grid.empty() || x_grid.front() < 0.0)
        throw RangeError("young_conjugate: x_grid must be nonempty and >= 0");
    if (!(u.end_slope() > 2.0 * x_grid.back()))
        throw TruncationError("young_conjugate: superlinearity certificate failed "
                              "(end slope <= 2*max x; maximizer may lie beyond samples)");
    SampledFunction1D r;
    r.nodes = x_grid;
    r.values = detail::grid_conjugate_values(u.nodes, u.values, x_grid, u.convex);
    r.domain = Domain1D::half_line;
    r.convex = true; // max of affine functions of x
    r.validate();
    return r;
}

// (u*)* sampled on y_grid; a lower bound of u with equality (within grid
// resolution) wherever u is convex.
inline SampledFunction1D biconjugate(const SampledFunction1D& u,
                                     const std::vector<double>& y_grid,
                                     const std::vector<double>& x_grid) {
    return young_conjugate(young_conjugate(u, x_grid), y_grid);
}

// u(e)(x) = u(e^x), sampled at x_grid by piecewise-linear interpolation in u.
inline SampledFunction1D exp_compose(const SampledFunction1D& u,
                                     const std::vector<double>& x_grid) {
    SampledFunction1D r;
    r.nodes = x_grid;
    r.values.reserve(x_grid.size());
    const double hi = u.nodes.back();
    for (double x : x_grid) {
        const double y = std::exp(x);
        if (y > hi * (1.0 + 1e-12))
            throw RangeError("exp_compose: e^x exceeds the sampled domain of u");
        r.values.push_back(u.value_at(std::clamp(y, u.nodes.front(), hi)));
    }
    r.domain = Domain1D::half_line;
    r.convex = false;
    r.validate();
    return r;
}

// Convenience overload: x-nodes are ln of u's positive nodes, making the
// composition exact at nodes.
inline SampledFunction1D exp_compose(const SampledFunction1D& u) {
    std::vector<double> xs;
    std::vector<double> vs;
    for (size_t i = 0; i < u.nodes.size(); ++i) {
        if (u.nodes[i] > 0.0) {
            xs.push_back(std::log(u.nodes[i]));
            vs.push_back(u.values[i]);
        }
    }
    SampledFunction1D r;
    r.nodes = std::move(xs);
    r.values = std::move(vs);
    r.domain = Domain1D::half_line;
    r.convex = false;
    r.validate();
    return r;
}

namespace detail {

// (u(e))*(x) for a batch of x, with an auto-sized t-range satisfying the
// outer superlinearity certificate for max(xs).
inline std::vector<double> conj_of_exp(const SampledFunction1D& u, const std::vector<double>& xs,
                                       int t_points) {
    const double x_max = *std::max_element(xs.begin(), xs.end());
    const double t_cap = std::log(u.nodes.back());
    if (!(t_cap > 0.0)) throw TruncationError("conj_of_exp: u must be sampled past y = 1");

    auto w1 = [&u](double t) {
        return u.value_at(std::clamp(std::exp(t), u.nodes.front(), u.nodes.back()));
    };

    // locate the smallest T with chord slope of u(e^.) over [T/2, T] >= 2x
    const int scan = 1024;
    double T = -1.0;
    for (int k = 2; k <= scan; ++k) {
        const double t = t_cap * double(k) / double(scan);
        const double slope = (w1(t) - w1(0.5 * t)) / (0.5 * t);
        if (slope >= 2.0 * x_max) {
            T = t;
            break;
        }
    }
    if (T < 0.0)
        throw TruncationError("conj_of_exp: superlinearity certificate failed on composed range");

    std::vector<double> ts = uniform_nodes(0.0, T, t_points);
    std::vector<double> ws(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) ws[i] = w1(ts[i]);

    std::vector<double> out(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) {
        double best = -1e300;
        for (size_t i = 0; i < ts.size(); ++i) best = std::max(best, xs[k] * ts[i] - ws[i]);
        out[k] = best;
    }
    return out;
}

// (u*(e))*(x) for a batch of x.  u*(e^t) is evaluated directly as the grid
// max at z = e^t (no intermediate sampling of u*), which keeps the inner
// value a pure node-value computation.
inline std::vector<double> conj_of_exp_of_conj(const SampledFunction1D& u,
                                               const std::vector<double>& xs, int t_points) {
    const double x_max = *std::max_element(xs.begin(), xs.end());
    const double inner_cap = 0.5 * u.end_slope(); // largest trustworthy conjugate argument
    if (!(inner_cap > 1.0))
        throw TruncationError("conj_of_exp_of_conj: u too flat for any composed range");
    const double t_cap = std::log(inner_cap);

    // coarse pass to find the certificate point (w2 is convex in t); on the
    // uniform scan grid the half point of t_k is t_{k/2}, so chord slopes come
    // free from already-computed values
    const int scan = 512;
    std::vector<double> coarse_t = uniform_nodes(0.0, t_cap, scan + 1);
    std::vector<double> coarse_z(coarse_t.size());
    for (size_t i = 0; i < coarse_z.size(); ++i) coarse_z[i] = std::exp(coarse_t[i]);
    std::vector<double> coarse_w =
        grid_conjugate_values(u.nodes, u.values, coarse_z, u.convex);
    double T = -1.0;
    for (int k = 2; k <= scan; k += 2) {
        const double t = coarse_t[k];
        const double slope = (coarse_w[k] - coarse_w[k / 2]) / (0.5 * t);
        if (slope >= 2.0 * x_max) {
            T = t;
            break;
        }
    }
    if (T < 0.0)
        throw TruncationError(
            "conj_of_exp_of_conj: superlinearity certificate failed on composed range");

    std::vector<double> ts = uniform_nodes(0.0, T, t_points);
    std::vector<double> zs(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) zs[i] = std::exp(ts[i]);
    std::vector<double> ws = grid_conjugate_values(u.nodes, u.values, zs, u.convex);

    std::vector<double> out(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) {
        double best = -1e300;
        for (size_t i = 0; i < ts.size(); ++i) best = std::max(best, xs[k] * ts[i] - ws[i]);
        out[k] = best;
    }
    return out;
}

} // namespace detail

struct LemmaGapOptions {
    int t_points = 20001;
};

// gap(x) = x ln x - x - (u(e))*(x) - (u*(e))*(x), for a batch of x > 0.
// The lemma asserts gap >= 0; grid conjugates make the computed value an
// upper bound of the true gap up to the (small, grid-controlled) node
// deficit of the inner conjugate.
inline std::vector<double> lemma_gap_batch(const SampledFunction1D& u,
                                           const std::vector<double>& xs,
                                           const LemmaGapOptions& opts = {}) {
    for (double x : xs)
        if (!(x > 0.0)) throw RangeError("lemma_gap: x must be positive");
    const auto a = detail::conj_of_exp(u, xs, opts.t_points);
    const auto b = detail::conj_of_exp_of_conj(u, xs, opts.t_points);
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        out[i] = xs[i] * std::log(xs[i]) - xs[i] - a[i] - b[i];
    return out;
}

inline double lemma_gap(const SampledFunction1D& u, double x, const LemmaGapOptions& opts = {}) {
    return lemma_gap_batch(u, {x}, opts)[0];
}

// phi_{m,sigma}(t) = phi_m(sigma * t) sampled on a caller grid, t >= 0.
inline SampledFunction1D directional_weight(const WeightFamily& w, int m, const Point& sigma,
                                            const std::vector<double>& t_grid) {
    if (int(sigma.size()) != w.dim()) throw RangeError("directional_weight: dim mismatch");
    if (std::abs(norm2(sigma) - 1.0) > 1e-12)
        throw RangeError("directional_weight: sigma must be a unit vector");
    SampledFunction1D r;
    r.nodes = t_grid;
    r.values.reserve(t_grid.size());
    Point x(w.dim());
    for (double t : t_grid) {
        for (int j = 0; j < w.dim(); ++j) x[j] = sigma[j] * t;
        r.values.push_back(w.eval(m, x));
    }
    r.domain = Domain1D::half_line;
    r.convex = w.convex();
    r.validate();
    return r;
}

struct TildeWeightOptions {
    int y_points = 400001; // odd so that y = 0 is a node
    double y_start = 8.0;
};

// Two-sided conjugate of a convex 1-D weight:
//   tilde_phi_m(x) = sup_{y in R} (xy - phi_m(y))
// sampled on x_grid, with tail certificates on both ends of the y-range.
inline SampledFunction1D tilde_weight(const WeightFamily& w, int m,
                                      const std::vector<double>& x_grid,
                                      const TildeWeightOptions& opts = {}) {
    if (!w.convex() || w.dim() != 1)
        throw RangeError("tilde_weight: requires a convex 1-D family");
    const double x_pos = std::max(0.0, x_grid.back());
    const double x_neg = std::max(0.0, -x_grid.front());

    double Y = opts.y_start;
    for (int tries = 0;; ++tries) {
        const double right = (w.eval1(m, Y) - w.eval1(m, 0.5 * Y)) / (0.5 * Y);
        const double left = (w.eval1(m, -Y) - w.eval1(m, -0.5 * Y)) / (0.5 * Y);
        if (right > 2.0 * x_pos && left > 2.0 * x_neg) break;
        Y *= 2.0;
        if (tries > 48) throw TruncationError("tilde_weight: tail certificate failed");
    }

    std::vector<double> ys = uniform_nodes(-Y, Y, opts.y_points);
    std::vector<double> us(ys.size());
    for (size_t i = 0; i < ys.size(); ++i) us[i] = w.eval1(m, ys[i]);

    SampledFunction1D r;
    r.nodes = x_grid;
    r.values = detail::grid_conjugate_values(ys, us, x_grid, true);
    r.domain = Domain1D::full_line;
    r.convex = true;
    r.validate();
    return r;
}

struct StirlingFactorOptions {
    int y_points = 200001;
    int t_points = 8001;
    double y_start = 8.0;
};

// N-dependent factor of the final polynomial-stage bound:
//   (N+1)^{N+1} / ( (N+1)! * exp( inf_sigma (phi*_{m,sigma}(e^t))*(N+1) ) )
// evaluated in log space and exponentiated on output.
inline double stirling_bound_factor(const WeightFamily& w, int m, int N,
                                    const std::vector<Point>& sigmas,
                                    const StirlingFactorOptions& opts = {}) {
    if (N < 1) throw RangeError("stirling_bound_factor: N >= 1 required");
    if (sigmas.empty()) throw RangeError("stirling_bound_factor: need sigma samples");
    const double x = double(N + 1);
    double inf_b = 1e300;
    for (const auto& sigma : sigmas) {
        double Y = opts.y_start;
        double b = 0.0;
        for (int tries = 0;; ++tries) {
            if (tries > 40)
                throw TruncationError("stirling_bound_factor: cannot satisfy certificates");
            auto u = directional_weight(w, m, sigma, uniform_nodes(0.0, Y, opts.y_points));
            try {
                b = detail::conj_of_exp_of_conj(u, {x}, opts.t_points)[0];
                break;
            } catch (const TruncationError&) {
                Y *= 2.0;
            }
        }
        inf_b = std::min(inf_b, b);
    }
    const double lf = x * std::log(x) - std::lgamma(x + 1.0) - inf_b;
    return std::exp(lf);
}

} // namespace polydense
