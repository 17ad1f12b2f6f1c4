// Candidate functions with exact derivative oracles, the weighted seminorms
// q_{p,m}, tail certificates, and the finite-difference oracle validator.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/cutoff.hpp"
#include "polydense/grids.hpp"
#include "polydense/weights.hpp"

namespace polydense {

struct SmoothFunction {
    using DerivFn = std::function<double(const MultiIndex&, const Point&)>;

    std::string name;
    int dim = 1;
    int max_order = 0;
    DerivFn deriv_fn;
    std::optional<Box> support;             // absent: whole space
    std::map<int, double> growth_certificate; // m -> c_m with |D^a f| <= c_m theta_m, |a| <= m

    double deriv(const MultiIndex& alpha, const Point& x) const {
        if (order_of(alpha) > max_order)
            throw OrderError(name + ": derivative order beyond oracle (max " +
                             std::to_string(max_order) + ")");
        if (support && !support->contains(x)) return 0.0;
        return deriv_fn(alpha, x);
    }

    double operator()(const Point& x) const { return deriv(zero_index(dim), x); }

    // 1-D conveniences
    double deriv1(int k, double x) const { return deriv(MultiIndex{k}, Point{x}); }
    double eval1(double x) const { return deriv1(0, x); }
};

// ---- the 1-D test fleet ----

inline SmoothFunction make_gaussian() {
    // D^k e^{-x^2} = (-1)^k H_k(x) e^{-x^2}, physicists' Hermite recurrence
    SmoothFunction f;
    f.name = "gaussian";
    f.max_order = 16;
    f.deriv_fn = [](const MultiIndex& a, const Point& x) {
        const int k = a[0];
        const double t = x[0];
        double hk = 1.0, hk1 = 0.0; // H_0, H_{-1}
        for (int j = 0; j < k; ++j) {
            const double next = 2.0 * t * hk - 2.0 * double(j) * hk1;
            hk1 = hk;
            hk = next;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        return sign * hk * std::exp(-t * t);
    };
    return f;
}

inline SmoothFunction make_cosh() {
    SmoothFunction f;
    f.name = "cosh";
    f.max_order = 16;
    f.deriv_fn = [](const MultiIndex& a, const Point& x) {
        return (a[0] % 2 == 0) ? std::cosh(x[0]) : std::sinh(x[0]);
    };
    return f;
}

inline SmoothFunction make_sin_gaussian() {
    SmoothFunction f;
    f.name = "sin_gaussian";
    f.max_order = 10;
    auto gauss = make_gaussian();
    f.deriv_fn = [gauss](const MultiIndex& a, const Point& x) {
        const int k = a[0];
        const double t = x[0];
        // Leibniz over sin^{(j)}(t) * (e^{-t^2})^{(k-j)}
        double s = 0.0;
        for (int j = 0; j <= k; ++j) {
            double sj;
            switch (j % 4) {
                case 0: sj = std::sin(t); break;
                case 1: sj = std::cos(t); break;
                case 2: sj = -std::sin(t); break;
                default: sj = -std::cos(t); break;
            }
            s += binomial(k, j) * sj * gauss.deriv1(k - j, t);
        }
        return s;
    };
    return f;
}

// compactly supported bump: the cutoff transition itself (1 on [-1,1],
// supported in [-2,2])
inline SmoothFunction make_bump() {
    SmoothFunction f;
    f.name = "bump";
    f.max_order = kCutoffMaxOrder;
    f.support = Box{2.0, 1};
    f.deriv_fn = [](const MultiIndex& a, const Point& x) {
        return cutoff_chi_deriv(a[0], x[0]);
    };
    return f;
}

inline SmoothFunction make_polynomial(std::vector<double> coeffs) {
    SmoothFunction f;
    f.name = "polynomial";
    f.max_order = 16;
    f.deriv_fn = [c = std::move(coeffs)](const MultiIndex& a, const Point& x) {
        const int k = a[0];
        double s = 0.0;
        for (size_t j = size_t(k); j < c.size(); ++j) {
            double fac = 1.0;
            for (int i = 0; i < k; ++i) fac *= double(j - size_t(i));
            s = s + c[j] * fac * std::pow(x[0], double(j - size_t(k)));
        }
        return s;
    };
    return f;
}

inline SmoothFunction make_monomial(int degree) {
    SmoothFunction f;
    f.name = "x^" + std::to_string(degree);
    f.max_order = 64;
    f.deriv_fn = [degree](const MultiIndex& a, const Point& x) {
        const int k = a[0];
        if (k > degree) return 0.0;
        double fac = 1.0;
        for (int i = 0; i < k; ++i) fac *= double(degree - i);
        return fac * std::pow(x[0], double(degree - k));
    };
    return f;
}

inline SmoothFunction make_zero(int dim) {
    SmoothFunction f;
    f.name = "zero";
    f.dim = dim;
    f.max_order = 64;
    f.deriv_fn = [](const MultiIndex&, const Point&) { return 0.0; };
    return f;
}

// tensor product (n = 2)
inline SmoothFunction make_product(const SmoothFunction& fx, const SmoothFunction& fy) {
    SmoothFunction f;
    f.name = fx.name + "*" + fy.name;
    f.dim = 2;
    f.max_order = std::min(fx.max_order, fy.max_order);
    if (fx.support && fy.support)
        f.support = Box{std::max(fx.support->radius, fy.support->radius), 2};
    f.deriv_fn = [fx, fy](const MultiIndex& a, const Point& x) {
        return fx.deriv1(a[0], x[0]) * fy.deriv1(a[1], x[1]);
    };
    return f;
}

inline SmoothFunction sf_subtract(const SmoothFunction& a, const SmoothFunction& b) {
    SmoothFunction f;
    f.name = a.name + "-" + b.name;
    f.dim = a.dim;
    f.max_order = std::min(a.max_order, b.max_order);
    f.deriv_fn = [a, b](const MultiIndex& al, const Point& x) {
        return a.deriv(al, x) - b.deriv(al, x);
    };
    return f;
}

inline SmoothFunction sf_scale(const SmoothFunction& a, double s) {
    SmoothFunction f = a;
    f.name = "scaled_" + a.name;
    f.deriv_fn = [a, s](const MultiIndex& al, const Point& x) { return s * a.deriv(al, x); };
    return f;
}

inline SmoothFunction sf_shift(const SmoothFunction& a, double offset) {
    SmoothFunction f;
    f.name = a.name + "_shifted";
    f.dim = a.dim;
    f.max_order = a.max_order;
    if (a.support) f.support = Box{a.support->radius + std::abs(offset), a.dim};
    f.deriv_fn = [a, offset](const MultiIndex& al, const Point& x) {
        Point y(x);
        for (auto& v : y) v -= offset;
        return a.deriv(al, y);
    };
    return f;
}

// select by name (the CLI fleet)
inline SmoothFunction fleet_by_name(const std::string& name) {
    if (name == "gaussian") return make_gaussian();
    if (name == "cosh") return make_cosh();
    if (name == "sin_gaussian") return make_sin_gaussian();
    if (name == "bump") return make_bump();
    if (name == "polynomial") return make_polynomial({1.0, 1.0, 0.5});
    throw ConfigError("unknown fleet function: " + name);
}

// ---- seminorms ----

struct SeminormResult {
    double value = 0.0;          // grid max of |D^a f| / theta_m
    double boundary_ratio = 0.0; // same max restricted to the outermost shell
    Point arg_max;
    MultiIndex arg_alpha;
};

// q_{p,m}(f) as a grid maximum over the box, evaluated in log space.
// The boundary ratio lets callers assess truncation of the sup over R^n.
inline SeminormResult seminorm_q(const SmoothFunction& f, int p, int m, const WeightFamily& w,
                                 const GridSpec& g) {
    if (p > f.max_order) throw OrderError("seminorm_q: p exceeds the derivative oracle");
    if (p < 0 || m < 1) throw RangeError("seminorm_q: need p >= 0, m >= 1");
    const auto alphas = multi_indices_up_to(f.dim, p);
    SeminormResult res;
    res.arg_max = Point(f.dim, 0.0);
    res.arg_alpha = zero_index(f.dim);
    g.for_each_point([&](const Point& x, bool boundary) {
        const double phi = w.eval(m, x);
        for (const auto& a : alphas) {
            const double d = f.deriv(a, x);
            if (d == 0.0) continue;
            const double ratio = std::exp(std::log(std::abs(d)) - phi);
            if (ratio > res.value) {
                res.value = ratio;
                res.arg_max = x;
                res.arg_alpha = a;
            }
            if (boundary && ratio > res.boundary_ratio) res.boundary_ratio = ratio;
        }
    });
    return res;
}

// canonical q_m = q_{m,m}
inline SeminormResult q_m(const SmoothFunction& f, int m, const WeightFamily& w,
                          const GridSpec& g) {
    return seminorm_q(f, m, m, w, g);
}

// Upper bound for the tail sup_{x not in Pi_r} |D^a f| / theta_m, |a| <= m:
//   c_{m+1} * exp( -min_{||x||_inf = r} (phi_m - phi_{m+1})(x) ).
// Valid because the weight difference keeps growing beyond r, which is
// probed before trusting the shell minimum.
inline double tail_certificate(const SmoothFunction& f, const WeightFamily& w, int m, double r) {
    auto it = f.growth_certificate.find(m + 1);
    if (it == f.growth_certificate.end())
        throw CertificateError("tail_certificate: no growth certificate c_{m+1} for " + f.name);
    const double c = it->second;

    auto shell_min_diff = [&](double radius) {
        double mn = 1e300;
        for (const auto& x : shell_points(w.dim(), radius))
            mn = std::min(mn, w.eval(m, x) - w.eval(m + 1, x));
        return mn;
    };
    const double d0 = shell_min_diff(r);
    double prev = d0;
    for (double radius : {2.0 * r, 4.0 * r, 8.0 * r}) {
        const double d = shell_min_diff(radius);
        if (!(d > prev))
            throw CertificateError("tail_certificate: weight difference not increasing past r");
        prev = d;
    }
    return c * std::exp(-d0);
}

// Attach measured growth constants c_m (grid sup of the ratio, times a small
// safety factor).  Measured certificates are data used by the tail machinery;
// their validity rests on the ratio decaying beyond the measurement box.
inline void attach_measured_certificate(SmoothFunction& f, const WeightFamily& w, int m_max,
                                        double box_radius, int points = 2048,
                                        double safety = 1.05) {
    for (int m = 1; m <= m_max; ++m) {
        GridSpec g{Box{box_radius, f.dim}, points};
        const auto r = seminorm_q(f, std::min(m, f.max_order), m, w, g);
        f.growth_certificate[m] = r.value * safety;
    }
}

// |oracle - finite difference| for D^alpha via a 4th-order central stencil on
// the oracle one order lower along the first active axis.
inline double fd_check(const SmoothFunction& f, const MultiIndex& alpha, const Point& x,
                       double step) {
    if (order_of(alpha) > f.max_order) throw OrderError("fd_check: order beyond oracle");
    if (order_of(alpha) == 0) return 0.0;
    int axis = 0;
    while (alpha[axis] == 0) ++axis;
    MultiIndex lower = alpha;
    lower[axis] -= 1;
    auto g = [&](double t) {
        Point y(x);
        y[axis] = t;
        return f.deriv(lower, y);
    };
    const double t0 = x[axis];
    const double fd = (-g(t0 + 2 * step) + 8 * g(t0 + step) - 8 * g(t0 - step) +
                       g(t0 - 2 * step)) /
                      (12.0 * step);
    return std::abs(f.deriv(alpha, x) - fd);
}

} // namespace polydense
