// Fourier-Laplace transform of discrete functionals and growth norms in the
// weighted entire-function spaces Q(tilde phi_m), forward direction only.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/conjugate.hpp"
#include "polydense/sampled.hpp"
#include "polydense/smoothfn.hpp"
#include "polydense/weights.hpp"

namespace polydense {

using Complex = std::complex<double>;

struct FunctionalTerm {
    Complex coeff;
    int order = 0;   // derivative order k >= 0
    double point = 0.0; // evaluation point a
};

// F(f) = sum_j c_j f^{(k_j)}(a_j), a finite point-derivative combination.
struct DiscreteFunctional {
    std::string name;
    std::vector<FunctionalTerm> terms;

    Complex apply(const SmoothFunction& f) const {
        Complex s = 0.0;
        for (const auto& t : terms) s += t.coeff * f.deriv1(t.order, t.point);
        return s;
    }

    int max_order() const {
        int k = 0;
        for (const auto& t : terms) k = std::max(k, t.order);
        return k;
    }

    bool real_coefficients() const {
        for (const auto& t : terms)
            if (t.coeff.imag() != 0.0) return false;
        return true;
    }
};

inline DiscreteFunctional delta(double a) { return {"delta_" + std::to_string(a), {{1.0, 0, a}}}; }

inline DiscreteFunctional delta_deriv(int k, double a) {
    return {"delta^(" + std::to_string(k) + ")_" + std::to_string(a), {{1.0, k, a}}};
}

// An entire function given by an evaluator; entirety is declared, not checked.
struct EntireSample {
    std::string name;
    std::function<Complex(Complex)> eval;

    Complex operator()(Complex z) const { return eval(z); }
};

// F_hat(lambda) = F(e^{-i lambda x}) = sum_j c_j (-i lambda)^{k_j} e^{-i lambda a_j}
inline EntireSample flt_transform(const DiscreteFunctional& F) {
    auto terms = F.terms;
    return {F.name + "_hat", [terms](Complex lam) {
                Complex s = 0.0;
                const Complex mi(0.0, -1.0);
                for (const auto& t : terms) {
                    Complex p = 1.0;
                    for (int i = 0; i < t.order; ++i) p *= mi * lam;
                    s += t.coeff * p * std::exp(mi * lam * t.point);
                }
                return s;
            }};
}

// Linear combination a*F + b*G of evaluators (for linearity checks).
inline EntireSample entire_combine(Complex a, const EntireSample& f, Complex b,
                                   const EntireSample& g) {
    auto fe = f.eval;
    auto ge = g.eval;
    return {"combo", [a, fe, b, ge](Complex z) { return a * fe(z) + b * ge(z); }};
}

struct RectGrid {
    double re_half = 8.0;  // rectangle [-R, R] x [-Y, Y]
    double im_half = 4.0;
    int points_per_axis = 129; // odd: includes the axes and the origin
};

struct GrowthReport {
    double value = 0.0;        // sup of |f| / ((1+|z|)^m exp(tilde phi_m(Im z)))
    Complex attained{0.0, 0.0};
    bool divergent = false;
    double boundary_ratio = 0.0;
    double rect_re = 0.0, rect_im = 0.0; // final rectangle
};

namespace detail {

struct RectSup {
    double value = 0.0;
    Complex attained{0.0, 0.0};
    double boundary = 0.0;
};

inline RectSup rect_sup(const EntireSample& f, int m, const WeightFamily& w, double R, double Y,
                        int pts) {
    // tilde phi_m evaluated once per distinct Im value
    std::vector<double> ys(pts);
    for (int i = 0; i < pts; ++i) ys[i] = -Y + 2.0 * Y * double(i) / double(pts - 1);
    const int mm = std::max(1, m);
    const auto tilde = tilde_weight(w, mm, ys);
    RectSup out;
    for (int i = 0; i < pts; ++i) {
        const double yv = ys[i];
        const double tv = tilde.values[size_t(i)];
        for (int j = 0; j < pts; ++j) {
            const double xv = -R + 2.0 * R * double(j) / double(pts - 1);
            const Complex z(xv, yv);
            const double az = std::abs(f(z));
            if (az == 0.0) continue;
            const double lr = std::log(az) - double(m) * std::log1p(std::abs(z)) - tv;
            const double r = std::exp(lr);
            const bool boundary = (i == 0 || i == pts - 1 || j == 0 || j == pts - 1);
            if (r > out.value) {
                out.value = r;
                out.attained = z;
            }
            if (boundary) out.boundary = std::max(out.boundary, r);
        }
    }
    return out;
}

} // namespace detail

// N_m(f) on an enlarging-rectangle protocol: the rectangle is doubled until
// the sup stabilizes; a sup that keeps growing geometrically is DIVERGENT
// (data, not an error).  m = 0 drops the polynomial factor; the conjugate
// weight index is clamped to 1.
inline GrowthReport growth_norm(const EntireSample& f, int m, const WeightFamily& w,
                                const RectGrid& grid = {}) {
    GrowthReport rep;
    double R = grid.re_half, Y = grid.im_half;
    double prev = -1.0;
    detail::RectSup last;
    int growing = 0;
    for (int e = 0; e < 4; ++e) {
        last = detail::rect_sup(f, m, w, R, Y, grid.points_per_axis);
        if (prev > 0.0) {
            if (last.value > 1.25 * prev)
                ++growing;
            else
                growing = 0;
        }
        prev = last.value;
        if (e < 3) {
            R *= 2.0;
            Y *= 2.0;
        }
    }
    rep.value = last.value;
    rep.attained = last.attained;
    rep.boundary_ratio = last.boundary;
    rep.rect_re = R;
    rep.rect_im = Y;
    rep.divergent = (growing >= 2);
    return rep;
}

// Closed-form k-th derivative of F_hat at 0:
//   F_hat^{(k)}(0) = sum_{j: k_j <= k} c_j C(k, k_j) k_j! (-i)^{k_j} (-i a_j)^{k - k_j}
inline Complex flt_deriv0_closed_form(const DiscreteFunctional& F, int k) {
    Complex s = 0.0;
    const Complex mi(0.0, -1.0);
    for (const auto& t : F.terms) {
        if (t.order > k) continue;
        Complex p = 1.0;
        for (int i = 0; i < t.order; ++i) p *= mi;
        Complex q = 1.0;
        for (int i = 0; i < k - t.order; ++i) q *= mi * t.point;
        s += t.coeff * binomial(k, t.order) * factorial(t.order) * p * q;
    }
    return s;
}

// Residual of the moment identity F(x^k) = i^k F_hat^{(k)}(0), closed form.
inline double moment_check(const DiscreteFunctional& F, int k) {
    if (k > 6) throw OrderError("moment_check: k <= 6");
    const Complex lhs = F.apply(make_monomial(k));
    Complex ik = 1.0;
    for (int i = 0; i < k; ++i) ik *= Complex(0.0, 1.0);
    const Complex rhs = ik * flt_deriv0_closed_form(F, k);
    return std::abs(lhs - rhs);
}

// Same residual with the transform-side derivative taken by a k-th central
// finite difference with one Richardson step (validation path; looser).
inline double moment_check_fd(const DiscreteFunctional& F, int k, double fd_step) {
    if (k > 6) throw OrderError("moment_check_fd: k <= 6");
    const EntireSample fh = flt_transform(F);
    auto kth_diff = [&](double h) {
        Complex s = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            s += sign * binomial(k, j) * fh(Complex((0.5 * k - j) * h, 0.0));
        }
        return s / std::pow(h, double(k));
    };
    const Complex d1 = kth_diff(fd_step);
    const Complex d2 = kth_diff(0.5 * fd_step);
    const Complex rich = (4.0 * d2 - d1) / 3.0;
    const Complex lhs = F.apply(make_monomial(k));
    Complex ik = 1.0;
    for (int i = 0; i < k; ++i) ik *= Complex(0.0, 1.0);
    return std::abs(lhs - ik * rich);
}

// Hermitian symmetry residual max |F_hat(-conj z) - conj(F_hat(z))| on a grid.
inline double hermitian_residual(const EntireSample& f, double R, double Y, int pts) {
    double mx = 0.0;
    for (int i = 0; i < pts; ++i) {
        const double yv = -Y + 2.0 * Y * double(i) / double(pts - 1);
        for (int j = 0; j < pts; ++j) {
            const double xv = -R + 2.0 * R * double(j) / double(pts - 1);
            const Complex z(xv, yv);
            mx = std::max(mx, std::abs(f(Complex(-z.real(), z.imag())) - std::conj(f(z))));
        }
    }
    return mx;
}

} // namespace polydense
