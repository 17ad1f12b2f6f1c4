// The C-infinity cutoff chi: 1 on [-1,1], supported in [-2,2], built from the
// e^{-1/t} transition g(t) = psi(t)/(psi(t)+psi(1-t)).  Derivatives up to
// order 4 come from jet arithmetic on the closed form (validated by finite
// differences in the tests).
#pragma once

#include <cmath>

#include "polydense/common.hpp"
#include "polydense/jet.hpp"

namespace polydense {

inline constexpr int kCutoffMaxOrder = 4;

namespace detail {

// psi(t) = e^{-1/t} for t > 0, else 0, as a jet at t0 (t0 bounded away from 0
// whenever called: the transition region keeps t in (0,1)).
inline Jet psi_jet(double t0, int order) {
    Jet t = Jet::variable(t0, order);
    return jet_exp(reciprocal(t) * (-1.0));
}

} // namespace detail

// k-th derivative of chi at x, k <= kCutoffMaxOrder (k = 0 is the value).
inline double cutoff_chi_deriv(int k, double x) {
    if (k < 0 || k > kCutoffMaxOrder) throw OrderError("cutoff_chi_deriv: order beyond oracle");
    const double ax = std::abs(x);
    if (ax <= 1.0) return k == 0 ? 1.0 : 0.0;
    if (ax >= 2.0) return 0.0;
    // chi(x) = g(2 - |x|) with g = psi(s)/(psi(s)+psi(1-s)), s in (0,1).
    // Both psi factors are jets in s composed with affine inner maps of x:
    //   s = 2 - sgn(x)*x  gives factor (-sgn)^j on the j-th coefficient,
    //   1 - s = sgn(x)*x - 1 gives factor (+sgn)^j.
    const double s = 2.0 - ax;
    const Jet ps = detail::psi_jet(s, k);
    const Jet qs = detail::psi_jet(1.0 - s, k);
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    Jet p(k), q(k);
    double fp = 1.0, fq = 1.0;
    for (int j = 0; j <= k; ++j) {
        p.c[size_t(j)] = ps.c[size_t(j)] * fp;
        q.c[size_t(j)] = qs.c[size_t(j)] * fq;
        fp *= -sgn;
        fq *= sgn;
    }
    const Jet g = p / (p + q);
    return g.derivative(k);
}

inline double cutoff_chi(double x) { return cutoff_chi_deriv(0, x); }

// eta(x) = chi(x_1) ... chi(x_n) and its partial derivatives.
inline double cutoff_eta_deriv(const MultiIndex& alpha, const Point& x) {
    double r = 1.0;
    for (size_t j = 0; j < x.size(); ++j) {
        r *= cutoff_chi_deriv(alpha[j], x[j]);
        if (r == 0.0) return 0.0;
    }
    return r;
}

} // namespace polydense
