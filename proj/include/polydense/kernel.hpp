// The entire kernel of exponential type:
//   h(z) = sin^2(z/2) / z^2 = (1 - cos z) / (2 z^2),
//   H(x) = h(x_1) ... h(x_n),
// its derivative oracles, exact Taylor coefficients from series division,
// mass, the uniform derivative-bound certificate C_H, and the degree-N
// truncation U_N with its remainder bound.
#pragma once

#include <array>
#include <cmath>
#include <mutex>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/grids.hpp"
#include "polydense/multipoly.hpp"
#include "polydense/quadrature.hpp"

namespace polydense {

inline constexpr int kKernelMaxDerivOrder = 8;

// coefficient of z^k in h:  (-1)^{k/2} / (2 (k+2)!)  for even k, else 0
inline double kernel_taylor_coefficient(int k) {
    if (k < 0) throw RangeError("kernel_taylor_coefficient: k >= 0");
    if (k % 2 == 1) return 0.0;
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign / (2.0 * factorial(k + 2));
}

// h(x), removable singularity handled by a 4-term series for |x| < 1e-4
inline double fejer_h(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 0.25 - x2 / 48.0 + x2 * x2 / 1440.0 - x2 * x2 * x2 / 80640.0;
    }
    const double s = std::sin(0.5 * x);
    return s * s / (x * x);
}

// k-th derivative of h, k <= 8.  Near the origin the even power series is
// differentiated term by term; elsewhere the closed form (1-cos x)/(2x^2)
// is differentiated via Leibniz with (x^{-2})^{(j)} = (-1)^j (j+1)! x^{-j-2}.
inline double fejer_h_deriv(int k, double x) {
    if (k < 0 || k > kKernelMaxDerivOrder) throw OrderError("fejer_h_deriv: order beyond oracle");
    if (k == 0) return fejer_h(x);
    if (std::abs(x) < 0.5) {
        double s = 0.0;
        for (int p = k + (k % 2); p <= 40; p += 2) {
            double fac = 1.0;
            for (int i = 0; i < k; ++i) fac *= double(p - i);
            s += kernel_taylor_coefficient(p) * fac * std::pow(x, double(p - k));
        }
        return s;
    }
    // d^j (1 - cos x): j = 0 -> 1 - cos x, then the sin/cos cycle
    auto trig = [&](int j) {
        if (j == 0) return 1.0 - std::cos(x);
        switch (j % 4) {
            case 1: return std::sin(x);
            case 2: return std::cos(x);
            case 3: return -std::sin(x);
            default: return -std::cos(x);
        }
    };
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
        const int q = k - j; // order on x^{-2}
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        s += binomial(k, j) * trig(j) * sign * factorial(q + 1) * std::pow(x, double(-q - 2));
    }
    return 0.5 * s;
}

inline double fejer_H(const Point& x) {
    double r = 1.0;
    for (double v : x) r *= fejer_h(v);
    return r;
}

namespace detail {

// A_1 = integral of h over R: quadrature over [-R,R] plus the analytic tail
//   T(R) = 1/R + sin R / R^2 - 2 cos R / R^3 - 6 sin R / R^4 + O(R^-4)
// obtained by repeated integration by parts of (1-cos x)/x^2.
inline double kernel_mass_1d_impl() {
    const double R = 1000.0;
    const double core = composite_gl15([](double t) { return fejer_h(t); }, -R, R, 0.25);
    const double tail = 1.0 / R + std::sin(R) / (R * R) - 2.0 * std::cos(R) / (R * R * R) -
                        6.0 * std::sin(R) / (R * R * R * R);
    return core + tail;
}

} // namespace detail

inline double kernel_mass_1d() {
    static const double v = detail::kernel_mass_1d_impl();
    return v;
}

// A = (A_1)^n for the product kernel
inline double kernel_mass(int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= kernel_mass_1d();
    return r;
}

// Upper bound for the tail integral of H outside ||u|| > R.
// n = 1: integrand <= 1/u^2 gives 2/R.
// n = 2: {||u||>R} is covered by {|u_1|>R/sqrt 2} u {|u_2|>R/sqrt 2}.
inline double kernel_tail_mass_bound(int n, double R) {
    if (R <= 0.0) throw RangeError("kernel_tail_mass_bound: R > 0 required");
    if (n == 1) return 2.0 / R;
    if (n == 2) return 2.0 * (2.0 * std::sqrt(2.0) / R) * kernel_mass_1d();
    throw RangeError("kernel_tail_mass_bound: n in {1,2}");
}

// Grid sup of |h^{(k)}| over |x| <= 50 for k <= 8, cached.  Each |h^{(k)}|
// decays like 1/x^2 beyond the grid, so the grid max times the 5% safety
// factor certifies the sup over R.
inline const std::array<double, kKernelMaxDerivOrder + 1>& kernel_deriv_sups() {
    static const std::array<double, kKernelMaxDerivOrder + 1> sups = [] {
        std::array<double, kKernelMaxDerivOrder + 1> s{};
        const int pts = 100001;
        for (int i = 0; i < pts; ++i) {
            const double x = -50.0 + 100.0 * double(i) / double(pts - 1);
            for (int k = 0; k <= kKernelMaxDerivOrder; ++k)
                s[size_t(k)] = std::max(s[size_t(k)], std::abs(fejer_h_deriv(k, x)));
        }
        return s;
    }();
    return sups;
}

// Certified sup bound for |D^alpha H| with |alpha| <= p (empirical grid sup
// combined through the product structure, times a 5% safety factor).
inline double estimate_CH(int p, int n) {
    if (p < 0 || p > kKernelMaxDerivOrder) throw OrderError("estimate_CH: order beyond oracle");
    const auto& sups = kernel_deriv_sups();
    double mx = 0.0;
    for (int k = 0; k <= p; ++k) mx = std::max(mx, sups[size_t(k)]);
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= mx;
    return r * 1.05;
}

// Degree-N Taylor truncation of H, exact coefficients from the 1-D series
// and the product structure: coeff(alpha) = prod_j c_{alpha_j}, |alpha| <= N.
inline MultiPoly taylor_U(int N, int n) {
    if (N < 0) throw RangeError("taylor_U: N >= 0");
    MultiPoly u(n);
    std::vector<MultiIndex> all = multi_indices_up_to(n, N);
    for (const auto& a : all) {
        double c = 1.0;
        bool zero = false;
        for (int j = 0; j < n; ++j) {
            if (a[j] % 2 == 1) {
                zero = true;
                break;
            }
            c *= kernel_taylor_coefficient(a[j]);
        }
        if (!zero) u.add_term(a, c);
    }
    return u;
}

// Eq.-style remainder bound  C_H (N+2)^n ||x||^{N+1} / (N+1)!
inline double remainder_bound(int N, const Point& x, double C_H, int n) {
    const double r = norm2(x);
    double pw = 1.0;
    for (int i = 0; i < n; ++i) pw *= double(N + 2);
    return C_H * pw * std::pow(r, double(N + 1)) * std::exp(-log_factorial(N + 1));
}

// H(x) - U_N(x) evaluated through the series tail (mathematically identical,
// but accurate far below the double-precision noise floor of the direct
// difference).  1-D: sum_{k>N} c_k z^k; products: sum over |alpha| > N.
inline double kernel_remainder_series(const Point& x, int N) {
    const int n = int(x.size());
    const int K = 96; // |c_K| 5^K / (2 (K+2)!) is ~1e-90 at ||x|| <= 5
    if (n == 1) {
        double s = 0.0;
        for (int k = K - (K % 2); k > N; k -= 2)
            s += kernel_taylor_coefficient(k) * std::pow(x[0], double(k));
        return s;
    }
    if (n == 2) {
        double s = 0.0;
        for (int a = K; a >= 0; a -= 2) {
            const double ca = kernel_taylor_coefficient(a) * std::pow(x[0], double(a));
            for (int b = K; b >= 0 && a + b > N; b -= 2)
                s += ca * kernel_taylor_coefficient(b) * std::pow(x[1], double(b));
        }
        return s;
    }
    throw RangeError("kernel_remainder_series: n in {1,2}");
}

} // namespace polydense
