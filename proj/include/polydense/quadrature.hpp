// 1-D quadrature: composite 15-point Gauss-Legendre panels and an adaptive
// Gauss-Kronrod (G7,K15) driver for oracle-grade integrals.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

namespace detail {
// 15-point Gauss-Legendre nodes/weights on [-1,1] (positive half; node 0 first).
inline constexpr std::array<double, 8> kGl15Nodes = {
    0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
    0.5709721726085388, 0.7244177313601701, 0.8482065834104272,
    0.9372733924007060, 0.9879925180204854};
inline constexpr std::array<double, 8> kGl15Weights = {
    0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
    0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
    0.0703660474881081, 0.0307532419961173};

// Kronrod-15 / Gauss-7 pair: abscissa, gauss weight, kronrod weight.
inline constexpr double kGk[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};
} // namespace detail

// One GL-15 panel over [a,b].
template <class F>
double gl15_panel(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = detail::kGl15Weights[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * detail::kGl15Nodes[i];
        s += detail::kGl15Weights[i] * (f(mid + dx) + f(mid - dx));
    }
    return s * half;
}

// Composite GL-15 with fixed panel width (last panel may be shorter).
template <class F>
double composite_gl15(const F& f, double a, double b, double panel_width) {
    if (!(panel_width > 0.0)) throw ResolutionError("composite_gl15: panel width must be positive");
    if (b <= a) return 0.0;
    const int n = std::max(1, int(std::ceil((b - a) / panel_width)));
    const double w = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gl15_panel(f, a + i * w, a + (i + 1) * w);
    return s;
}

// Precomputed composite GL-15 rule, for integrating many functions over one mesh.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadRule composite(double a, double b, double panel_width) {
        if (!(panel_width > 0.0)) throw ResolutionError("QuadRule: panel width must be positive");
        QuadRule r;
        const int n = std::max(1, int(std::ceil((b - a) / panel_width)));
        const double w = (b - a) / n;
        r.nodes.reserve(size_t(n) * 15);
        r.weights.reserve(size_t(n) * 15);
        for (int i = 0; i < n; ++i) {
            const double lo = a + i * w, hi = a + (i + 1) * w;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            r.nodes.push_back(mid);
            r.weights.push_back(half * detail::kGl15Weights[0]);
            for (int j = 1; j < 8; ++j) {
                const double dx = half * detail::kGl15Nodes[j];
                r.nodes.push_back(mid + dx);
                r.weights.push_back(half * detail::kGl15Weights[j]);
                r.nodes.push_back(mid - dx);
                r.weights.push_back(half * detail::kGl15Weights[j]);
            }
        }
        return r;
    }

    template <class F>
    double integrate(const F& f) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Adaptive G7/K15 bisection. Deterministic: intervals processed LIFO.
template <class F>
double adaptive_integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                          double abs_tol = 1e-14, int max_intervals = 4000) {
    struct Iv {
        double a, b;
    };
    std::vector<Iv> stack{{a, b}};
    double total = 0.0;
    int used = 0;
    while (!stack.empty()) {
        const Iv iv = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (iv.a + iv.b);
        const double half = 0.5 * (iv.b - iv.a);
        const double y0 = f(mid);
        double g7 = detail::kGk[0][1] * y0;
        double k15 = detail::kGk[0][2] * y0;
        for (int i = 1; i < 8; ++i) {
            const double dx = half * detail::kGk[i][0];
            const double yi = f(mid + dx) + f(mid - dx);
            g7 += detail::kGk[i][1] * yi;
            k15 += detail::kGk[i][2] * yi;
        }
        g7 *= half;
        k15 *= half;
        double err = 200.0 * std::abs(g7 - k15);
        err *= std::sqrt(err);
        if (err < rel_tol * std::abs(k15) || err < abs_tol || ++used >= max_intervals) {
            total += k15;
        } else {
            stack.push_back({iv.a, mid});
            stack.push_back({mid, iv.b});
        }
    }
    return total;
}

} // namespace polydense
