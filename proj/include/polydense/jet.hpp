// Truncated Taylor-series arithmetic ("jets") of runtime order.  Used to get
// machine-accurate derivatives of composite closed forms (the smooth cutoff)
// without symbolic algebra or finite differences.
#pragma once

#include <cmath>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

struct Jet {
    std::vector<double> c; // c[k] = f^{(k)}(x0)/k!

    explicit Jet(int order) : c(size_t(order) + 1, 0.0) {}

    static Jet constant(double v, int order) {
        Jet j(order);
        j.c[0] = v;
        return j;
    }

    static Jet variable(double x0, int order) {
        Jet j(order);
        j.c[0] = x0;
        if (order >= 1) j.c[1] = 1.0;
        return j;
    }

    int order() const { return int(c.size()) - 1; }
    double value() const { return c[0]; }
    double derivative(int k) const { return c[size_t(k)] * factorial(k); }

    Jet operator+(const Jet& o) const {
        Jet r(order());
        for (size_t k = 0; k < c.size(); ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r(order());
        for (size_t k = 0; k < c.size(); ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r(order());
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; i + j < c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    Jet operator*(double s) const {
        Jet r(order());
        for (size_t k = 0; k < c.size(); ++k) r.c[k] = c[k] * s;
        return r;
    }
};

// 1/u, requires u(x0) != 0
inline Jet reciprocal(const Jet& u) {
    Jet r(u.order());
    r.c[0] = 1.0 / u.c[0];
    for (int k = 1; k <= u.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += u.c[size_t(j)] * r.c[size_t(k - j)];
        r.c[size_t(k)] = -s / u.c[0];
    }
    return r;
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

// exp(u), standard convolution recurrence
inline Jet jet_exp(const Jet& u) {
    Jet r(u.order());
    r.c[0] = std::exp(u.c[0]);
    for (int k = 1; k <= u.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += double(j) * u.c[size_t(j)] * r.c[size_t(k - j)];
        r.c[size_t(k)] = s / double(k);
    }
    return r;
}

} // namespace polydense
