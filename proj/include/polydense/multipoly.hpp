// Sparse multivariate polynomials as multi-index -> coefficient tables.
#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

class MultiPoly {
  public:
    explicit MultiPoly(int dim = 1) : dim_(dim) {}

    int dim() const { return dim_; }

    void add_term(const MultiIndex& alpha, double coeff) {
        if (int(alpha.size()) != dim_) throw RangeError("MultiPoly: index dim mismatch");
        if (coeff == 0.0) return;
        auto [it, inserted] = terms_.try_emplace(alpha, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    double coefficient(const MultiIndex& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? 0.0 : it->second;
    }

    const std::map<MultiIndex, double>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& [a, c] : terms_) d = std::max(d, order_of(a));
        return d;
    }

    double eval(const Point& x) const {
        double s = 0.0;
        for (const auto& [a, c] : terms_) {
            double t = c;
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < a[j]; ++k) t *= x[j];
            s += t;
        }
        return s;
    }

    MultiPoly derivative(const MultiIndex& alpha) const {
        MultiPoly r(dim_);
        for (const auto& [a, c] : terms_) {
            MultiIndex b(dim_);
            double fac = 1.0;
            bool dead = false;
            for (int j = 0; j < dim_; ++j) {
                if (a[j] < alpha[j]) {
                    dead = true;
                    break;
                }
                b[j] = a[j] - alpha[j];
                for (int k = 0; k < alpha[j]; ++k) fac *= double(a[j] - k);
            }
            if (!dead) r.add_term(b, c * fac);
        }
        return r;
    }

    MultiPoly scaled(double s) const {
        MultiPoly r(dim_);
        for (const auto& [a, c] : terms_) r.add_term(a, c * s);
        return r;
    }

    MultiPoly plus(const MultiPoly& o) const {
        MultiPoly r = *this;
        for (const auto& [a, c] : o.terms_) r.add_term(a, c);
        return r;
    }

  private:
    int dim_;
    std::map<MultiIndex, double> terms_;
};

} // namespace polydense
