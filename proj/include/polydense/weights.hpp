// Weight families phi_m on R^n, their exponentials theta_m, and empirical
// growth-condition checks.
//
// Two concrete families are shipped:
//   power:        phi_m(x) = (1 + 1/m) ||x||^a,  a > 1   (convex for 1-D use)
//   log_penalty:  phi_m(x) = ||x||^2 - m ln(1 + ||x||)
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/grids.hpp"

namespace polydense {

class WeightFamily {
  public:
    using EvalFn = std::function<double(int m, const Point&)>;

    WeightFamily(int dim, EvalFn eval, bool convex, std::string kind)
        : dim_(dim), eval_(std::move(eval)), convex_(convex), kind_(std::move(kind)) {}

    static WeightFamily power(double a, int dim) {
        if (!(a > 1.0)) throw RangeError("power family requires a > 1");
        auto f = [a](int m, const Point& x) {
            return (1.0 + 1.0 / double(m)) * std::pow(norm2(x), a);
        };
        // |x|^a is convex on R for a >= 1, so the 1-D family is convex.
        return WeightFamily(dim, f, true, "power");
    }

    static WeightFamily log_penalty(int dim) {
        auto f = [](int m, const Point& x) {
            const double r = norm2(x);
            return r * r - double(m) * std::log1p(r);
        };
        // kinked at the origin by the -m ln(1+|x|) term: not convex.
        return WeightFamily(dim, f, false, "log_penalty");
    }

    double eval(int m, const Point& x) const {
        if (m < 1) throw RangeError("weight index m must be >= 1");
        return eval_(m, x);
    }

    // 1-D convenience
    double eval1(int m, double x) const { return eval(m, Point{x}); }

    int dim() const { return dim_; }
    bool convex() const { return convex_; }
    const std::string& kind() const { return kind_; }

  private:
    int dim_;
    EvalFn eval_;
    bool convex_;
    std::string kind_;
};

inline WeightFamily make_power_family(double a, int dim) { return WeightFamily::power(a, dim); }
inline WeightFamily make_log_penalty_family(int dim) { return WeightFamily::log_penalty(dim); }

inline double log_theta(const WeightFamily& w, int m, const Point& x) { return w.eval(m, x); }

// theta_m(x) = exp(phi_m(x)).  Callers needing ratios at large ||x|| must use
// log_theta; this overload refuses to overflow silently.
inline double theta(const WeightFamily& w, int m, const Point& x) {
    const double p = w.eval(m, x);
    if (p > 709.0) throw OverflowError("theta_m overflows; use log_theta");
    return std::exp(p);
}

struct ConditionSample {
    int m;
    double radius;
    double min_growth_ratio; // min over ||x||=r of phi_m(x)/||x||
    double min_difference;   // min over ||x||=r of phi_m(x)-phi_{m+1}(x)
};

struct ConditionReport {
    std::vector<ConditionSample> samples;
    bool pass = false;
    double largest_radius = 0.0;
};

// Empirical probe of the two growth conditions: phi_m/||x|| -> inf and
// phi_m - phi_{m+1} -> inf.  PASS means both sequences are increasing along
// the probe radii for every m <= m_max and exceed `threshold` at the largest
// radius.  FAIL is data, not an error.
inline ConditionReport check_growth_conditions(const WeightFamily& w, int m_max,
                                               const std::vector<double>& probe_radii,
                                               double threshold = 1.0) {
    if (probe_radii.size() < 4) throw RangeError("need at least 4 probe radii");
    for (size_t i = 1; i < probe_radii.size(); ++i)
        if (!(probe_radii[i] > probe_radii[i - 1]))
            throw RangeError("probe radii must be strictly increasing");

    ConditionReport rep;
    rep.largest_radius = probe_radii.back();
    const auto dirs = sphere_directions(w.dim());
    bool ok = true;
    for (int m = 1; m <= m_max; ++m) {
        double prev_ratio = -1e300, prev_diff = -1e300;
        for (double r : probe_radii) {
            double min_ratio = 1e300, min_diff = 1e300;
            for (const auto& d : dirs) {
                Point x(w.dim());
                for (int j = 0; j < w.dim(); ++j) x[j] = r * d[j];
                const double pm = w.eval(m, x);
                const double pm1 = w.eval(m + 1, x);
                if (!std::isfinite(pm) || !std::isfinite(pm1)) {
                    min_ratio = min_diff = std::nan("");
                    break;
                }
                min_ratio = std::min(min_ratio, pm / r);
                min_diff = std::min(min_diff, pm - pm1);
            }
            rep.samples.push_back({m, r, min_ratio, min_diff});
            if (!(min_ratio > prev_ratio) || !(min_diff > prev_diff)) ok = false;
            prev_ratio = min_ratio;
            prev_diff = min_diff;
        }
        if (!(prev_ratio > threshold) || !(prev_diff > threshold)) ok = false;
    }
    rep.pass = ok;
    return rep;
}

} // namespace polydense
