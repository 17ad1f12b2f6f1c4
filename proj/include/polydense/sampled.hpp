// Tabulated 1-D functions on strictly increasing node grids, with the
// piecewise-linear interpolation and end-slope certificates used by the
// conjugate transforms.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

enum class Domain1D { half_line, full_line };

struct SampledFunction1D {
    std::vector<double> nodes;  // strictly increasing
    std::vector<double> values; // same length, finite
    Domain1D domain = Domain1D::half_line;
    bool convex = false; // when set: discrete slopes are nondecreasing

    static SampledFunction1D sample(const std::function<double(double)>& f,
                                    std::vector<double> ns, Domain1D dom,
                                    bool convex_flag = false) {
        SampledFunction1D s;
        s.nodes = std::move(ns);
        s.values.reserve(s.nodes.size());
        for (double y : s.nodes) s.values.push_back(f(y));
        s.domain = dom;
        s.convex = convex_flag;
        s.validate();
        return s;
    }

    void validate() const {
        if (nodes.size() < 2 || nodes.size() != values.size())
            throw RangeError("SampledFunction1D: need >= 2 matching nodes/values");
        for (size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw RangeError("SampledFunction1D: nodes must be strictly increasing");
        for (double v : values)
            if (!std::isfinite(v)) throw RangeError("SampledFunction1D: non-finite value");
        if (convex) {
            double prev = -1e300;
            for (size_t i = 1; i < nodes.size(); ++i) {
                const double s = (values[i] - values[i - 1]) / (nodes[i] - nodes[i - 1]);
                if (s < prev - 1e-9 * (1.0 + std::abs(s)))
                    throw RangeError("SampledFunction1D: convex flag but slopes decrease");
                prev = s;
            }
        }
    }

    // piecewise-linear interpolation; RangeError outside the node range
    double value_at(double t) const {
        if (t < nodes.front() || t > nodes.back())
            throw RangeError("value_at: argument outside sampled domain");
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        if (it == nodes.begin()) return values.front();
        if (it == nodes.end()) return values.back();
        const size_t i = size_t(it - nodes.begin());
        const double w = (t - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
        return values[i - 1] * (1.0 - w) + values[i] * w;
    }

    // Truncation certificate quantity: (u(Y) - u(Y/2)) / (Y/2) at the right
    // end; the conjugate is only trusted when this exceeds twice the largest
    // conjugate argument.
    double end_slope() const {
        const double y = nodes.back();
        return (values.back() - value_at(0.5 * y)) / (0.5 * y);
    }

    // Mirror certificate at the left end (full-line inputs).
    double left_end_slope() const {
        const double y = nodes.front();
        return (value_at(0.5 * y) - values.front()) / (std::abs(y) - std::abs(0.5 * y));
    }

    double min_value() const { return *std::min_element(values.begin(), values.end()); }
};

} // namespace polydense
