// Boxes, cell-centered evaluation grids, and 1-D node builders.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

// Open box  Pi_r = { x : |x_j| < r }.
struct Box {
    double radius = 1.0;
    int dim = 1;

    bool contains(const Point& x) const {
        for (double v : x)
            if (!(std::abs(v) < radius)) return false;
        return true;
    }
};

// Cell-centered tensor grid over a box. Enumeration is row-major and
// deterministic; `on_boundary` marks the outermost shell of cells.
struct GridSpec {
    Box box;
    int points_per_axis = 2048;

    double coord(int i) const {
        const double r = box.radius;
        return -r + (double(i) + 0.5) * (2.0 * r / points_per_axis);
    }

    // visit(point, on_boundary)
    template <class Visit>
    void for_each_point(Visit&& visit) const {
        const int n = box.dim;
        const int p = points_per_axis;
        std::vector<int> idx(n, 0);
        Point x(n);
        while (true) {
            bool boundary = false;
            for (int j = 0; j < n; ++j) {
                x[j] = coord(idx[j]);
                if (idx[j] == 0 || idx[j] == p - 1) boundary = true;
            }
            visit(const_cast<const Point&>(x), boundary);
            int j = n - 1;
            while (j >= 0 && ++idx[j] == p) idx[j--] = 0;
            if (j < 0) break;
        }
    }
};

inline std::vector<double> uniform_nodes(double a, double b, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = a + (b - a) * double(i) / double(count - 1);
    v.back() = b;
    return v;
}

// Nodes on [0, b] with local spacing h0 * max(1, y)^gamma.   gamma = 0 is
// uniform; gamma > 0 coarsens the far field where integrand curvature decays.
inline std::vector<double> graded_nodes(double b, double h0, double gamma) {
    std::vector<double> v;
    v.push_back(0.0);
    double y = 0.0;
    while (y < b) {
        const double step = h0 * std::pow(std::max(1.0, y), gamma);
        // absorb a short final step into the endpoint: micro-intervals make
        // chord slopes pure rounding noise
        if (y + 1.25 * step >= b) {
            v.push_back(b);
            break;
        }
        y += step;
        v.push_back(y);
    }
    return v;
}

// Symmetric full-line nodes: mirror of graded_nodes around 0.
inline std::vector<double> symmetric_nodes(double b, double h0, double gamma = 0.0) {
    std::vector<double> half = graded_nodes(b, h0, gamma);
    std::vector<double> v;
    v.reserve(2 * half.size() - 1);
    for (size_t i = half.size(); i-- > 1;) v.push_back(-half[i]);
    for (double y : half) v.push_back(y);
    return v;
}

// Unit directions used for inf/min over the sphere S^{n-1}: exact {-1,+1}
// for n = 1, equally spaced angles for n = 2.
inline std::vector<Point> sphere_directions(int dim, int count = 64) {
    std::vector<Point> out;
    if (dim == 1) {
        out.push_back({-1.0});
        out.push_back({+1.0});
        return out;
    }
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double ang = 2.0 * M_PI * double(i) / double(count);
            out.push_back({std::cos(ang), std::sin(ang)});
        }
        return out;
    }
    throw RangeError("sphere_directions: only n in {1,2} supported");
}

// Deterministic sample of the cube shell ||x||_inf = r.
inline std::vector<Point> shell_points(int dim, double r, int per_edge = 257) {
    std::vector<Point> out;
    if (dim == 1) {
        out.push_back({-r});
        out.push_back({+r});
        return out;
    }
    if (dim == 2) {
        for (int i = 0; i < per_edge; ++i) {
            const double t = -r + 2.0 * r * double(i) / double(per_edge - 1);
            out.push_back({t, -r});
            out.push_back({t, +r});
            out.push_back({-r, t});
            out.push_back({+r, t});
        }
        return out;
    }
    throw RangeError("shell_points: only n in {1,2} supported");
}

} // namespace polydense
