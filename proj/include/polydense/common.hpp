// Shared basic types: points, multi-indices, error classes, deterministic RNG.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydense {

using Point = std::vector<double>;
using MultiIndex = std::vector<int>;

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int order_of(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

inline MultiIndex zero_index(int dim) { return MultiIndex(dim, 0); }

inline MultiIndex unit_index(int dim, int axis) {
    MultiIndex a(dim, 0);
    a[axis] = 1;
    return a;
}

// All multi-indices with |a| <= p, graded lexicographic, deterministic.
inline std::vector<MultiIndex> multi_indices_up_to(int dim, int p) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim, 0);
    for (int total = 0; total <= p; ++total) {
        // enumerate compositions of `total` into dim parts, lexicographic
        std::vector<MultiIndex> level;
        MultiIndex a(dim, 0);
        // recursive lambda over positions
        auto rec = [&](auto&& self, int pos, int rest) -> void {
            if (pos == dim - 1) {
                a[pos] = rest;
                level.push_back(a);
                return;
            }
            for (int k = rest; k >= 0; --k) {
                a[pos] = k;
                self(self, pos + 1, rest - k);
            }
        };
        rec(rec, 0, total);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return r;
}

inline double factorial(int n) { return std::tgamma(double(n) + 1.0); }

inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

// multi-index binomial prod_j C(a_j, b_j); 0 unless b <= a componentwise
inline double mi_binomial(const MultiIndex& a, const MultiIndex& b) {
    double r = 1.0;
    for (size_t j = 0; j < a.size(); ++j) {
        if (b[j] > a[j]) return 0.0;
        r *= binomial(a[j], b[j]);
    }
    return r;
}

// Deterministic 64-bit generator (splitmix64) with a portable double mapping,
// so identical seeds give identical streams on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

  private:
    std::uint64_t state_;
};

inline double norm2(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double norm_inf(const Point& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

} // namespace polydense
