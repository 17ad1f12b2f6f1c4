// Weighted sequence spaces: the weights c_k^(m), the summability constant
// K_m, the seminorm p_m, functional splitting, and the monomial completeness
// probe.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "polydense/common.hpp"
#include "polydense/flt.hpp"
#include "polydense/smoothfn.hpp"
#include "polydense/weights.hpp"

namespace polydense {

class SeqWeightFamily {
  public:
    // geometric2: c_k^(m) = 2^{km}   (K_m = 1 exactly)
    // powerk:     c_k^(m) = k^m      (ratio test fails: K_m diverges)
    static SeqWeightFamily geometric2() { return SeqWeightFamily("geometric2"); }
    static SeqWeightFamily powerk() { return SeqWeightFamily("powerk"); }

    static SeqWeightFamily by_name(const std::string& kind) {
        if (kind == "geometric2") return geometric2();
        if (kind == "powerk") return powerk();
        throw ConfigError("unknown sequence weight kind: " + kind);
    }

    double eval(int k, int m) const {
        if (k < 1 || m < 1) throw RangeError("SeqWeightFamily: k, m >= 1");
        if (kind_ == "geometric2") return std::ldexp(1.0, k * m); // exact powers of two
        return std::pow(double(k), double(m));
    }

    const std::string& kind() const { return kind_; }

  private:
    explicit SeqWeightFamily(std::string kind) : kind_(std::move(kind)) {}
    std::string kind_;
};

struct KmResult {
    double value = 0.0;      // partial sum of c_k^(m)/c_k^(m+1)
    double tail_bound = 0.0; // certified geometric tail beyond the partial sum
    int terms_used = 0;
    bool diverged = false;   // ratio test failed on the probe window
};

// K_m = sum_k c_k^(m)/c_k^(m+1), summed until the certified geometric tail
// drops below tol.  A ratio probe guards against non-summable families; the
// divergence flag is data, not an error.
inline KmResult km_sum(const SeqWeightFamily& c, int m, double tol = 1e-12) {
    KmResult res;
    auto term = [&](int k) { return c.eval(k, m) / c.eval(k, m + 1); };
    double ratio_max = 0.0;
    for (int k = 1; k <= 64; ++k) ratio_max = std::max(ratio_max, term(k + 1) / term(k));
    if (ratio_max >= 0.95) {
        res.diverged = true;
        double s = 0.0;
        for (int k = 1; k <= 64; ++k) s += term(k);
        res.value = s;
        res.terms_used = 64;
        res.tail_bound = std::numeric_limits<double>::infinity();
        return res;
    }
    double s = 0.0;
    int k = 1;
    for (; k <= 4096; ++k) {
        s += term(k);
        const double tail = term(k + 1) / (1.0 - ratio_max);
        if (tail < tol) {
            res.tail_bound = tail;
            break;
        }
    }
    res.value = s;
    res.terms_used = k;
    return res;
}

// finitely supported sequence of functions; absent entries are zero
struct FnSequence {
    std::map<int, SmoothFunction> entries; // k >= 1

    void set(int k, SmoothFunction f) {
        if (k < 1) throw RangeError("FnSequence: k >= 1");
        entries.emplace(k, std::move(f));
    }
};

// p_m(f) = sum_k c_k^(m) q_m(f_k) over the finite support
inline double p_seminorm(const FnSequence& f, int m, const SeqWeightFamily& c,
                         const WeightFamily& w, const GridSpec& g) {
    double s = 0.0;
    for (const auto& [k, fk] : f.entries) s += c.eval(k, m) * q_m(fk, m, w, g).value;
    return s;
}

// F(f) = sum_k F_k(f_k) over the common support (finite, order-independent)
inline Complex split_functional(const std::map<int, DiscreteFunctional>& Fs,
                                const FnSequence& f) {
    Complex s = 0.0;
    for (const auto& [k, Fk] : Fs) {
        auto it = f.entries.find(k);
        if (it != f.entries.end()) s += Fk.apply(it->second);
    }
    return s;
}

struct MonomialProbeRow {
    int k = 0;
    int alpha = 0;
    Complex value{0.0, 0.0};
};

struct MonomialProbeReport {
    std::vector<MonomialProbeRow> rows;
    bool all_zero = true;
};

// Tabulates F_k(x^alpha) for alpha <= alpha_max, k <= k_max; ALL-ZERO when
// every entry vanishes below 1e-12.
inline MonomialProbeReport monomial_probe(const std::map<int, DiscreteFunctional>& Fs,
                                          int alpha_max, int k_max) {
    MonomialProbeReport rep;
    for (int k = 1; k <= k_max; ++k) {
        auto it = Fs.find(k);
        for (int a = 0; a <= alpha_max; ++a) {
            Complex v = 0.0;
            if (it != Fs.end()) v = it->second.apply(make_monomial(a));
            rep.rows.push_back({k, a, v});
            if (std::abs(v) >= 1e-12) rep.all_zero = false;
        }
    }
    return rep;
}

// ||g||_m = max_k sup_lambda |g_k| / (c_k^(m) (1+|lambda|)^m exp(tilde phi_m(Im)))
// for a finitely supported list of entire functions (1-based k).
inline double p_space_norm(const std::vector<EntireSample>& g, int m, const SeqWeightFamily& c,
                           const WeightFamily& w, const RectGrid& grid = {}) {
    double mx = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        const auto rep = growth_norm(g[i], m, w, grid);
        mx = std::max(mx, rep.value / c.eval(int(i) + 1, m));
    }
    return mx;
}

} // namespace polydense
