#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "polydense/conjugate.hpp"
#include "polydense/grids.hpp"

using namespace polydense;

namespace {

SampledFunction1D sample_fn(double (*f)(double), double y_max, int count, bool convex = true) {
    return SampledFunction1D::sample([f](double y) { return f(y); },
                                     uniform_nodes(0.0, y_max, count), Domain1D::half_line,
                                     convex);
}

double half_square(double y) { return 0.5 * y * y; }
double exp_fn(double y) { return std::exp(y); }
double xlog_fn(double y) { return y * std::log1p(y); }

// independent brute-force oracle: dense scan plus local ternary refinement
double brute_conjugate(double (*f)(double), double y_max, double x) {
    double best = -1e300, arg = 0.0;
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
        const double y = y_max * double(i) / n;
        const double v = x * y - f(y);
        if (v > best) {
            best = v;
            arg = y;
        }
    }
    double lo = std::max(0.0, arg - y_max / n), hi = std::min(y_max, arg + y_max / n);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (x * m1 - f(m1) < x * m2 - f(m2))
            lo = m1;
        else
            hi = m2;
    }
    const double y = 0.5 * (lo + hi);
    return std::max(best, x * y - f(y));
}

} // namespace

TEST_CASE("young conjugate against stationary-point values") {
    auto u = sample_fn(half_square, 10.0, 20001);
    auto star = young_conjugate(u, uniform_nodes(0.0, 3.5, 36));
    CHECK(star.value_at(3.0) == Catch::Approx(4.5).margin(1e-6));

    auto ue = sample_fn(exp_fn, 10.0, 20001);
    auto se = young_conjugate(ue, uniform_nodes(0.0, 4.0, 41));
    CHECK(se.value_at(2.0) == Catch::Approx(2.0 * std::log(2.0) - 2.0).margin(1e-6));
    CHECK(se.values.front() == Catch::Approx(-1.0).margin(1e-15)); // sup of -e^y at y=0
}

TEST_CASE("young conjugate truncation certificate") {
    auto u = sample_fn(half_square, 10.0, 2001);
    // end slope is 7.5: arguments above 3.75 are not certified
    CHECK_THROWS_AS(young_conjugate(u, uniform_nodes(0.0, 10.0, 11)), TruncationError);
}

TEST_CASE("fast path agrees with the full scan exactly") {
    auto u = sample_fn(xlog_fn, 50.0, 5001);
    auto u_noflag = u;
    u_noflag.convex = false;
    auto xs = uniform_nodes(0.0, 1.5, 97);
    auto a = young_conjugate(u, xs);
    auto b = young_conjugate(u_noflag, xs);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("grid conjugate matches the brute-force oracle") {
    auto u = sample_fn(exp_fn, 10.0, 20001);
    auto xs = uniform_nodes(0.0, 4.0, 21);
    auto star = young_conjugate(u, xs);
    for (size_t i = 0; i < xs.size(); ++i) {
        const double ref = brute_conjugate(exp_fn, 10.0, xs[i]);
        CHECK(star.values[i] ==
              Catch::Approx(ref).margin(1e-6 * std::max(1.0, std::abs(ref))));
    }
}

TEST_CASE("biconjugate") {
    // the inner conjugate must be sampled far enough out that its own end
    // slope certifies the outer transform: u on [0,24] supports x up to 9,
    // whose conjugate supports y up to 3.3
    auto u = sample_fn(half_square, 24.0, 48001);
    auto bi = biconjugate(u, uniform_nodes(0.5, 3.0, 26), uniform_nodes(0.0, 8.8, 8801));
    for (size_t i = 0; i < bi.nodes.size(); ++i)
        CHECK(bi.values[i] == Catch::Approx(half_square(bi.nodes[i])).margin(1e-6));

    // e^y needs conjugate arguments out to ~e^{11} for y up to 5; a graded
    // geometric x-grid keeps that cheap
    auto ue = sample_fn(exp_fn, 13.5, 27001);
    auto be = biconjugate(ue, uniform_nodes(0.5, 5.0, 10), graded_nodes(40000.0, 1e-3, 1.0));
    for (size_t i = 0; i < be.nodes.size(); ++i)
        CHECK(be.values[i] == Catch::Approx(exp_fn(be.nodes[i])).margin(1e-4));

    // nonconvex: biconjugate is a minorant
    auto nc = SampledFunction1D::sample(
        [](double y) { return std::min(y * y, (y - 2.0) * (y - 2.0) + 1.0); },
        uniform_nodes(0.0, 30.0, 30001), Domain1D::half_line, false);
    auto bn = biconjugate(nc, uniform_nodes(0.0, 4.0, 81), uniform_nodes(0.0, 18.0, 1801));
    for (size_t i = 0; i < bn.nodes.size(); ++i) {
        const double y = bn.nodes[i];
        const double uy = std::min(y * y, (y - 2.0) * (y - 2.0) + 1.0);
        CHECK(bn.values[i] <= uy + 1e-12);
    }
}

TEST_CASE("exp composition") {
    auto lin = sample_fn([](double y) { return y; }, 10.0, 10001);
    auto le = exp_compose(lin);
    CHECK(le.value_at(0.0) == Catch::Approx(1.0).margin(1e-9));

    auto sq = sample_fn([](double y) { return y * y; }, 10.0, 10001);
    CHECK(exp_compose(sq).value_at(1.0) == Catch::Approx(7.3890560989306495).margin(1e-6));

    auto ex = sample_fn(exp_fn, 10.0, 40001);
    // high-precision e^e as the oracle for the interpolation error
    CHECK(exp_compose(ex).value_at(1.0) == Catch::Approx(15.154262241479264).margin(1e-5));

    CHECK_THROWS_AS(exp_compose(ex, uniform_nodes(0.0, 3.0, 10)), RangeError); // e^3 > 10
}

TEST_CASE("lemma gap stays nonnegative within tolerance") {
    auto ue = sample_fn(exp_fn, 10.0, 50001);
    const double g3 = lemma_gap(ue, 3.0);
    CHECK(g3 >= -1e-8);
    CHECK(3.0 * std::log(3.0) - 3.0 == Catch::Approx(0.29583686600432907).epsilon(1e-12));

    auto usq = sample_fn([](double y) { return y * y; }, 32.0, 160001);
    CHECK(lemma_gap(usq, 1.0) >= -1e-8);

    auto ux = SampledFunction1D::sample(xlog_fn, graded_nodes(8192.0, 2e-4, 0.5),
                                        Domain1D::half_line, true);
    CHECK(lemma_gap(ux, 5.0) >= -1e-8);
}

TEST_CASE("lemma gap requires positive x and certified range") {
    auto ue = sample_fn(exp_fn, 10.0, 5001);
    CHECK_THROWS_AS(lemma_gap(ue, 0.0), RangeError);
    auto small = sample_fn(half_square, 3.0, 601); // too short for x = 20
    CHECK_THROWS_AS(lemma_gap(small, 20.0), TruncationError);
}

TEST_CASE("directional weights") {
    auto w = make_power_family(2.0, 1);
    auto d = directional_weight(w, 1, {1.0}, uniform_nodes(0.0, 5.0, 51));
    CHECK(d.value_at(2.0) == Catch::Approx(8.0));

    auto w2 = make_power_family(2.0, 2);
    auto d2 = directional_weight(w2, 1, {1.0, 0.0}, uniform_nodes(0.0, 5.0, 51));
    CHECK(d2.value_at(3.0) == Catch::Approx(18.0));

    // radial symmetry: any direction gives the same samples
    auto d3 = directional_weight(w2, 1, {std::sqrt(0.5), std::sqrt(0.5)},
                                 uniform_nodes(0.0, 5.0, 51));
    for (size_t i = 0; i < d2.values.size(); ++i)
        CHECK(d2.values[i] == Catch::Approx(d3.values[i]).margin(1e-12));

    CHECK_THROWS_AS(directional_weight(w2, 1, {1.0, 1.0}, uniform_nodes(0.0, 1.0, 5)),
                    RangeError);
}

TEST_CASE("stirling bound factor decays superfactorially") {
    auto w = make_power_family(2.0, 1);
    const auto sigmas = sphere_directions(1);
    // both directions give equal factors for an even weight
    const double f5a = stirling_bound_factor(w, 1, 5, {{1.0}});
    const double f5b = stirling_bound_factor(w, 1, 5, {{-1.0}});
    CHECK(f5a == Catch::Approx(f5b).epsilon(1e-12));

    CHECK(stirling_bound_factor(w, 1, 1, sigmas) > 0.0);
    double prev = stirling_bound_factor(w, 1, 10, sigmas);
    double first_ratio = -1.0, last_ratio = 1.0;
    for (int N = 11; N <= 40; ++N) {
        const double cur = stirling_bound_factor(w, 1, N, sigmas);
        last_ratio = cur / prev;
        if (first_ratio < 0.0) first_ratio = last_ratio;
        CHECK(cur < prev); // monotone decreasing through this range
        prev = cur;
    }
    // per-step ratio factor(N+1)/factor(N) keeps shrinking toward zero
    CHECK(last_ratio < first_ratio);
    CHECK(last_ratio < 0.5);
    CHECK(stirling_bound_factor(w, 1, 40, sigmas) /
              stirling_bound_factor(w, 1, 20, sigmas) <
          1e-10); // superfactorial depth over twenty steps
}

TEST_CASE("two-sided tilde weight") {
    auto w = make_power_family(2.0, 1);
    auto xs = symmetric_nodes(4.0, 0.05);
    auto t1 = tilde_weight(w, 1, xs);
    CHECK(t1.value_at(2.0) == Catch::Approx(0.5).margin(1e-6)); // x^2/8 at 2
    CHECK(t1.value_at(0.0) == Catch::Approx(0.0).margin(1e-15));
    auto t2 = tilde_weight(w, 2, xs);
    for (size_t i = 0; i < xs.size(); ++i)
        CHECK(t1.values[i] <= t2.values[i] + 1e-12); // order reversal

    auto lp = make_log_penalty_family(1);
    CHECK_THROWS_AS(tilde_weight(lp, 1, xs), RangeError); // not convex
}

TEST_CASE("conjugate output properties") {
    auto u = sample_fn(exp_fn, 10.0, 10001);
    auto xs = uniform_nodes(0.0, 4.0, 101);
    auto star = young_conjugate(u, xs);
    CHECK(star.convex);
    // nondecreasing on [0,inf) inputs and convex slopes
    double prev_slope = -1e300;
    for (size_t i = 1; i < xs.size(); ++i) {
        CHECK(star.values[i] >= star.values[i - 1] - 1e-12);
        const double s = (star.values[i] - star.values[i - 1]) / (xs[i] - xs[i - 1]);
        CHECK(s >= prev_slope - 1e-9);
        prev_slope = s;
    }

    // order reversal: u <= v implies v* <= u*
    auto v = sample_fn([](double y) { return std::exp(y) + 0.3 * y; }, 10.0, 10001);
    auto sv = young_conjugate(v, xs);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(sv.values[i] <= star.values[i] + 1e-12);

    // grid refinement never decreases the conjugate (nested nodes)
    auto coarse = sample_fn(exp_fn, 10.0, 5001);
    auto fine = sample_fn(exp_fn, 10.0, 10001); // node superset of the 5001 grid
    auto sc = young_conjugate(coarse, xs);
    auto sf = young_conjugate(fine, xs);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(sf.values[i] >= sc.values[i] - 1e-13);
}
