#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "polydense/smoothfn.hpp"

using namespace polydense;

namespace {
SmoothFunction make_sin() {
    SmoothFunction f;
    f.name = "sin";
    f.max_order = 12;
    f.deriv_fn = [](const MultiIndex& a, const Point& x) {
        switch (a[0] % 4) {
            case 0: return std::sin(x[0]);
            case 1: return std::cos(x[0]);
            case 2: return -std::sin(x[0]);
            default: return -std::cos(x[0]);
        }
    };
    return f;
}
} // namespace

TEST_CASE("seminorm q on the gaussian") {
    auto w = make_power_family(2.0, 1);
    auto f = make_gaussian();
    GridSpec g{Box{5.0, 1}, 2049}; // odd count puts a node at the origin
    CHECK(seminorm_q(f, 0, 1, w, g).value == 1.0);
    const auto r = seminorm_q(f, 1, 1, w, g);
    CHECK(r.value == 1.0);
    CHECK(r.boundary_ratio < 1e-10);

    // the alpha=1 term alone peaks at 2|x|e^{-3x^2}, x = 1/sqrt(6)
    double d1 = 0.0;
    g.for_each_point([&](const Point& x, bool) {
        d1 = std::max(d1, std::abs(f.deriv1(1, x[0])) * std::exp(-w.eval(1, x)));
    });
    CHECK(d1 == Catch::Approx(0.49523093788320326).margin(1e-4));
}

TEST_CASE("seminorm edge cases") {
    auto w = make_power_family(2.0, 1);
    GridSpec g{Box{5.0, 1}, 257};
    auto z = make_zero(1);
    CHECK(seminorm_q(z, 0, 1, w, g).value == 0.0);
    CHECK(seminorm_q(z, 3, 2, w, g).value == 0.0);
    auto bump = make_bump();
    CHECK_THROWS_AS(seminorm_q(bump, kCutoffMaxOrder + 1, 1, w, g), OrderError);
}

TEST_CASE("seminorm monotonicity and homogeneity") {
    auto w = make_power_family(2.0, 1);
    GridSpec g{Box{5.0, 1}, 513};
    auto f = make_sin_gaussian();
    double prev = 0.0;
    for (int p = 0; p <= 3; ++p) {
        const double q = seminorm_q(f, p, 3, w, g).value;
        CHECK(q >= prev);
        prev = q;
    }
    // power family: theta_{m+1} <= theta_m pointwise
    for (int m = 1; m <= 3; ++m)
        CHECK(seminorm_q(f, 1, m, w, g).value <= seminorm_q(f, 1, m + 1, w, g).value);
    // homogeneity and triangle
    auto cf = sf_scale(f, -2.5);
    CHECK(seminorm_q(cf, 1, 1, w, g).value ==
          Catch::Approx(2.5 * seminorm_q(f, 1, 1, w, g).value).epsilon(1e-12));
    auto gsn = make_gaussian();
    auto sum = sf_subtract(f, sf_scale(gsn, -1.0)); // f + g
    CHECK(seminorm_q(sum, 1, 1, w, g).value <=
          seminorm_q(f, 1, 1, w, g).value + seminorm_q(gsn, 1, 1, w, g).value + 1e-12);
}

TEST_CASE("tail certificate") {
    auto w = make_power_family(2.0, 1);
    SmoothFunction f = make_gaussian();
    f.growth_certificate[2] = 1.0;
    f.growth_certificate[3] = 1.0;
    // (1/1 - 1/2) * 9 = 4.5 in the exponent for m = 1
    CHECK(tail_certificate(f, w, 1, 3.0) ==
          Catch::Approx(0.011108996538242306).epsilon(1e-12)); // exp(-4.5)
    // (1/2 - 1/3) * 9 = 1.5 for m = 2
    CHECK(tail_certificate(f, w, 2, 3.0) ==
          Catch::Approx(0.22313016014842983).epsilon(1e-12)); // exp(-1.5)
    // monotone nonincreasing in r
    double prev = 1e300;
    for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double t = tail_certificate(f, w, 1, r);
        CHECK(t <= prev);
        prev = t;
    }

    auto lp = make_log_penalty_family(1);
    SmoothFunction g = make_gaussian();
    g.growth_certificate[2] = 1.0;
    CHECK(tail_certificate(g, lp, 1, std::exp(1.0) - 1.0) ==
          Catch::Approx(0.36787944117144233).epsilon(1e-10)); // 1/e

    SmoothFunction h = make_gaussian(); // no certificate attached
    CHECK_THROWS_AS(tail_certificate(h, w, 1, 3.0), CertificateError);
}

TEST_CASE("finite-difference oracle validation") {
    auto s = make_sin();
    CHECK(fd_check(s, {1}, {0.0}, 1e-2) < 1e-8);
    auto cube = make_polynomial({0.0, 0.0, 0.0, 1.0});
    CHECK(fd_check(cube, {3}, {1.0}, 1e-3) < 1e-9); // third derivative is exact: 6
    auto gsn = make_gaussian();
    CHECK(gsn.deriv1(2, 0.0) == Catch::Approx(-2.0));
    CHECK(fd_check(gsn, {2}, {0.0}, 1e-2) < 1e-6);
}

TEST_CASE("fleet oracle spot checks by finite differences") {
    for (const auto& f : {make_gaussian(), make_cosh(), make_sin_gaussian(), make_bump()}) {
        for (double x : {-1.7, 0.3, 1.2}) {
            for (int k = 1; k <= std::min(4, f.max_order); ++k) {
                const double scale = std::max(1.0, std::abs(f.deriv1(k, x)));
                CHECK(fd_check(f, {k}, {x}, 5e-4) < 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("bump support and range") {
    auto b = make_bump();
    CHECK(b.eval1(0.5) == 1.0);
    CHECK(b.eval1(-1.0) == 1.0);
    CHECK(b.eval1(2.0) == 0.0);
    CHECK(b.eval1(2.5) == 0.0);
    CHECK(b.deriv1(1, 3.0) == 0.0);
    for (int i = 0; i <= 1000; ++i) {
        const double x = -3.0 + 6.0 * i / 1000.0;
        const double v = b.eval1(x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("tensor product functions") {
    auto f = make_product(make_gaussian(), make_cosh());
    CHECK(f.dim == 2);
    CHECK(f({0.0, 0.0}) == 1.0);
    CHECK(f.deriv({1, 1}, {0.5, 0.5}) ==
          Catch::Approx(make_gaussian().deriv1(1, 0.5) * std::sinh(0.5)));
}
