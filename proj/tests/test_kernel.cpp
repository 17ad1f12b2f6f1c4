#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "polydense/kernel.hpp"
#include "polydense/quadrature.hpp"

using namespace polydense;

TEST_CASE("fejer kernel values") {
    CHECK(fejer_h(0.0) == Catch::Approx(0.25));
    CHECK(fejer_h(M_PI) == Catch::Approx(0.10132118364233777).epsilon(1e-13));
    CHECK(fejer_h(2.0 * M_PI) < 1e-30);
    // series / closed-form crossover continuity
    CHECK(fejer_h(0.99e-4) == Catch::Approx(fejer_h(1.01e-4)).epsilon(1e-10));
}

TEST_CASE("taylor coefficients of the kernel") {
    CHECK(kernel_taylor_coefficient(0) == Catch::Approx(0.25));
    CHECK(kernel_taylor_coefficient(1) == 0.0);
    CHECK(kernel_taylor_coefficient(2) == Catch::Approx(-1.0 / 48.0));
    CHECK(kernel_taylor_coefficient(4) == Catch::Approx(1.0 / 1440.0));
    CHECK(kernel_taylor_coefficient(7) == 0.0);
}

TEST_CASE("kernel mass") {
    CHECK(kernel_mass_1d() == Catch::Approx(M_PI / 2.0).margin(1e-6));
    CHECK(kernel_mass(2) == Catch::Approx(2.4674011002723395).margin(3e-6));
    // bracketing: finite-window quadrature plus the 2/R tail bound
    for (double R : {1e2, 1e3, 1e4}) {
        const double core = adaptive_integrate([](double t) { return fejer_h(t); }, -R, R,
                                               1e-12, 1e-15, 100000);
        CHECK(core <= kernel_mass_1d() + 1e-9);
        CHECK(kernel_mass_1d() <= core + 2.0 / R + 1e-9);
    }
}

TEST_CASE("derivative oracle against finite differences") {
    for (double x : {0.05, 0.3, 0.77, 2.0, 13.4}) {
        for (int k = 1; k <= 6; ++k) {
            const double h = 1e-2;
            const double fd = (-fejer_h_deriv(k - 1, x + 2 * h) + 8 * fejer_h_deriv(k - 1, x + h) -
                               8 * fejer_h_deriv(k - 1, x - h) + fejer_h_deriv(k - 1, x - 2 * h)) /
                              (12.0 * h);
            CHECK(fejer_h_deriv(k, x) == Catch::Approx(fd).margin(1e-7));
        }
    }
    CHECK(fejer_h_deriv(2, 0.0) == Catch::Approx(-1.0 / 24.0).epsilon(1e-12));
    CHECK_THROWS_AS(fejer_h_deriv(9, 1.0), OrderError);
}

TEST_CASE("C_H certificate") {
    CHECK(estimate_CH(0, 1) == Catch::Approx(0.25 * 1.05).epsilon(1e-12));
    CHECK(estimate_CH(0, 2) == Catch::Approx(0.0625 * 1.05).epsilon(1e-12));
    CHECK(estimate_CH(2, 1) >= 1.0 / 24.0); // must dominate |h''(0)|
    CHECK_THROWS_AS(estimate_CH(9, 1), OrderError);
}

TEST_CASE("taylor truncation U_N") {
    auto u0 = taylor_U(0, 1);
    CHECK(u0.coefficient({0}) == Catch::Approx(0.25));
    auto u1 = taylor_U(1, 1);
    CHECK(u1.degree() == 0); // odd coefficients vanish
    auto u2 = taylor_U(2, 1);
    CHECK(u2.coefficient({2}) == Catch::Approx(-1.0 / 48.0));
    CHECK(u2.eval({1.0}) == Catch::Approx(0.25 - 1.0 / 48.0));

    // agreement of N and N+1 on monomials of degree <= N, and evenness
    for (int N : {3, 8, 13}) {
        auto a = taylor_U(N, 2);
        auto b = taylor_U(N + 1, 2);
        for (const auto& [al, c] : a.terms()) {
            CHECK(b.coefficient(al) == c);
            CHECK(al[0] % 2 == 0);
            CHECK(al[1] % 2 == 0);
        }
    }
}

TEST_CASE("remainder bound examples") {
    const double ch = estimate_CH(0, 1);
    const double b = remainder_bound(2, {1.0}, ch, 1);
    CHECK(b == Catch::Approx(0.2625 * 4.0 / 6.0).epsilon(1e-12));
    const double diff = std::abs(fejer_h(1.0) - taylor_U(2, 1).eval({1.0}));
    CHECK(diff == Catch::Approx(0.229848847065930 - (0.25 - 1.0 / 48.0)).margin(1e-12));
    CHECK(diff <= b);

    CHECK(remainder_bound(5, {0.0}, ch, 1) == 0.0);
    CHECK(std::abs(fejer_h(0.0) - taylor_U(5, 1).eval({0.0})) == 0.0);

    const double b10 = remainder_bound(10, {2.0}, ch, 1);
    CHECK(std::abs(fejer_h(2.0) - taylor_U(10, 1).eval({2.0})) <= b10);
}

TEST_CASE("remainder inequality at random points") {
    Rng rng(20240817);
    for (int n : {1, 2}) {
        const double ch = estimate_CH(0, n);
        for (int t = 0; t < 500; ++t) {
            Point x(n);
            do {
                for (int j = 0; j < n; ++j) x[j] = rng.uniform(-5.0, 5.0);
            } while (norm2(x) > 5.0 || norm2(x) == 0.0);
            for (int N = 0; N <= 20; ++N) {
                const double err = std::abs(kernel_remainder_series(x, N));
                CHECK(err <= remainder_bound(N, x, ch, n));
            }
        }
    }
}

TEST_CASE("series remainder agrees with the direct difference above the noise floor") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        Point x{rng.uniform(-5.0, 5.0)};
        for (int N : {0, 2, 5, 8}) {
            const double direct = fejer_h(x[0]) - taylor_U(N, 1).eval(x);
            const double series = kernel_remainder_series(x, N);
            if (std::abs(direct) > 1e-12)
                CHECK(series == Catch::Approx(direct).epsilon(1e-3).margin(1e-13));
        }
    }
}

TEST_CASE("kernel bounds on a dense grid") {
    for (int i = 0; i <= 20000; ++i) {
        const double x = -100.0 + 200.0 * i / 20000.0;
        const double v = fejer_h(x);
        CHECK(v >= 0.0);
        CHECK(v <= 0.25);
    }
}
