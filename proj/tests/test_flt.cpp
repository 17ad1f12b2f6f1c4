#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "polydense/experiment.hpp"
#include "polydense/flt.hpp"

using namespace polydense;

TEST_CASE("transform closed forms") {
    auto d0 = flt_transform(delta(0.0));
    CHECK(std::abs(d0(Complex(0.7, -1.3)) - Complex(1.0, 0.0)) < 1e-15);

    auto dp = flt_transform(delta_deriv(1, 0.0));
    const Complex lam(1.5, 0.25);
    CHECK(std::abs(dp(lam) - Complex(0.0, -1.0) * lam) < 1e-15);

    auto d1 = flt_transform(delta(1.0));
    CHECK(std::abs(d1(Complex(0.0, 1.0)) - std::exp(1.0)) < 1e-14);
}

TEST_CASE("transform linearity on a grid") {
    DiscreteFunctional F{"F", {{Complex(2.0, 1.0), 0, 0.5}}};
    DiscreteFunctional G{"G", {{1.0, 1, -0.3}}};
    DiscreteFunctional H{"H", {{Complex(2.0, 1.0) * 0.7, 0, 0.5}, {Complex(0.0, 2.0), 1, -0.3}}};
    auto fh = flt_transform(F), gh = flt_transform(G), hh = flt_transform(H);
    auto combo = entire_combine(0.7, fh, Complex(0.0, 2.0), gh);
    for (double re : {-2.0, 0.0, 1.4})
        for (double im : {-1.0, 0.5}) {
            const Complex z(re, im);
            CHECK(std::abs(hh(z) - combo(z)) < 1e-12);
        }
}

TEST_CASE("growth norm canonical values") {
    auto w = make_power_family(2.0, 1);
    auto d0 = flt_transform(delta(0.0));
    const auto r = growth_norm(d0, 1, w);
    CHECK(!r.divergent);
    CHECK(r.value == Catch::Approx(1.0).margin(1e-9));
    CHECK(std::abs(r.attained) < 1e-12);

    auto dp = flt_transform(delta_deriv(1, 0.0));
    const auto r0 = growth_norm(dp, 0, w);
    CHECK(r0.divergent);
    const auto r1 = growth_norm(dp, 1, w);
    CHECK(!r1.divergent);
    CHECK(r1.value <= 1.0 + 1e-9);
    CHECK(r1.value > 0.9);
}

TEST_CASE("growth norm homogeneity, triangle, and m-monotonicity") {
    auto w = make_power_family(2.0, 1);
    auto f = flt_transform(delta(0.5));
    auto g = flt_transform(delta_deriv(1, -0.5));
    RectGrid rect{4.0, 2.0, 65};

    auto cf = entire_combine(Complex(-3.0, 0.0), f, 0.0, f);
    CHECK(growth_norm(cf, 1, w, rect).value ==
          Catch::Approx(3.0 * growth_norm(f, 1, w, rect).value).epsilon(1e-12));

    auto sum = entire_combine(1.0, f, 1.0, g);
    CHECK(growth_norm(sum, 1, w, rect).value <=
          growth_norm(f, 1, w, rect).value + growth_norm(g, 1, w, rect).value + 1e-12);

    for (const auto& F : flt_fleet()) {
        auto fh = flt_transform(F);
        double prev = 1e300;
        for (int m = std::max(1, F.max_order()); m <= 3; ++m) {
            const double v = growth_norm(fh, m, w, rect).value;
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("moment identity") {
    // delta_a, k = 1: F(x) = a equals i d/dlam e^{-i lam a} at 0
    CHECK(moment_check(delta(2.0), 1) < 1e-10);
    CHECK(moment_check(delta_deriv(1, 0.0), 1) < 1e-10);
    // delta_1 + delta_{-1}, k = 4: both sides are 2
    DiscreteFunctional F{"pair", {{1.0, 0, 1.0}, {1.0, 0, -1.0}}};
    CHECK(std::abs(F.apply(make_monomial(4)) - Complex(2.0, 0.0)) < 1e-14);
    CHECK(moment_check(F, 4) < 1e-10);

    for (const auto& G : flt_fleet())
        for (int k = 0; k <= 6; ++k) CHECK(moment_check(G, k) < 1e-10);

    // the finite-difference validation path is close but looser
    CHECK(moment_check_fd(F, 4, 0.05) < 1e-4);
    CHECK(moment_check_fd(delta(2.0), 1, 0.01) < 1e-6);
}

TEST_CASE("hermitian symmetry for real-coefficient functionals") {
    for (const auto& F : flt_fleet()) {
        if (!F.real_coefficients()) continue;
        CHECK(hermitian_residual(flt_transform(F), 4.0, 4.0, 64) < 1e-12);
    }
}

TEST_CASE("p-space norm") {
    auto w = make_power_family(2.0, 1);
    auto c = SeqWeightFamily::geometric2();
    std::vector<EntireSample> g{flt_transform(delta(0.0))}; // (1, 0, 0, ...)
    CHECK(p_space_norm(g, 1, c, w) == Catch::Approx(0.5).margin(1e-9));

    std::vector<EntireSample> z{
        EntireSample{"zero", [](Complex) { return Complex(0.0, 0.0); }}};
    CHECK(p_space_norm(z, 1, c, w) == 0.0);

    std::vector<EntireSample> g3{entire_combine(Complex(3.0, 0.0), flt_transform(delta(0.0)),
                                                0.0, flt_transform(delta(0.0)))};
    CHECK(p_space_norm(g3, 1, c, w) ==
          Catch::Approx(3.0 * p_space_norm(g, 1, c, w)).epsilon(1e-12));
}
