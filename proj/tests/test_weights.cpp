#include "catch2/catch_amalgamated.hpp"

#include "polydense/weights.hpp"

using namespace polydense;

TEST_CASE("power family values") {
    auto w = make_power_family(2.0, 1);
    CHECK(w.eval1(1, 2.0) == Catch::Approx(8.0));
    // m -> infinity limit
    CHECK(w.eval1(1000000, 2.0) == Catch::Approx(4.0).margin(1e-4));
    auto w2 = make_power_family(2.0, 2);
    CHECK(w2.eval(1, {1.0, 1.0}) == Catch::Approx(4.0));
    CHECK(w.kind() == "power");
    CHECK(w.convex());
}

TEST_CASE("power family rejects a <= 1") {
    CHECK_THROWS_AS(make_power_family(1.0, 1), RangeError);
    CHECK_THROWS_AS(make_power_family(0.5, 1), RangeError);
}

TEST_CASE("growth condition probes") {
    auto w = make_power_family(2.0, 1);
    auto rep = check_growth_conditions(w, 3, {1.0, 10.0, 100.0, 1000.0});
    CHECK(rep.pass);
    // phi_m / ||x|| at r=100, m=1 is 2*100
    bool found = false;
    for (const auto& s : rep.samples) {
        if (s.m == 1 && s.radius == 100.0) {
            CHECK(s.min_growth_ratio == Catch::Approx(200.0));
            found = true;
        }
        // coefficient differences (1/m - 1/(m+1)) * r^2
        if (s.m == 1 && s.radius == 10.0)
            CHECK(s.min_difference == Catch::Approx(50.0));
        if (s.m == 2 && s.radius == 10.0)
            CHECK(s.min_difference == Catch::Approx(100.0 / 6.0));
    }
    CHECK(found);

    auto lp = make_log_penalty_family(1);
    auto rep2 = check_growth_conditions(lp, 2, {1.0, std::exp(1.0) - 1.0, 10.0, 100.0});
    for (const auto& s : rep2.samples)
        if (s.m == 1 && s.radius == std::exp(1.0) - 1.0)
            CHECK(s.min_difference == Catch::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(check_growth_conditions(w, 2, {1.0, 2.0, 3.0}), RangeError);
    CHECK_THROWS_AS(check_growth_conditions(w, 2, {1.0, 3.0, 2.0, 4.0}), RangeError);
}

TEST_CASE("theta and log space") {
    auto w = make_power_family(2.0, 1);
    CHECK(theta(w, 1, {0.0}) == 1.0);
    CHECK(theta(w, 1, {1.0}) == Catch::Approx(7.3890560989306495).epsilon(1e-14));
    // independent high-precision value of exp(13.5)
    CHECK(theta(w, 2, {3.0}) == Catch::Approx(729416.36984770133).epsilon(1e-13));
    CHECK(log_theta(w, 2, {3.0}) == Catch::Approx(13.5).epsilon(1e-15));
    // overflow contract
    CHECK_THROWS_AS(theta(w, 1, {30.0}), OverflowError);
    CHECK(log_theta(w, 1, {30.0}) == Catch::Approx(1800.0));
}

TEST_CASE("family monotonicity invariants") {
    auto w = make_power_family(2.0, 1);
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0, 11.0})
        for (int m = 1; m <= 5; ++m) CHECK(w.eval1(m + 1, x) <= w.eval1(m, x));

    auto lp = make_log_penalty_family(2);
    for (double r : {0.0, 0.3, 1.0, 4.0, 20.0}) {
        Point x{r, 0.5 * r};
        const double diff = lp.eval(1, x) - lp.eval(2, x);
        CHECK(diff == Catch::Approx(std::log1p(norm2(x))).margin(1e-12));
    }
}
