#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "nlpot/asymptotics.hpp"

using namespace nlpot;
using Catch::Approx;

TEST_CASE("critical curve values and limits") {
    CHECK(critical_sigma(4.0, 3) == Approx(2.75));
    CHECK(critical_sigma(3.0, 3) == Approx(3.0));
    CHECK(critical_sigma(100.0, 3) == Approx(2.03));
    CHECK(critical_sigma(6.0, 4) == Approx(1.0 + 4.0 / 12.0));
    CHECK_THROWS_AS(critical_sigma(0.0, 3), std::domain_error);
    CHECK_THROWS_AS(critical_sigma(4.0, 2), std::domain_error);
}

TEST_CASE("hand-classified pairs land in their regions") {
    CHECK(classify_region(3.0, 3.0, 3) == Region::A);
    CHECK(classify_region(4.0, 1.0, 3) == Region::B);
    CHECK(classify_region(4.0, 3.0, 3) == Region::C);
    CHECK(classify_region(4.0, 2.75, 3) == Region::D);
    CHECK(classify_region(3.5, 0.0, 3) == Region::B);
    CHECK(classify_region(5.0, 5.0, 3) == Region::C);
    CHECK_THROWS_AS(classify_region(2.0, 3.0, 3), std::domain_error);
    CHECK(std::string(region_name(Region::D)) == "D");
}

TEST_CASE("taxonomy cell rates per region") {
    auto a = sweep_cell(2.0, 1.0, 3);
    CHECK(a.region == Region::A);
    CHECK(a.has_bounds);
    CHECK(a.u.base_exponent == Approx(1.0));
    CHECK(a.u.flavor == BoundFlavor::BigO);
    CHECK(a.v.base_exponent == Approx(1.0));

    auto b = sweep_cell(4.0, 1.0, 3);
    CHECK(b.region == Region::B);
    CHECK(b.u.base_exponent == Approx(4.0 / 3.0));
    CHECK(b.u.flavor == BoundFlavor::LittleO);
    CHECK(b.v.base_exponent == Approx(1.0));
    CHECK(b.v.flavor == BoundFlavor::BigO);

    CHECK_FALSE(sweep_cell(4.0, 3.0, 3).has_bounds);
    CHECK_FALSE(sweep_cell(4.0, 2.75, 3).has_bounds);
}

TEST_CASE("weighted descriptors reduce to the plain taxonomy at zero weights") {
    for (double lambda : {3.7, 4.0, 5.5}) {
        SystemBounds wb = bounds_thm37(lambda, 1.0, 3, 0.0, 0.0);
        CHECK(wb.u.base_exponent == Approx(sq(1.0) * lambda / 3.0));
        CHECK(wb.v.base_exponent == Approx(1.0));  // n - 2
    }
}

TEST_CASE("weighted case tree switches on the second exponent") {
    // sigma = 0 with a light v-weight: v keeps the fundamental rate
    auto a1 = bounds_thm37(4.0, 0.0, 3, 1.0, 2.0);
    CHECK(a1.v.base_exponent == Approx(1.0));
    CHECK(a1.v.flavor == BoundFlavor::BigO);
    // heavy v-weight pushes v into a genuine power blow-up
    auto a2 = bounds_thm37(4.0, 0.0, 3, 1.0, 4.0);
    CHECK(a2.v.base_exponent == Approx(4.0 / 3.0));
    CHECK(a2.v.flavor == BoundFlavor::LittleO);
    // intermediate sigma, weights small enough for the quiet case
    auto b1 = bounds_thm37(2.0, 1.0, 3, 0.5, 0.5);
    CHECK(b1.u.base_exponent == Approx(1.0));
    CHECK(b1.u.flavor == BoundFlavor::BigO);
    // critical sigma with a heavy weight picks up a log factor
    auto c2 = bounds_thm37(4.0, 2.0, 3, 1.0, 3.0);
    CHECK(c2.u.log_power > 0.0);
    // order violation and region violations are rejected
    CHECK_THROWS_AS(bounds_thm37(2.0, 3.0, 3, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bounds_thm37(4.0, 3.0, 3, 0.0, 0.0), std::domain_error);
}

TEST_CASE("outer expansion rates by region") {
    auto a = bounds_thm36(2.0, 0.0, 3);
    CHECK(a.u.base_exponent ==
          Approx((1.0 / 3.0) * (2.0 * 2.0 / 3.0 + 2.0)));
    CHECK(a.v.base_exponent == Approx(2.0 / 3.0));

    auto b = bounds_thm36(4.0, 1.0, 3);
    CHECK(b.u.base_exponent == Approx(2.0 * (4.0 + 1.0) / 3.0));
    CHECK(b.v.base_exponent == Approx(2.0));
    CHECK(b.v.flavor == BoundFlavor::BigO);

    auto c = bounds_thm36(4.0, 2.0, 3);
    CHECK(c.u.log_power == Approx(4.0 / 3.0));
    CHECK(c.v.log_power == Approx(1.0));

    // near-critical pair: margin D = 1 gives round exponents
    auto d = bounds_thm36(4.0, 2.5, 3);
    CHECK(d.u.base_exponent == Approx(10.0));
    CHECK(d.v.base_exponent == Approx(7.0));
    CHECK(d.u.epsilon_slack > 0.0);
    CHECK(d.v.epsilon_slack > 0.0);

    // the critical curve itself falls outside the hypothesis
    CHECK_THROWS_AS(bounds_thm36(4.0, 2.75, 3), std::domain_error);
}

TEST_CASE("inner and outer weighted rates are inversion images of each other") {
    // relation between the weight pair and the outer taxonomy
    int n = 3;
    std::vector<std::pair<double, double>> pairs = {
        {2.0, 1.0}, {2.5, 0.0}, {4.0, 1.0}, {5.0, 2.0},
        {4.0, 2.0}, {4.0, 2.5}, {5.0, 2.2}, {3.5, 1.5}};
    for (auto [lambda, sigma] : pairs) {
        double alpha = n + 2.0 - (n - 2.0) * lambda;
        double beta = n + 2.0 - (n - 2.0) * sigma;
        SystemBounds inner = bounds_thm37(lambda, sigma, n, alpha, beta);
        SystemBounds outer = bounds_thm36(lambda, sigma, n);
        CHECK(inner.u.base_exponent - (n - 2.0) ==
              Approx(outer.u.base_exponent).margin(1e-10));
        CHECK(inner.v.base_exponent - (n - 2.0) ==
              Approx(outer.v.base_exponent).margin(1e-10));
        CHECK(inner.u.log_power == Approx(outer.u.log_power).margin(1e-12));
        CHECK(inner.v.log_power == Approx(outer.v.log_power).margin(1e-12));
    }
}

TEST_CASE("planar rates split at the linear exponent") {
    auto lin = bounds_2d(1.0);
    CHECK(lin.u.base_exponent == Approx(0.0));
    CHECK(lin.u.log_power == Approx(1.0));
    CHECK(lin.u.flavor == BoundFlavor::BigO);
    auto sup = bounds_2d(2.5);
    CHECK(sup.u.log_power == Approx(2.5));
    CHECK(sup.u.flavor == BoundFlavor::LittleO);
    CHECK(sup.v.log_power == Approx(1.0));
    CHECK_THROWS_AS(bounds_2d(0.8), std::domain_error);
}

TEST_CASE("integrability ladder reproduces the reference trace") {
    MoserTrace tr = moser_ledger(3, 4.0, 2.2);
    CHECK(tr.epsilon == Approx(1.0 / 16.0));
    CHECK(tr.C0 == Approx(7.0 / 15.0).epsilon(1e-9));
    CHECK(tr.m == 2);
    CHECK(tr.step_bound == 4);
    CHECK(tr.reached_infinity);
    REQUIRE(tr.steps.size() == 2);
    CHECK(tr.steps[0].p == Approx(1.0));
    CHECK(tr.steps[0].p2 == Approx(2.823529411764706).epsilon(1e-12));
    CHECK(tr.steps[0].p3 == Approx(7.5).epsilon(1e-9));
    CHECK(tr.steps[0].q == Approx(1.875).epsilon(1e-9));
    CHECK(tr.steps[1].p == Approx(1.875).epsilon(1e-9));
    CHECK(tr.steps[1].p2 == inf);
    // every rung gains at least the uniform increment
    for (const MoserStep& s : tr.steps) {
        double gain = 1.0 / s.p - (std::isfinite(s.q) ? 1.0 / s.q : 0.0);
        CHECK(gain >= tr.C0 - 1e-9);
    }
}

TEST_CASE("ladder preconditions carve out the admissible wedge") {
    CHECK_THROWS_AS(moser_ledger(3, 4.0, 1.5), std::domain_error);   // sigma < 2/(n-2)
    CHECK_THROWS_AS(moser_ledger(3, 4.0, 2.8), std::domain_error);   // above the curve
    CHECK_THROWS_AS(moser_ledger(3, 2.2, 2.4), std::domain_error);   // sigma > lambda
    CHECK_NOTHROW(moser_ledger(3, 5.0, 2.0));
}

TEST_CASE("inversion point map is an exact involution away from the origin") {
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        Vec x{U(rng), U(rng), U(rng)};
        if (norm2(x) < 1e-3) continue;
        Vec y = kelvin_point(x);
        Vec back = kelvin_point(y);
        for (int d = 0; d < 3; ++d)
            CHECK(back[d] == Approx(x[d]).margin(1e-12 * (1.0 + std::abs(x[d]))));
        CHECK(norm2(y) == Approx(1.0 / norm2(x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kelvin_point(Vec{0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("inversion weight matches the kernel homogeneity") {
    Vec x{0.5, 0.0, 0.0};
    // weight |x|^{n-2} in space dimension three
    CHECK(kelvin_value(x, 2.0, 3) == Approx(1.0));
    // in the plane the transform carries no weight
    CHECK(kelvin_value(x, 2.0, 2) == Approx(2.0));
}

TEST_CASE("descriptor formatting shows flavor, power and logs") {
    BoundDescriptor d{1.5, 0.0, BoundFlavor::BigO, 0.0};
    std::string s = format_bound(d);
    CHECK(s.find("O(") != std::string::npos);
    CHECK(s.find("1.5") != std::string::npos);
    BoundDescriptor dl{2.0, 1.0, BoundFlavor::LittleO, 0.0};
    std::string sl = format_bound(dl, true);
    CHECK(sl.find("o(") != std::string::npos);
    CHECK(sl.find("log") != std::string::npos);
    CHECK(bound_close(d, BoundDescriptor{1.5, 0.0, BoundFlavor::BigO, 0.3}));
    CHECK_FALSE(bound_close(d, dl));
}
