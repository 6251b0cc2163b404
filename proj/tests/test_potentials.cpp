#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nlpot/measure.hpp"
#include "nlpot/potentials.hpp"
#include "frozen_constants.hpp"

using namespace nlpot;
using Catch::Approx;

namespace {

Measure unit_ball_grid(int cells) {
    return grid_from_function(3, {-1.1, -1.1, -1.1}, 2.2, cells, [](const Vec& y) {
        return norm2(y) <= 1.0 ? 1.0 : 0.0;
    });
}

}  // namespace

TEST_CASE("point-mass potential matches the closed form along a ray") {
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
    for (double d : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        Vec x{d, 0.0, 0.0};
        double expect = std::pow(d, -2.0) / 2.0;  // |x|^{alpha-n}/(n-alpha)
        auto exact = riesz_kernel(mu, 1.0, x);
        CHECK(exact.value == Approx(expect).epsilon(1e-12));
        auto cake = riesz_layercake(mu, 1.0, x);
        CHECK(cake.value == Approx(expect).epsilon(1e-3));
        // the two routes agree within their combined reported error
        CHECK(std::abs(cake.value - exact.value) <=
              cake.error + exact.error + 1e-12 * expect);
    }
}

TEST_CASE("probe on top of an atom is rejected, not returned as infinity") {
    Measure mu = Measure::atomic(3, {{0.2, 0.0, 0.0}}, {1.0});
    CHECK_THROWS_AS(riesz_layercake(mu, 1.0, Vec{0.2, 0.0, 0.0}),
                    std::domain_error);
}

TEST_CASE("spec validation rejects degenerate quadrature settings") {
    PotentialSpec spec;
    spec.quad_rings = 8;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    PotentialSpec ok;
    CHECK_NOTHROW(ok.validate());
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
    CHECK_THROWS_AS(riesz_kernel(mu, 3.5, Vec{1.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("uniform ball density reproduces the interior and exterior laws") {
    Measure f = unit_ball_grid(32);
    CHECK(newtonian_ball(f, {0.5, 0.0, 0.0}).value ==
          Approx(frozen::uniform_ball_newton_R1_d05_n3).epsilon(0.005));
    CHECK(newtonian_ball(f, {10.0, 0.0, 0.0}).value ==
          Approx(frozen::uniform_ball_newton_R1_d10_n3).epsilon(0.005));
    // boundary value 4 pi / 3 at |x| = 1
    CHECK(newtonian_ball(f, {1.0, 0.0, 0.0}).value ==
          Approx(4.0 * pi / 3.0).epsilon(0.01));
}

TEST_CASE("exponential-kernel potential matches the subordination references") {
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
    CHECK(bessel(mu, 2.0, {1.0, 0.0, 0.0}).value ==
          Approx(frozen::bessel_a2_n3_r1).epsilon(5e-6));
    CHECK(bessel(mu, 1.0, {0.5, 0.0, 0.0}).value ==
          Approx(frozen::bessel_a1_n3_r05).epsilon(1e-6));
    CHECK(bessel(mu, 1.0, {1.0, 0.0, 0.0}).value ==
          Approx(frozen::bessel_a1_n3_r1).epsilon(1e-6));
    CHECK(bessel(mu, 1.0, {2.0, 0.0, 0.0}).value ==
          Approx(frozen::bessel_a1_n3_r2).epsilon(1e-6));
    CHECK(bessel(mu, 1.5, {1.0, 0.0, 0.0}).value ==
          Approx(frozen::bessel_a15_n3_r1).epsilon(1e-6));
}

TEST_CASE("nonlinear radial potential of a point mass has the closed form") {
    // mu(B_r) jumps to m at r = d, so the integral is elementary
    double m = 2.0, d = 0.5;
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {m});
    auto w = wolff(mu, 1.0, 2.0, 0.0, {d, 0.0, 0.0});
    double expect = m / d;  // m^{1/(p-1)} (p-1)/(n-ap) d^{-(n-ap)/(p-1)}
    CHECK(w.value == Approx(expect).epsilon(2e-3));
    CHECK(std::abs(w.value - expect) <= w.error + 2e-3 * expect);
}

TEST_CASE("damping never increases the radial potential") {
    Measure mu = Measure::atomic(3, {{0.1, 0.0, 0.0}, {-0.2, 0.1, 0.0}}, {1.0, 0.5});
    Vec x{0.4, 0.2, 0.0};
    double plain = wolff(mu, 1.0, 2.0, 0.0, x).value;
    double damped = wolff(mu, 1.0, 2.0, 1.0, x).value;
    CHECK(damped > 0.0);
    CHECK(damped <= plain);
}

TEST_CASE("mass scaling laws hold to rounding accuracy") {
    std::mt19937 rng(71u);
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Vec> pts;
        Vec masses;
        for (int k = 0; k < 4; ++k) {
            pts.push_back({U(rng), U(rng), U(rng)});
            masses.push_back(0.2 + std::abs(U(rng)));
        }
        Vec doubled = masses;
        for (double& v : doubled) v *= 2.0;
        Measure mu = Measure::atomic(3, pts, masses);
        Measure mu2 = Measure::atomic(3, pts, doubled);
        Vec x{0.7, 0.1, -0.2};
        // linear in the measure
        CHECK(riesz_kernel(mu2, 1.0, x).value ==
              Approx(2.0 * riesz_kernel(mu, 1.0, x).value).epsilon(1e-12));
        // degree 1/(p-1) = 1 at p = 2
        CHECK(wolff(mu2, 1.0, 2.0, 1.0, x).value ==
              Approx(2.0 * wolff(mu, 1.0, 2.0, 1.0, x).value).epsilon(1e-12));
        // degree 1/(p-1) = 1/2 at p = 3; alpha = 0.9 keeps alpha p < n
        CHECK(wolff(mu2, 0.9, 3.0, 0.0, x).value ==
              Approx(std::sqrt(2.0) * wolff(mu, 0.9, 3.0, 0.0, x).value)
                  .epsilon(1e-12));
        CHECK(havin_mazya(mu2, 0.9, 3.0, x).value ==
              Approx(std::sqrt(2.0) * havin_mazya(mu, 0.9, 3.0, x).value)
                  .epsilon(1e-12));
    }
}

TEST_CASE("composition scaling has degree sigma in the density") {
    Measure f = grid_from_function(3, {-0.5, -0.5, -0.5}, 1.0, 12, [](const Vec& y) {
        return std::exp(-3.0 * (sq(y[0]) + sq(y[1]) + sq(y[2])));
    });
    Measure f2 = grid_from_function(3, {-0.5, -0.5, -0.5}, 1.0, 12, [](const Vec& y) {
        return 2.0 * std::exp(-3.0 * (sq(y[0]) + sq(y[1]) + sq(y[2])));
    });
    Vec x{0.1, 0.0, 0.0};
    double sigma = 2.0;
    // N(2f) = 2 Nf, and the outer pass is linear in (Nf)^sigma
    double gain = std::pow(2.0, sigma);
    CHECK(composite_NN(f2, sigma, x).value ==
          Approx(gain * composite_NN(f, sigma, x).value).epsilon(1e-12));
    CHECK(wolff_sigma(f2, sigma, x).value ==
          Approx(std::pow(2.0, sigma) * wolff_sigma(f, sigma, x).value)
              .epsilon(1e-12));
}

TEST_CASE("composed potential approaches its closed form under refinement") {
    Vec origin{0.0, 0.0, 0.0};
    PotentialSpec spec;
    double c24 = composite_NN(unit_ball_grid(24), 1.0, origin, spec).value;
    double c40 = composite_NN(unit_ball_grid(40), 1.0, origin, spec).value;
    double target = frozen::composite_unit_ball_center_n3;
    CHECK(c24 == Approx(target).epsilon(0.30));
    CHECK(std::abs(c40 - target) < std::abs(c24 - target));
}

TEST_CASE("sigma-cake of the unit ball at the center hits the reference") {
    Measure f = unit_ball_grid(32);
    auto w = wolff_sigma(f, 2.0, {0.0, 0.0, 0.0});
    double target = frozen::radial_cake_sigma2_unit_ball_center_n3;
    CHECK(w.value == Approx(target).epsilon(0.01));
    CHECK(std::abs(w.value - target) <= w.error + 0.01 * target);
}

TEST_CASE("maximal average of the unit ball from a distant probe") {
    Measure f = unit_ball_grid(32);
    auto m = maximal(f, {3.0, 0.0, 0.0});
    CHECK(m.value == Approx(frozen::maximal_cap_ratio_d3).epsilon(0.08));
    // never exceeds the essential sup of the density
    CHECK(m.value <= 1.0 + 1e-12);
    // near probe: the average at tiny radii approaches the local value
    CHECK(maximal(f, {0.0, 0.0, 0.0}).value == Approx(1.0).epsilon(0.05));
}

TEST_CASE("off-center sphere mass brackets contain the exact cap fraction") {
    Measure sphere = Measure::radial(3, {1.0}, {1.0});
    BallProfile prof(sphere, {0.5, 0.0, 0.0}, true);
    auto m08 = prof.mass(0.8);
    CHECK(m08.lo <= frozen::cap_fraction_d05_rho1_r08 + 1e-12);
    CHECK(m08.hi >= frozen::cap_fraction_d05_rho1_r08 - 1e-12);
    auto m13 = prof.mass(1.3);
    CHECK(m13.lo <= frozen::cap_fraction_d05_rho1_r13 + 1e-12);
    CHECK(m13.hi >= frozen::cap_fraction_d05_rho1_r13 - 1e-12);
    // a ball big enough to swallow the sphere has the full mass exactly
    CHECK(prof.mass(1.6).lo == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shell means agree with the quadrature references") {
    CHECK(detail::power_shell_mean(0.5, 1.0, 1.2, 3) ==
          Approx(frozen::shell_mean_d05_rho1_a12_n3).epsilon(1e-9));
    CHECK(detail::power_shell_mean(2.0, 1.0, 1.0, 3) ==
          Approx(frozen::shell_mean_d2_rho1_a1_n3).epsilon(1e-9));
    // harmonic exponent: exterior mean equals the value at the center distance
    CHECK(detail::power_shell_mean(2.0, 1.0, 2.0, 3) == Approx(0.5).epsilon(1e-10));
}

TEST_CASE("the two point-mass routes for the quadratic index coincide") {
    // at alpha = 1, p = 2 the radial and kernel formulations are both m/d
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.5});
    Vec x{0.6, 0.0, 0.0};
    double w = wolff(mu, 1.0, 2.0, 0.0, x).value;
    double i2 = riesz_layercake(mu, 2.0, x).value;  // I_2 = mu(B)/r integral
    CHECK(w == Approx(i2).epsilon(5e-3));
    double u = havin_mazya(mu, 1.0, 2.0, x).value;
    CHECK(u > 0.0);
    CHECK(std::isfinite(u));
}

TEST_CASE("bessel-kernel nonlinear route stays within a constant of the damped one") {
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}}, {1.0, 0.7});
    Vec x{0.15, 0.1, 0.0};
    double v = v_potential(mu, 1.0, 2.0, x).value;
    double wc = wolff(mu, 1.0, 2.0, 1.0, x).value;
    CHECK(v > 0.0);
    CHECK(wc > 0.0);
    double ratio = v / wc;
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 1e-4);
    CHECK(ratio < 1e4);
}

TEST_CASE("operator dispatch names match the direct calls") {
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
    Vec x{0.5, 0.0, 0.0};
    PotentialSpec spec;
    spec.alpha = 1.0;
    spec.p = 2.0;
    spec.c = 0.0;
    CHECK(evaluate(PotentialOp::riesz_kernel, mu, x, spec).value ==
          Approx(riesz_kernel(mu, 1.0, x).value));
    CHECK(evaluate(PotentialOp::wolff, mu, x, spec).value ==
          Approx(wolff(mu, 1.0, 2.0, 0.0, x).value));
    CHECK(op_from_name("havin_mazya") == PotentialOp::havin_mazya);
    CHECK(std::string(op_name(PotentialOp::wolff_sigma)) == "wolff_sigma");
    CHECK_THROWS_AS(op_from_name("nonsense"), std::invalid_argument);
}

TEST_CASE("grid and radial norms behave") {
    Measure f = unit_ball_grid(20);
    CHECK(sup_norm(f) == Approx(1.0));
    // L^1 norm equals the grid mass, close to the ball volume
    CHECK(lp_norm(f, 1.0) == Approx(4.0 * pi / 3.0).epsilon(0.02));
    // L^2 of an indicator has the same value under the 1/2 power
    CHECK(lp_norm(f, 2.0) == Approx(std::pow(4.0 * pi / 3.0, 0.5)).epsilon(0.02));
}
