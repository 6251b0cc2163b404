// Release gate: every blocking numeric property in one binary, one line per
// criterion, exit nonzero if anything fails.  Deliberately framework-free so
// the output is a flat, greppable checklist.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nlpot/asymptotics.hpp"
#include "nlpot/constructor.hpp"
#include "nlpot/estimates.hpp"
#include "nlpot/measure.hpp"
#include "nlpot/potentials.hpp"
#include "nlpot/repr.hpp"

using namespace nlpot;

namespace {

using clk = std::chrono::steady_clock;

struct Outcome {
    bool ok = false;
    std::string detail;
};

int line_no = 0;
int failures = 0;

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, ap);
    va_end(ap);
    return std::string(buf);
}

template <class F>
void criterion(const char* name, F&& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("unexpected exception: ") + e.what();
    }
    ++line_no;
    std::printf("[%2d] %s  %s%s%s\n", line_no, o.ok ? "PASS" : "FAIL", name,
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
}

double elapsed(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

double rel_dev(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool within_factor(double a, double b, double factor) {
    return a > 0.0 && b > 0.0 && a <= factor * b && b <= factor * a;
}

Measure scaled_atomic(const Measure& mu, double t) {
    Vec m = mu.masses();
    for (double& v : m) v *= t;
    return Measure::atomic(mu.dim(), mu.points(), std::move(m));
}

Measure scaled_grid(const Measure& f, double t) {
    Vec v = f.values();
    for (double& w : v) w *= t;
    return Measure::grid(f.dim(), f.box_min(), f.box_side(), f.cells_per_axis(),
                         std::move(v));
}

}  // namespace

int main() {
    std::printf("acceptance gate (12 criteria)\n");

    // 1. point mass on a ray: the analytic kernel route against the closed
    //    form, and the 512-ring ladder against the same target
    criterion("point-mass potential matches the closed form on both routes", [] {
        auto t0 = clk::now();
        Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
        double dev_kernel = 0.0, dev_cake = 0.0;
        for (double d : {0.1, 0.25, 0.5, 1.0, 2.0}) {
            Vec x{d, 0.0, 0.0};
            double expect = std::pow(d, -2.0) / 2.0;  // |x|^{a-n}/(n-a)
            dev_kernel = std::max(dev_kernel,
                                  rel_dev(riesz_kernel(mu, 1.0, x).value, expect));
            dev_cake = std::max(dev_cake,
                                rel_dev(riesz_layercake(mu, 1.0, x).value, expect));
        }
        double dt = elapsed(t0);
        Outcome o;
        o.ok = dev_kernel <= 1e-9 && dev_cake <= 1e-3 && dt < 1.0;
        o.detail = fmt("kernel dev %.1e (tol 1e-9), 512-ring dev %.1e (tol 1e-3), %.2f s",
                       dev_kernel, dev_cake, dt);
        return o;
    });

    // 2. uniform unit ball at 64^3 cells: interior, boundary and exterior
    //    probes against the classical values
    criterion("uniform-ball potential hits the three classical values", [] {
        auto t0 = clk::now();
        Measure f = grid_from_function(3, {-1.1, -1.1, -1.1}, 2.2, 64,
                                       [](const Vec& y) {
                                           return norm2(y) <= 1.0 ? 1.0 : 0.0;
                                       });
        double a = 0.5;
        double di = rel_dev(newtonian_ball(f, {a, 0.0, 0.0}).value,
                            2.0 * pi * (1.0 - a * a / 3.0));
        double db = rel_dev(newtonian_ball(f, {1.0, 0.0, 0.0}).value, 4.0 * pi / 3.0);
        double de = rel_dev(newtonian_ball(f, {10.0, 0.0, 0.0}).value,
                            4.0 * pi / 3.0 / 10.0);
        double worst = std::max({di, db, de});
        double dt = elapsed(t0);
        Outcome o;
        o.ok = worst <= 0.005 && dt < 30.0;
        o.detail = fmt("interior %.1e, boundary %.1e, exterior %.1e (tol 5e-3), %.1f s",
                       di, db, de, dt);
        return o;
    });

    // 3. homogeneity in the measure/density: degree 1 (linear kernel), degree
    //    1/(p-1) (nonlinear radial and composed), degree sigma (both
    //    composition operators); 20 random cases per operator
    criterion("scaling degrees hold to 1e-12 across the five operators", [] {
        std::mt19937 rng(2026u);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = 0.0;
        const char* worst_op = "";
        auto track = [&](const char* op, double dev) {
            if (dev > worst) {
                worst = dev;
                worst_op = op;
            }
        };
        for (int rep = 0; rep < 20; ++rep) {
            double t = 0.4 + 3.0 * U(rng);
            int k = 3 + rep % 3;
            std::vector<Vec> pts;
            Vec ms;
            for (int i = 0; i < k; ++i) {
                pts.push_back({0.7 * (U(rng) - 0.5), 0.7 * (U(rng) - 0.5),
                               0.7 * (U(rng) - 0.5)});
                ms.push_back(0.1 + U(rng));
            }
            Measure mu = Measure::atomic(3, pts, ms);
            Measure mu_t = scaled_atomic(mu, t);
            Vec x{0.55 + 0.2 * U(rng), 0.15, -0.2};
            track("riesz", rel_dev(riesz_kernel(mu_t, 1.0, x).value,
                                   t * riesz_kernel(mu, 1.0, x).value));
            double p = 1.8 + 1.2 * U(rng);
            double c = (rep % 2) ? 1.0 : 0.0;
            double q = 1.0 / (p - 1.0);
            track("wolff", rel_dev(wolff(mu_t, 0.9, p, c, x).value,
                                   std::pow(t, q) * wolff(mu, 0.9, p, c, x).value));
            track("havin_mazya",
                  rel_dev(havin_mazya(mu_t, 0.9, p, x).value,
                          std::pow(t, q) * havin_mazya(mu, 0.9, p, x).value));
            double sigma = 0.6 + 2.2 * U(rng);
            double b1 = 2.0 + 4.0 * U(rng), c1 = 0.6 * (U(rng) - 0.5);
            Measure f = grid_from_function(3, {-0.5, -0.5, -0.5}, 1.0, 8,
                                           [&](const Vec& y) {
                                               double r2 = sq(y[0] - c1) + sq(y[1]) +
                                                           sq(y[2] + 0.5 * c1);
                                               return 0.2 + std::exp(-b1 * r2);
                                           });
            Measure f_t = scaled_grid(f, t);
            Vec xc{0.12 * (U(rng) - 0.5), 0.12 * (U(rng) - 0.5),
                   0.12 * (U(rng) - 0.5)};
            track("composite_NN",
                  rel_dev(composite_NN(f_t, sigma, xc).value,
                          std::pow(t, sigma) * composite_NN(f, sigma, xc).value));
            Vec xw{0.5 * (U(rng) - 0.5), 0.5 * (U(rng) - 0.5),
                   0.5 * (U(rng) - 0.5)};
            track("wolff_sigma",
                  rel_dev(wolff_sigma(f_t, sigma, xw).value,
                          std::pow(t, sigma) * wolff_sigma(f, sigma, xw).value));
        }
        Outcome o;
        o.ok = worst <= 1e-12;
        o.detail = fmt("worst rel dev %.1e (%s), tol 1e-12, 20 cases/operator",
                       worst, worst_op);
        return o;
    });

    // 4. composed Bessel against the damped radial potential: the observed
    //    ratio band over random atomic measures must be positive, finite and
    //    stable under doubling the ring count
    criterion("composed/damped potential ratio is bounded and refinement-stable", [] {
        std::mt19937 rng(515u);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        PotentialSpec coarse;
        PotentialSpec fine;
        fine.quad_rings = 1024;
        double min_c = inf, max_c = 0.0, min_f = inf, max_f = 0.0;
        bool violated = false;
        for (int rep = 0; rep < 20; ++rep) {
            int k = 2 + rep % 4;
            std::vector<Vec> pts;
            Vec ms;
            for (int i = 0; i < k; ++i) {
                pts.push_back({0.7 * (U(rng) - 0.5), 0.7 * (U(rng) - 0.5),
                               0.7 * (U(rng) - 0.5)});
                ms.push_back(0.2 + U(rng));
            }
            Measure mu = Measure::atomic(3, pts, ms);
            auto rc = verify_thm42(mu, 1.0, 2.0, 1.0, EstimateId::Thm42_upper,
                                   coarse, 8);
            auto rf = verify_thm42(mu, 1.0, 2.0, 1.0, EstimateId::Thm42_upper,
                                   fine, 8);
            min_c = std::min(min_c, rc.min_ratio);
            max_c = std::max(max_c, rc.max_ratio);
            min_f = std::min(min_f, rf.min_ratio);
            max_f = std::max(max_f, rf.max_ratio);
            violated |= rc.verdict == Verdict::Violated ||
                        rf.verdict == Verdict::Violated;
        }
        Outcome o;
        o.ok = min_c > 0.0 && std::isfinite(max_c) && !violated &&
               within_factor(min_c, min_f, 2.0) && within_factor(max_c, max_f, 2.0);
        o.detail = fmt("ratio band [%.3g, %.3g] at 512 rings, [%.3g, %.3g] at 1024",
                       min_c, max_c, min_f, max_f);
        return o;
    });

    // 5. sup bounds for the doubly-composed potential on random bounded
    //    densities, power branch and log branch, on coarse and refined grids
    criterion("composition sup bounds hold on both branches under refinement", [] {
        std::mt19937 rng(808u);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double agg[8] = {0, 0, 0, 0, 0, 0, 0, 0};  // 4 report kinds x 2 grids
        bool violated = false, finite = true;
        for (int rep = 0; rep < 20; ++rep) {
            double a0 = 0.1 + 0.4 * U(rng);
            double a1 = 0.3 + 0.7 * U(rng), b1 = 2.0 + 4.0 * U(rng);
            double a2 = 0.3 + 0.7 * U(rng), b2 = 2.0 + 4.0 * U(rng);
            Vec c1{0.8 * (U(rng) - 0.5), 0.8 * (U(rng) - 0.5), 0.8 * (U(rng) - 0.5)};
            Vec c2{0.8 * (U(rng) - 0.5), 0.8 * (U(rng) - 0.5), 0.8 * (U(rng) - 0.5)};
            auto dens = [=](const Vec& y) {
                double r1 = sq(y[0] - c1[0]) + sq(y[1] - c1[1]) + sq(y[2] - c1[2]);
                double r2 = sq(y[0] - c2[0]) + sq(y[1] - c2[1]) + sq(y[2] - c2[2]);
                return a0 + a1 * std::exp(-b1 * r1) + a2 * std::exp(-b2 * r2);
            };
            Measure f8 = grid_from_function(3, {-1.0, -1.0, -1.0}, 2.0, 8, dens);
            Measure f16 = grid_from_function(3, {-1.0, -1.0, -1.0}, 2.0, 16, dens);
            const Measure* grids[2] = {&f8, &f16};
            for (int g = 0; g < 2; ++g) {
                EstimateReport reps[4] = {
                    verify_thm41(*grids[g], 3.0, 1.0, {}, 2),
                    verify_thm41(*grids[g], 2.0, 1.0, {}, 2),
                    verify_cor41(*grids[g], 3.0, {}, 2),
                    verify_cor41(*grids[g], 2.0, {}, 2),
                };
                for (int r = 0; r < 4; ++r) {
                    violated |= reps[r].verdict == Verdict::Violated;
                    finite &= std::isfinite(reps[r].max_ratio) &&
                              reps[r].max_ratio > 0.0;
                    agg[4 * g + r] = std::max(agg[4 * g + r], reps[r].max_ratio);
                }
            }
        }
        bool stable = true;
        for (int r = 0; r < 4; ++r)
            stable &= within_factor(agg[r], agg[4 + r], 2.0);
        Outcome o;
        o.ok = finite && !violated && stable;
        o.detail = fmt("max ratios %.3g/%.3g/%.3g/%.3g -> %.3g/%.3g/%.3g/%.3g under 2x cells",
                       agg[0], agg[1], agg[2], agg[3], agg[4], agg[5], agg[6], agg[7]);
        return o;
    });

    // 6. ball-kernel majorant: the fitted constant over a 100-probe sweep is
    //    invariant under dilating the ball and the probe offsets together
    criterion("majorant constant is dilation-invariant and refinement-stable", [] {
        Vec x0{0.3, -0.2, 0.1};
        std::vector<Vec> offsets;
        for (int i = 0; i < 100; ++i) {
            Vec h = halton_point(static_cast<std::uint64_t>(i) + 1, 3);
            Vec dir(3);
            double nn = 0.0;
            for (int d = 0; d < 3; ++d) {
                dir[d] = 2.0 * h[d] - 1.0;
                nn += sq(dir[d]);
            }
            if (nn < 1e-6) {
                dir = {1.0, 0.0, 0.0};
                nn = 1.0;
            }
            double len = 0.05 * std::pow(120.0, i / 99.0);  // 0.05 .. 6
            for (double& v : dir) v *= len / std::sqrt(nn);
            offsets.push_back(std::move(dir));
        }
        auto fitted = [&](double R, const PotentialSpec& sp) {
            std::vector<Vec> probes;
            for (const Vec& off : offsets) {
                Vec x = x0;
                for (int d = 0; d < 3; ++d) x[d] += R * off[d];
                probes.push_back(std::move(x));
            }
            return verify_lemma42(x0, R, probes, sp).fitted_C;
        };
        PotentialSpec sp;
        PotentialSpec sp2;
        sp2.quad_rings = 1024;
        double c_half = fitted(0.5, sp), c_one = fitted(1.0, sp), c_two = fitted(2.0, sp);
        double inv_dev = std::max(rel_dev(c_half, c_one), rel_dev(c_two, c_one));
        double c_fine = fitted(1.0, sp2);
        Outcome o;
        o.ok = c_one > 0.0 && inv_dev <= 1e-6 && within_factor(c_one, c_fine, 2.0);
        o.detail = fmt("C = %.6f, dilation dev %.1e (tol 1e-6), refined C = %.6f",
                       c_one, inv_dev, c_fine);
        return o;
    });

    // 7. bump-ladder construction, reference seed: density cap, harmonicity
    //    off the supports, per-ball lower bound, and a 1000-sample floor
    criterion("singular construction passes its four defining checks", [] {
        auto t0 = clk::now();
        SeedSequence seed;
        seed.dim = 3;
        seed.points = make_xseq(0.2, 0.2, 6, 3);
        for (const Vec& pnt : seed.points) seed.radii.push_back(0.5 * norm2(pnt));
        SingularSolution sol =
            lemma41_build([](double r) { return r; }, std::move(seed), 3);
        Lemma41Report rep = check_lemma41(sol);
        bool lower_each = true;
        for (std::size_t j = 0; j < sol.seed().size(); ++j)
            if (!(sol.u(sol.seed().points[j]) >= sol.lower_bound(j)))
                lower_each = false;
        double min_u = inf;
        for (int i = 0; i < 1000; ++i) {
            Vec h = halton_point(static_cast<std::uint64_t>(i) + 1, 3);
            Vec x(3);
            for (int d = 0; d < 3; ++d) x[d] = 1.2 * h[d] - 0.6;
            min_u = std::min(min_u, sol.u(x));
        }
        double dt = elapsed(t0);
        Outcome o;
        o.ok = rep.density_cap_ok && rep.harmonic_ok && rep.lower_bound_ok &&
               rep.floor_ok && rep.skipped_balls == 0 && lower_each &&
               min_u >= 1.0 && dt < 60.0;
        o.detail = fmt("cap %d, harmonic %d, lower %d, floor %d, min u %.4f at 1000 pts, %.1f s",
                       int(rep.density_cap_ok), int(rep.harmonic_ok),
                       int(rep.lower_bound_ok), int(rep.floor_ok), min_u, dt);
        return o;
    });

    // 8. power-law ladder: the surviving centers outrun the prescribed rate
    //    with strictly increasing margin and a tenfold overall gain
    criterion("power-law ladder outruns its target rate tenfold", [] {
        SeedSequence s = schedule_thm33(4.0, 3);
        bool kept5 = s.size() == 5;
        double first_norm = s.points.empty() ? 0.0 : norm2(s.points[0]);
        bool depth_ok = first_norm > 1e-3 && first_norm < 2e-3;  // 4th rung kept first
        SingularSolution sol = lemma41_build(std::move(s), 3);
        BlowupReport blow = measure_blowup(
            sol, [](double r) { return r * std::pow(r, -4.0 / 3.0); }, 10.0);
        bool strictly_up = blow.ratios.size() >= 2;
        for (std::size_t j = 0; j + 1 < blow.ratios.size(); ++j)
            if (!(blow.ratios[j + 1] > blow.ratios[j])) strictly_up = false;
        Outcome o;
        o.ok = kept5 && depth_ok && strictly_up && blow.growth >= 10.0 &&
               blow.verdict == BlowupVerdict::Diverges;
        o.detail = fmt("%zu centers kept, ratios %.3g -> %.3g (x%.1f)",
                       blow.ratios.size(),
                       blow.ratios.empty() ? 0.0 : blow.ratios.front(),
                       blow.ratios.empty() ? 0.0 : blow.ratios.back(), blow.growth);
        return o;
    });

    // 9. integrability ladder: the guaranteed constant, the per-rung gain and
    //    the termination bound
    criterion("integrability ladder reproduces the hand constants", [] {
        MoserTrace led = moser_ledger(3, 4.0, 2.2);
        bool c0_ok = std::abs(led.C0 - 0.4667) <= 1e-4;
        bool gain_ok = !led.steps.empty();
        for (const MoserStep& st : led.steps) {
            double gain = 1.0 / st.p - (std::isfinite(st.q) ? 1.0 / st.q : 0.0);
            if (!(gain >= led.C0 - 1e-12)) gain_ok = false;
        }
        bool steps_ok = led.reached_infinity && led.step_bound == 4 &&
                        led.m <= led.step_bound;
        Outcome o;
        o.ok = c0_ok && gain_ok && steps_ok;
        o.detail = fmt("C0 = %.6f (target 0.4667), %zu rungs, bound %zu",
                       led.C0, led.m, led.step_bound);
        return o;
    });

    // 10. exponent-plane partition: each admissible node lands in exactly one
    //     region, and the classifier agrees with the raw predicates
    criterion("exponent-plane partition is exhaustive and exclusive", [] {
        int checked = 0;
        bool exclusive = true, agrees = true;
        for (int i = 0; i < 200; ++i) {
            for (int j = 0; j < 200; ++j) {
                double lambda = 6.0 * i / 199.0;
                double sigma = 6.0 * j / 199.0;
                if (sigma > lambda) continue;
                ++checked;
                bool pa = lambda <= 3.0;
                bool pb = false, pc = false, pd = false;
                if (!pa) {
                    double crit = critical_sigma(lambda, 3);
                    pb = sigma < crit;
                    pd = sigma == crit;
                    pc = sigma > crit;
                }
                if (int(pa) + int(pb) + int(pc) + int(pd) != 1) exclusive = false;
                Region want = pa ? Region::A
                                 : pb ? Region::B : pd ? Region::D : Region::C;
                if (classify_region(lambda, sigma, 3) != want) agrees = false;
            }
        }
        bool hand = classify_region(3.0, 3.0, 3) == Region::A &&
                    classify_region(4.0, 1.0, 3) == Region::B &&
                    classify_region(4.0, 3.0, 3) == Region::C &&
                    classify_region(4.0, 2.75, 3) == Region::D &&
                    classify_region(3.5, 0.0, 3) == Region::B &&
                    classify_region(5.0, 5.0, 3) == Region::C;
        Outcome o;
        o.ok = exclusive && agrees && hand && checked > 0;
        o.detail = fmt("%d nodes on the 200x200 sweep, six hand cases %s",
                       checked, hand ? "match" : "MISMATCH");
        return o;
    });

    // 11. cross-route consistency: the weightless origin rates reduce to the
    //     plain taxonomy, and the rates at infinity are the inversion image
    //     of the weighted origin rates
    criterion("origin and infinity rates agree through the inversion", [] {
        const int n = 3;
        const std::pair<double, double> reduce_pairs[] = {
            {4.0, 0.0}, {4.0, 1.0}, {4.0, 2.0}, {4.0, 2.5},
            {3.5, 1.0}, {5.0, 2.2}, {6.0, 2.0}};
        bool reduce_ok = true;
        for (auto [lambda, sigma] : reduce_pairs) {
            SystemBounds sb = bounds_thm37(lambda, sigma, n, 0.0, 0.0);
            RegionOutcome cell = sweep_cell(lambda, sigma, n);
            bool match = cell.has_bounds &&
                         sb.u.base_exponent == cell.u.base_exponent &&
                         sb.u.base_exponent == sq(n - 2.0) * lambda / n &&
                         sb.u.log_power == 0.0 &&
                         sb.u.flavor == BoundFlavor::LittleO &&
                         sb.v.base_exponent == n - 2.0 && sb.v.log_power == 0.0 &&
                         sb.v.flavor == BoundFlavor::BigO;
            if (!match) reduce_ok = false;
        }
        const std::pair<double, double> image_pairs[] = {
            {2.5, 0.0}, {4.0, 1.0}, {4.0, 2.0}, {4.0, 2.5}};
        double image_dev = 0.0;
        for (auto [lambda, sigma] : image_pairs) {
            double alpha = n + 2.0 - (n - 2.0) * lambda;
            double beta = n + 2.0 - (n - 2.0) * sigma;
            SystemBounds inner = bounds_thm37(lambda, sigma, n, alpha, beta);
            SystemBounds outer = bounds_thm36(lambda, sigma, n);
            image_dev = std::max(
                {image_dev,
                 std::abs(inner.u.base_exponent - (n - 2.0) - outer.u.base_exponent),
                 std::abs(inner.v.base_exponent - (n - 2.0) - outer.v.base_exponent),
                 std::abs(inner.u.log_power - outer.u.log_power),
                 std::abs(inner.v.log_power - outer.v.log_power)});
        }
        Outcome o;
        o.ok = reduce_ok && image_dev <= 1e-10;
        o.detail = fmt("weightless reduction exact on 7 pairs, image dev %.1e on 4 branch cases",
                       image_dev);
        return o;
    });

    // 12. representation round trip: the planted point mass is recovered from
    //     the composed solution, and the inversion is an involution
    criterion("point-mass recovery and inversion round trips close", [] {
        double worst_mass = 0.0;
        bool mass_ok = true;
        for (double m : {0.0, 1.0, 2.0, 5.0}) {
            Decomposition dec;
            dec.m = m;
            dec.mu = Measure::atomic(3, {{0.5, 0.0, 0.0}, {0.0, 0.4, 0.0}},
                                     {1.0, 0.5});
            dec.harmonic_part = [](const Vec& y) { return 0.3 + 0.1 * y[0]; };
            dec.epsilon = 1.0;
            auto est = estimate_point_mass(
                [&](const Vec& y) { return compose_brezis_lions(dec, y); }, 3);
            double dev = std::abs(est.m - m) / std::max(1.0, m);
            worst_mass = std::max(worst_mass, dev);
            if (est.verdict != Verdict::Consistent || dev > 0.01) mass_ok = false;
        }
        std::mt19937 rng(99u);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        double worst_inv = 0.0;
        for (int i = 0; i < 30; ++i) {
            Vec x{U(rng), U(rng), U(rng)};
            if (norm2(x) < 0.05) x[0] += 1.0;
            Vec back = kelvin_point(kelvin_point(x));
            for (int d = 0; d < 3; ++d)
                worst_inv = std::max(worst_inv, std::abs(back[d] - x[d]) /
                                                    std::max(1.0, std::abs(x[d])));
            double v = 0.5 + U(rng);
            double vv = kelvin_value(kelvin_point(x), kelvin_value(x, v, 3), 3);
            worst_inv = std::max(worst_inv,
                                 std::abs(vv - v) / std::max(1.0, std::abs(v)));
        }
        Outcome o;
        o.ok = mass_ok && worst_inv <= 1e-12;
        o.detail = fmt("mass dev %.1e (tol 1e-2) for m in {0,1,2,5}, involution dev %.1e",
                       worst_mass, worst_inv);
        return o;
    });

    if (failures)
        std::printf("%d of %d criteria FAILED\n", failures, line_no);
    else
        std::printf("all %d criteria passed\n", line_no);
    return failures ? 1 : 0;
}
