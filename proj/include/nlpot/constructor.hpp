#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "profiles.hpp"

// Construction of superharmonic functions with a prescribed singular ladder:
// a sequence of disjoint bumps marching into the origin, the resulting
// Newtonian (or logarithmic) potential, verification of the four defining
// properties, and the radius schedules that tune the ladder to a target
// blow-up rate.

namespace nlpot {

// ---------------------------------------------------------------- seeds ----

// Centers, radii and bump heights for the ladder.  The invariants are the
// ones every construction below relies on:
//   * 0 < 4|x_{j+1}| < |x_j| < 1/2   (geometric march into the origin)
//   * 0 < r_j <= |x_j|/2             (disjoint bumps, away from 0)
//   * phi_j in (0,1) with phi_{j+1} <= 0.95 phi_j  (summable heights)
// The last line is a ratio certificate: any finite prefix trivially has a
// finite sum, so we certify instead that the generating rule is summable.
struct SeedSequence {
    static constexpr double height_ratio_max = 0.95;

    int dim = 3;
    std::vector<Vec> points;
    Vec radii;
    Vec phi_values;

    std::size_t size() const { return points.size(); }

    void validate() const {
        require_dim(dim);
        require(!points.empty(), "seed sequence is empty");
        require(points.size() == radii.size() && points.size() == phi_values.size(),
                "seed sequence arrays must have equal length");
        double prev_norm = 0.5;
        double prev_phi = inf;
        for (std::size_t j = 0; j < points.size(); ++j) {
            require(static_cast<int>(points[j].size()) == dim,
                    "seed point has the wrong dimension");
            double nj = norm2(points[j]);
            require(nj > 0.0, "seed centers must avoid the origin");
            if (j == 0)
                require(nj < 0.5, "first center must lie inside radius 1/2");
            else
                require(4.0 * nj < prev_norm, "centers must shrink by more than 4x");
            require(radii[j] > 0.0 && radii[j] <= 0.5 * nj,
                    "radii must satisfy 0 < r <= |x|/2");
            require(phi_values[j] > 0.0 && phi_values[j] < 1.0,
                    "bump heights must lie in (0,1)");
            if (j > 0)
                require(phi_values[j] <= height_ratio_max * prev_phi,
                        "bump heights must decay (ratio certificate 0.95)");
            prev_norm = nj;
            prev_phi = phi_values[j];
        }
    }

    SeedSequence prefix(std::size_t k) const {
        SeedSequence s;
        s.dim = dim;
        s.points.assign(points.begin(), points.begin() + k);
        s.radii.assign(radii.begin(), radii.begin() + k);
        s.phi_values.assign(phi_values.begin(), phi_values.begin() + k);
        return s;
    }

    SeedSequence suffix_from(std::size_t k) const {
        SeedSequence s;
        s.dim = dim;
        s.points.assign(points.begin() + k, points.end());
        s.radii.assign(radii.begin() + k, radii.end());
        s.phi_values.assign(phi_values.begin() + k, phi_values.end());
        return s;
    }
};

// Centers |x_j| = first_norm * ratio^{j-1} on the first coordinate axis.
// ratio < 1/4 keeps the 4x separation strict.
inline std::vector<Vec> make_xseq(double ratio, double first_norm, int count = 8,
                                  int n = 3) {
    require_dim(n);
    require(ratio > 0.0 && ratio < 0.25, "center ratio must lie in (0, 1/4)");
    require(first_norm > 0.0 && first_norm < 0.5,
            "first center norm must lie in (0, 1/2)");
    check_arg(count >= 1, "need at least one center");
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    double norm = first_norm;
    for (int j = 0; j < count; ++j) {
        Vec p(static_cast<std::size_t>(n), 0.0);
        p[0] = norm;
        pts.push_back(std::move(p));
        norm *= ratio;
    }
    return pts;
}

// ------------------------------------------------------ singular solution ----

// The built object: density f = sum_j M_j psi((x - x_j)/r_j) with
// M_j = phi_j / r_j^n, and the normalized potential
//   u = 1 + B int Gamma(|x-y|) f(y) dy,   B = omega_weight(n),
// evaluated through the radial profile of the bump (exact outside each
// support, tabulated inside), so a point evaluation costs O(#bumps).
class SingularSolution {
public:
    SingularSolution(SeedSequence seed, int n)
        : seed_(std::move(seed)), n_(n), bump_(n) {
        require(seed_.dim == n, "seed dimension does not match the build dimension");
        seed_.validate();
        I_ = bump_.integral();
        J_ = bump_.ladder_min_kernel_mean();
        B_ = omega_weight(n);
        A_ = (n_ == 2) ? I_ / (2.0 * pi) : B_ * J_;
        for (std::size_t j = 0; j < seed_.size(); ++j)
            log1r_.push_back(-std::log(seed_.radii[j]));
    }

    const SeedSequence& seed() const { return seed_; }
    const BumpProfile& bump() const { return bump_; }
    int dim() const { return n_; }
    double bump_integral() const { return I_; }
    double kernel_floor() const { return J_; }
    double newton_constant() const { return B_; }

    // constant in the per-ball lower bound for u
    double lower_constant() const { return A_; }

    double density_cap(std::size_t j) const {
        return seed_.phi_values[j] / std::pow(seed_.radii[j], n_);
    }

    // the guaranteed floor for u on ball j
    double lower_bound(std::size_t j) const {
        if (n_ == 2) return A_ * seed_.phi_values[j] * log1r_[j];
        return A_ * seed_.phi_values[j] * std::pow(seed_.radii[j], 2.0 - n_);
    }

    double f(const Vec& x) const {
        check_arg(static_cast<int>(x.size()) == n_, "point has the wrong dimension");
        KahanSum s;
        for (std::size_t j = 0; j < seed_.size(); ++j) {
            double t = dist(x, seed_.points[j]) / seed_.radii[j];
            if (t < 1.0) s.add(density_cap(j) * BumpProfile::psi(t));
        }
        return s.value();
    }

    double u(const Vec& x) const {
        check_arg(static_cast<int>(x.size()) == n_, "point has the wrong dimension");
        if (n_ == 2)
            require(norm2(x) <= 2.0 + 1e-12,
                    "the planar construction lives on the disk of radius 2");
        KahanSum s;
        for (std::size_t j = 0; j < seed_.size(); ++j) {
            double tau = dist(x, seed_.points[j]) / seed_.radii[j];
            double eps = seed_.phi_values[j];
            if (n_ == 2)
                s.add(eps * (I_ * log1r_[j] + bump_.kernel_mean(tau)));
            else
                s.add(eps * std::pow(seed_.radii[j], 2.0 - n_) * bump_.kernel_mean(tau));
        }
        return 1.0 + B_ * s.value();
    }

    // exact value of int f (each bump integrates to phi_j * I)
    double integral_f() const {
        KahanSum s;
        for (double e : seed_.phi_values) s.add(e);
        return I_ * s.value();
    }

private:
    SeedSequence seed_;
    int n_;
    BumpProfile bump_;
    double I_ = 0, J_ = 0, B_ = 0, A_ = 0;
    Vec log1r_;
};

template <class Phi>
SingularSolution lemma41_build(Phi&& phi, SeedSequence seed, int n) {
    seed.phi_values.clear();
    for (const Vec& p : seed.points) {
        double v = phi(norm2(p));
        require(v > 0.0 && v < 1.0, "phi must map (0,1) into (0,1)");
        seed.phi_values.push_back(v);
    }
    return SingularSolution(std::move(seed), n);
}

inline SingularSolution lemma41_build(SeedSequence seed, int n) {
    return SingularSolution(std::move(seed), n);
}

// ---------------------------------------------------------------- checks ----

struct Lemma41Report {
    bool density_cap_ok = false;   // 0 <= f <= phi_j/r_j^n on each ball, 0 elsewhere
    bool harmonic_ok = false;      // stencil Laplacian of u vanishes off the bumps
    bool lower_bound_ok = false;   // u >= A phi_j / r_j^{n-2} (log form for n = 2)
    bool floor_ok = false;         // u >= 1 at every probe
    bool integral_ok = false;      // quadrature of f matches I * sum phi_j over
                                   // the sampleable balls (vacuous if none are)
    double max_density_excess = -inf;    // max f/M_j - 1 over in-ball samples
    double max_offball_density = 0.0;
    double max_harmonic_residual = 0.0;  // worst |stencil Laplacian|
    double max_harmonic_allowance = 0.0; // the truncation bound it is held to
    double min_lower_margin = inf;       // min u / bound over in-ball samples
    double min_u = inf;
    double integral_rel_dev = inf;
    std::size_t harmonic_probes = 0;
    std::size_t skipped_balls = 0;   // radii below double-sampling resolution

    bool all_ok() const {
        return density_cap_ok && harmonic_ok && lower_bound_ok && floor_ok &&
               integral_ok;
    }
};

namespace detail {

// quasi-random point in the open ball (rejection from the cube)
inline Vec ball_point(const Vec& c, double r, int n, std::size_t& cursor) {
    for (;;) {
        Vec h = halton_point(cursor++, n);
        double s2 = 0.0;
        Vec y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            y[i] = 2.0 * h[i] - 1.0;
            s2 += y[i] * y[i];
        }
        if (s2 <= 0.998) {
            for (int i = 0; i < n; ++i) y[i] = c[i] + r * y[i];
            return y;
        }
    }
}

// an increment h survives the coordinate arithmetic around p only when it
// clears the rounding grain of the largest coordinate involved
inline bool fp_resolvable(const Vec& p, double h) {
    double coord = 0.0;
    for (double c : p) coord = std::max(coord, std::abs(c));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return h > 512.0 * eps * coord && h > 1e-290;
}

}  // namespace detail

inline Lemma41Report check_lemma41(const SingularSolution& sol,
                                   int samples_per_ball = 48) {
    check_arg(samples_per_ball >= 4, "need at least 4 samples per ball");
    const SeedSequence& seed = sol.seed();
    const int n = sol.dim();
    const std::size_t J = seed.size();
    Lemma41Report rep;
    std::size_t cursor = 1;

    // (1) density cap and (3)/(4) floor checks on in-ball samples
    rep.density_cap_ok = true;
    rep.lower_bound_ok = true;
    rep.floor_ok = true;
    KahanSum integral_est;
    KahanSum sampled_phi;
    for (std::size_t j = 0; j < J; ++j) {
        const double Mj = sol.density_cap(j);
        const double bound = sol.lower_bound(j);
        double uc = sol.u(seed.points[j]);
        rep.min_u = std::min(rep.min_u, uc);
        if (std::isfinite(bound))
            rep.min_lower_margin = std::min(rep.min_lower_margin, uc / bound);
        // a radius that rounds away against its own center coordinates cannot
        // be probed by samples; such balls are counted, not faked
        if (!std::isfinite(Mj) ||
            !detail::fp_resolvable(seed.points[j], seed.radii[j])) {
            ++rep.skipped_balls;
            continue;
        }
        double fc = sol.f(seed.points[j]);
        if (std::abs(fc - Mj) > 1e-12 * Mj) rep.density_cap_ok = false;
        KahanSum ball_mean;
        for (int s = 0; s < samples_per_ball; ++s) {
            Vec p = detail::ball_point(seed.points[j], seed.radii[j], n, cursor);
            double fv = sol.f(p);
            ball_mean.add(fv);
            rep.max_density_excess = std::max(rep.max_density_excess, fv / Mj - 1.0);
            if (fv < 0.0 || fv > Mj * (1.0 + 1e-12)) rep.density_cap_ok = false;
            double uv = sol.u(p);
            rep.min_u = std::min(rep.min_u, uv);
            rep.min_lower_margin = std::min(rep.min_lower_margin, uv / bound);
        }
        double vol = ball_volume(n) * std::pow(seed.radii[j], n);
        integral_est.add(ball_mean.value() / samples_per_ball * vol);
        sampled_phi.add(seed.phi_values[j]);
    }
    if (rep.min_lower_margin < 1.0) rep.lower_bound_ok = false;

    // (5) independent integral estimate against the exact I * sum phi_j,
    // restricted to the balls that could actually be sampled
    double exact = sol.bump_integral() * sampled_phi.value();
    if (exact > 0.0) {
        rep.integral_rel_dev = std::abs(integral_est.value() - exact) / exact;
        rep.integral_ok = rep.integral_rel_dev <= 0.25;
    } else {
        // nothing was sampleable; skipped_balls carries the caveat
        rep.integral_rel_dev = 0.0;
        rep.integral_ok = true;
    }

    // (2) harmonicity off the bumps: centered 2n+1 point stencil with an
    // explicit truncation allowance.  Off the supports each bump contributes
    // an exact power (or log) of the distance, whose fourth derivatives we
    // can bound, so the stencil residual must sit below
    //   n h^2/12 * sum_j K4 c_j (d_j - h)^{-(n+2)}        (power kernel)
    // plus a rounding term for the cancellation in the stencil itself.
    rep.harmonic_ok = true;
    std::vector<Vec> probes;
    for (std::size_t j = 0; j < J; ++j) {
        Vec gap(static_cast<std::size_t>(n), 0.0);
        gap[0] = 0.44 * norm2(seed.points[j]);
        probes.push_back(gap);
        Vec side = seed.points[j];
        side[1] += 2.5 * seed.radii[j];
        probes.push_back(side);
    }
    {
        Vec far(static_cast<std::size_t>(n), 0.0);
        far[0] = 0.75;
        probes.push_back(far);
    }
    const double m = n - 2.0;
    const double K4 = (n == 2) ? 18.0 : 4.5 * m * (m + 1.0) * (m + 2.0) * (m + 3.0);
    const double dpow = n + 2.0;  // decay of the 4th derivative: d^{-(m+4)}
    for (const Vec& p : probes) {
        double clearance = inf;
        for (std::size_t j = 0; j < J; ++j)
            clearance = std::min(clearance, dist(p, seed.points[j]) - seed.radii[j]);
        if (n == 2) clearance = std::min(clearance, 2.0 - norm2(p) - 1e-3);
        if (clearance <= 0.0) continue;
        double h = 0.25 * clearance;
        // a stencil step below the rounding grain of the probe coordinates
        // would difference identical doubles; such probes are not counted
        if (!detail::fp_resolvable(p, h)) continue;
        double uc = sol.u(p);
        double stencil = -2.0 * n * uc;
        for (int i = 0; i < n; ++i) {
            Vec q = p;
            q[i] += h;
            stencil += sol.u(q);
            q[i] = p[i] - h;
            stencil += sol.u(q);
        }
        double residual = std::abs(stencil) / (h * h);
        double allowance = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            double cj = sol.newton_constant() * seed.phi_values[j] * sol.bump_integral();
            double d = dist(p, seed.points[j]) - h;
            allowance += K4 * cj * std::pow(d, -dpow);
        }
        allowance *= n * h * h / 12.0;
        allowance += 1e-13 * (2.0 * n + 2.0) * std::max(1.0, std::abs(uc)) / (h * h);
        rep.max_harmonic_residual = std::max(rep.max_harmonic_residual, residual);
        rep.max_harmonic_allowance = std::max(rep.max_harmonic_allowance, allowance);
        if (residual > allowance) rep.harmonic_ok = false;
        double fv = sol.f(p);
        rep.max_offball_density = std::max(rep.max_offball_density, fv);
        if (fv != 0.0) rep.density_cap_ok = false;
        rep.min_u = std::min(rep.min_u, uc);
        ++rep.harmonic_probes;
    }

    if (rep.min_u < 1.0) rep.floor_ok = false;
    return rep;
}

// ------------------------------------------------------------- schedules ----

namespace detail {

// floor of log F(tau)/tau over [t, 64 t], probed on a 256-node log ladder.
// For growth laws that eventually dominate every exponential the minimum
// sits at the left end of the window once the law has taken over.
template <class F>
double growth_rate_floor(F&& growth, double t) {
    double best = inf;
    for (int k = 0; k < 256; ++k) {
        double tau = t * std::pow(64.0, k / 255.0);
        double v = growth(tau);
        require(v > 0.0, "growth function must be positive");
        best = std::min(best, std::log(v) / tau);
    }
    return best;
}

}  // namespace detail

// Radius schedule for the planar two-function construction.  F = min(f,g),
// M(t) = floor of log F(tau)/tau over tau >= t, K = onset of F > 1.  Each
// radius is shrunk (log(1/r) stepped by log 2) until
//   t_j := A phi_j log(1/r_j) >= K,
//   A phi_j M(t_j) > 2,
//   h(|x_j|)^2 < t_j.
// All three are monotone in log(1/r_j), so the first admissible radius is
// taken.  Radii that would leave double precision truncate the ladder; the
// kept prefix still satisfies every seed invariant.
template <class F, class G, class H>
SeedSequence schedule_thm22(F&& f_growth, G&& g_growth, H&& h, double ratio = 0.2,
                            double first_norm = 0.45, int count = 4,
                            double* onset_out = nullptr) {
    auto Fmin = [&](double t) { return std::min(f_growth(t), g_growth(t)); };

    double K = 1.0;
    while (!(Fmin(K) > 1.0) || !(detail::growth_rate_floor(Fmin, K) > 0.0)) {
        K *= 2.0;
        require(K < 1e9,
                "growth pair never exceeds 1 with a positive rate; the "
                "construction needs superexponential growth");
    }
    if (onset_out) *onset_out = K;

    SeedSequence seed;
    seed.dim = 2;
    std::vector<Vec> pts = make_xseq(ratio, first_norm, count, 2);
    const double A = BumpProfile(2).integral() / (2.0 * pi);
    const double ln2 = std::log(2.0);

    for (const Vec& p : pts) {
        double nj = norm2(p);
        double phi = nj;  // phi(r) = r in this schedule
        double log1r = std::log(2.0 / nj);
        bool admissible = false;
        while (log1r <= 690.0) {
            double t = A * phi * log1r;
            if (t >= K && A * phi * detail::growth_rate_floor(Fmin, t) > 2.0 &&
                sq(h(nj)) < t) {
                admissible = true;
                break;
            }
            log1r += ln2;
        }
        if (!admissible) break;  // radius left double precision: keep the prefix
        seed.points.push_back(p);
        seed.radii.push_back(std::exp(-log1r));
        seed.phi_values.push_back(phi);
    }
    require(!seed.points.empty(),
            "no admissible radius is representable; the growth floor is too "
            "small at the outermost center");
    seed.validate();
    return seed;
}

// Planar schedule pinning the blow-up rate to a prescribed profile:
// r_j = exp(-h(log(2/|x_j|)) / 2) with h nondecreasing and superlinear.
// Early centers where the rule gives r_j > |x_j|/2 are dropped; once the
// rule becomes admissible it must stay admissible.
template <class H, class Phi>
SeedSequence schedule_thm62(H&& h, Phi&& phi, double ratio = 0.2,
                            double first_norm = 0.2, int count = 8) {
    std::vector<Vec> pts = make_xseq(ratio, first_norm, count, 2);
    SeedSequence seed;
    seed.dim = 2;
    bool started = false;
    for (const Vec& p : pts) {
        double nj = norm2(p);
        double hv = h(std::log(2.0 / nj));
        require(hv > 0.0, "rate profile must be positive");
        double r = std::exp(-0.5 * hv);
        if (r == 0.0) break;  // beyond double precision: keep what we have
        if (r > 0.5 * nj) {
            require(!started,
                    "radius rule is not eventually admissible; the rate "
                    "profile must be superlinear");
            continue;
        }
        started = true;
        double pv = phi(nj);
        require(pv > 0.0 && pv < 1.0, "phi must map (0,1) into (0,1)");
        seed.points.push_back(p);
        seed.radii.push_back(r);
        seed.phi_values.push_back(pv);
    }
    require(started, "radius rule never becomes admissible; the rate profile "
                     "grows too slowly");
    seed.validate();
    return seed;
}

template <class H>
SeedSequence schedule_thm62(H&& h, double ratio = 0.2, double first_norm = 0.2,
                            int count = 8) {
    return schedule_thm62(std::forward<H>(h), [](double r) { return r; }, ratio,
                          first_norm, count);
}

// Power-law schedule: r_j = (2|x_j|)^{(n-2)lambda/n} with bump heights
// phi_j = sqrt(psi_target(|x_j|)).  Supercritical lambda makes the exponent
// exceed 1, so the rule is admissible from some index on; the inadmissible
// prefix is dropped.
template <class Psi>
SeedSequence schedule_thm33(double lambda, int n, Psi&& psi_target,
                            double ratio = 0.2, double first_norm = 0.2,
                            int count = 8) {
    require(n >= 3, "power-law schedule needs dimension at least 3");
    require(lambda > static_cast<double>(n) / (n - 2),
            "exponent must be supercritical: lambda > n/(n-2)");
    const double e = (n - 2.0) * lambda / n;
    std::vector<Vec> pts = make_xseq(ratio, first_norm, count, n);
    SeedSequence seed;
    seed.dim = n;
    bool started = false;
    for (const Vec& p : pts) {
        double nj = norm2(p);
        double r = std::pow(2.0 * nj, e);
        if (r > 0.5 * nj) {
            require(!started, "power-law radius rule lost admissibility");
            continue;
        }
        started = true;
        double psi = psi_target(nj);
        require(psi > 0.0 && psi < 1.0, "psi must map (0,1) into (0,1)");
        seed.points.push_back(p);
        seed.radii.push_back(r);
        seed.phi_values.push_back(std::sqrt(psi));
    }
    require(started, "power-law radius rule never becomes admissible at this "
                     "depth; add more centers");
    seed.validate();
    return seed;
}

inline SeedSequence schedule_thm33(double lambda, int n, double ratio = 0.2,
                                   double first_norm = 0.2, int count = 8) {
    return schedule_thm33(lambda, n, [](double r) { return r; }, ratio,
                          first_norm, count);
}

// Paired schedule for the two-component construction.  The u-ladder uses
// phi_j = |x_j|; the v-ladder height psi_j is slaved to the radius through
//   r_j = ((A psi_j)^lambda / phi_j)^{alpha},  alpha = 1/((n-2)lambda - n),
// and the radius is halved until the coupled floor conditions hold:
//   A phi_j / r_j^{n-2} > h(|x_j|)^2,
//   A psi_j / r_j^{n-2} > h(|x_j|)^2,
//   psi_j^{alpha lambda - beta} >= phi_j^{alpha - sigma beta} / A^{sigma beta + alpha lambda},
// with beta = 1/(n - (n-2)sigma).  The window beta > alpha lambda > 0 is
// exactly the supercritical strip this schedule is designed for.
struct Thm34Seeds {
    SeedSequence u_seed;
    SeedSequence v_seed;
    double alpha_exp = 0;
    double beta_exp = 0;
    double lower_constant = 0;
};

template <class H>
Thm34Seeds schedule_thm34(double lambda, double sigma, int n, H&& h,
                          double ratio = 0.2, double first_norm = 0.2,
                          int count = 6) {
    require(n >= 3, "paired schedule needs dimension at least 3");
    require(lambda > static_cast<double>(n) / (n - 2),
            "lambda must be supercritical: lambda > n/(n-2)");
    require(sigma < static_cast<double>(n) / (n - 2),
            "sigma must stay below n/(n-2)");
    require(sigma <= lambda, "need sigma <= lambda");
    const double crit = 2.0 / (n - 2.0) + n / ((n - 2.0) * lambda);
    require(sigma > crit,
            "sigma must exceed the critical exponent 2/(n-2) + n/((n-2)lambda)");
    const double alpha = 1.0 / ((n - 2.0) * lambda - n);
    const double beta = 1.0 / (n - (n - 2.0) * sigma);
    require(beta > alpha * lambda && alpha > 0.0,
            "exponent window violated: need beta > alpha*lambda > 0");

    BumpProfile bump(n);
    const double A = omega_weight(n) * bump.ladder_min_kernel_mean();
    std::vector<Vec> pts = make_xseq(ratio, first_norm, count, n);

    Thm34Seeds out;
    out.u_seed.dim = out.v_seed.dim = n;
    out.alpha_exp = alpha;
    out.beta_exp = beta;
    out.lower_constant = A;

    // The floor conditions drive the radii far below the scales where direct
    // powers of r survive in double precision, so all four are evaluated in
    // log space.  Once the slaved height itself rounds to zero the remaining
    // (deeper) centers are unrepresentable and the sequence is truncated.
    const double lA = std::log(A);
    double prev_psi = inf;
    for (const Vec& p : pts) {
        double nj = norm2(p);
        double phi = nj;
        double hv2 = sq(h(nj));
        require(hv2 > 0.0 && std::isfinite(hv2), "rate profile must be positive");
        const double lphi = std::log(phi);
        const double lh2 = std::log(hv2);
        double lr = std::log(0.5 * nj);
        double psi = 0.0;
        bool ok = false;
        for (int iter = 0; iter < 3000; ++iter) {
            double lpsi = (lphi + lr / alpha) / lambda - lA;
            psi = std::exp(lpsi);
            bool c1 = lA + lphi + (2.0 - n) * lr > lh2;
            bool c2 = lA + lpsi + (2.0 - n) * lr > lh2;
            bool c3 = (alpha * lambda - beta) * lpsi >=
                      (alpha - sigma * beta) * lphi -
                          (sigma * beta + alpha * lambda) * lA;
            bool c4 = psi < 1.0 && psi <= SeedSequence::height_ratio_max * prev_psi;
            if (c1 && c2 && c3 && c4) {
                ok = true;
                break;
            }
            lr -= std::log(2.0);
            if (lr < -690.0) break;
        }
        if (!ok || psi <= 0.0 || std::exp(lr) <= 0.0) break;
        double r = std::exp(lr);

        // radius identity: phi_j / r_j^n == (A psi_j / r_j^{n-2})^lambda,
        // checked on logarithms where it is representable
        double lhs = lphi - n * lr;
        double rhs = lambda * (lA + std::log(psi) + (2.0 - n) * lr);
        require(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)),
                "radius identity violated (internal inconsistency)");
        // derived cap comparison for the v-ladder
        require(std::log(psi) - n * lr <=
                    sigma * (lA + lphi + (2.0 - n) * lr) + 1e-10,
                "v-ladder cap comparison violated (internal inconsistency)");

        out.u_seed.points.push_back(p);
        out.u_seed.radii.push_back(r);
        out.u_seed.phi_values.push_back(phi);
        out.v_seed.points.push_back(p);
        out.v_seed.radii.push_back(r);
        out.v_seed.phi_values.push_back(psi);
        prev_psi = psi;
    }
    require(!out.u_seed.points.empty(),
            "paired schedule could not satisfy the floor conditions within "
            "double precision");
    out.u_seed.validate();
    out.v_seed.validate();
    return out;
}

// ---------------------------------------------------------- blow-up rate ----

enum class BlowupVerdict { Diverges, Bounded, Inconclusive };

inline const char* blowup_verdict_name(BlowupVerdict v) {
    switch (v) {
        case BlowupVerdict::Diverges: return "Diverges";
        case BlowupVerdict::Bounded: return "Bounded";
        default: return "Inconclusive";
    }
}

struct BlowupReport {
    Vec center_norms;
    Vec radii;
    Vec u_values;
    Vec ratios;  // u(x_j) / h(|x_j|)
    double growth = 0.0;  // last ratio / first ratio
    BlowupVerdict verdict = BlowupVerdict::Inconclusive;
};

// Compares u along the ladder centers against a target rate h.  The ratios
// must rise monotonically over the trailing half of the ladder and gain at
// least `factor` overall to count as divergence to +infinity.
template <class H>
BlowupReport measure_blowup(const SingularSolution& sol, H&& h,
                            double factor = 4.0) {
    check_arg(factor > 1.0, "divergence factor must exceed 1");
    const SeedSequence& seed = sol.seed();
    BlowupReport rep;
    for (std::size_t j = 0; j < seed.size(); ++j) {
        double nj = norm2(seed.points[j]);
        double hv = h(nj);
        require(hv > 0.0, "target rate must be positive at the centers");
        double uv = sol.u(seed.points[j]);
        rep.center_norms.push_back(nj);
        rep.radii.push_back(seed.radii[j]);
        rep.u_values.push_back(uv);
        rep.ratios.push_back(uv / hv);
    }
    const std::size_t m = rep.ratios.size();
    if (m < 2) return rep;
    rep.growth = rep.ratios.back() / rep.ratios.front();
    std::size_t tail = std::max<std::size_t>(2, m / 2);
    bool rising = true;
    for (std::size_t j = m - tail; j + 1 < m; ++j)
        if (!(rep.ratios[j + 1] > rep.ratios[j])) rising = false;
    if (rising && rep.growth >= factor)
        rep.verdict = BlowupVerdict::Diverges;
    else if (rep.growth <= 1.0)
        rep.verdict = BlowupVerdict::Bounded;
    return rep;
}

}  // namespace nlpot
