#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "constructor.hpp"
#include "core.hpp"
#include "estimates.hpp"
#include "measure.hpp"
#include "potentials.hpp"

// Representation of a nonnegative superharmonic function near an isolated
// singularity: u = m Gamma + omega Gamma * mu + h, with a point mass m at the
// origin, a finite measure mu, and a harmonic remainder h.  This module
// composes such representations, recovers m from an evaluator, and renders
// harmonic-boundedness verdicts.

namespace nlpot {

// ---------------------------------------------------------- decomposition ----

struct Decomposition {
    double m = 0.0;                                 // point mass at the origin
    std::optional<Measure> mu;                      // absent means zero measure
    std::function<double(const Vec&)> harmonic_part;  // absent means zero
    double epsilon = 1.0;                           // radius of validity

    void validate(int n) const {
        require_dim(n);
        require(m >= 0.0, "point mass must be nonnegative");
        require(epsilon > 0.0, "representation radius must be positive");
        if (mu) {
            require(mu->dim() == n, "measure dimension mismatch");
            Vec lo, hi;
            mu->support_bounds(lo, hi);
            double corner = 0.0;
            for (std::size_t i = 0; i < lo.size(); ++i)
                corner += sq(std::max(std::abs(lo[i]), std::abs(hi[i])));
            // conservative: the support bounding box must fit in the ball
            require(std::sqrt(corner) <= epsilon * (1.0 + 1e-9),
                    "measure support must lie inside the representation ball");
        }
    }
};

namespace detail {

// planar fundamental kernel log(2/r) with its exact ball integral
struct LogKernel2 {
    double operator()(double r) const { return std::log(2.0 / r); }
    double ball_integral(double rho) const {
        return pi * rho * rho * (std::log(2.0 / rho) + 0.5);
    }
};

}  // namespace detail

inline double compose_brezis_lions(const Decomposition& dec, const Vec& x) {
    const int n = static_cast<int>(x.size());
    dec.validate(n);
    double r = norm2(x);
    require(r > 0.0, "representation is undefined at the origin");
    require(r < dec.epsilon, "probe must lie inside the representation ball");
    double val = dec.m * gamma_kernel(r, n);
    if (dec.mu) {
        double pot = (n == 2)
                         ? detail::kernel_sum(*dec.mu, x, detail::LogKernel2{}).value
                         : detail::kernel_sum(*dec.mu, x,
                                              detail::PowerKernel{2.0, n}).value;
        val += omega_weight(n) * pot;
    }
    if (dec.harmonic_part) val += dec.harmonic_part(x);
    return val;
}

// ----------------------------------------------------- point-mass recovery ----

inline Vec default_mass_ladder() {
    Vec v;
    for (int k = 0; k < 16; ++k) v.push_back(std::pow(10.0, -1.0 - 3.0 * k / 15.0));
    return v;
}

struct MassEstimate {
    double m = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    double drift = inf;  // relative change across the last two rungs
    Vec radii;
    Vec ratios;
};

// Fits the limit of u(x)/Gamma(|x|) along a shrinking radius ladder.  For a
// genuine representation the potential and harmonic parts are o(Gamma), so
// the ratio settles at m; a ladder that keeps drifting (or contracts too
// slowly) yields Inconclusive instead of a number pretending to converge.
template <class U>
MassEstimate estimate_point_mass(U&& u, int n, Vec ladder = default_mass_ladder(),
                                 Vec direction = Vec{}) {
    require_dim(n);
    check_arg(ladder.size() >= 3, "mass ladder needs at least 3 rungs");
    if (direction.empty()) {
        direction.assign(static_cast<std::size_t>(n), 0.0);
        direction[0] = 1.0;
    }
    check_arg(static_cast<int>(direction.size()) == n, "direction dimension mismatch");
    double dn = norm2(direction);
    check_arg(dn > 0.0, "direction must be nonzero");

    MassEstimate est;
    std::sort(ladder.begin(), ladder.end(), std::greater<double>());
    for (double r : ladder) {
        require(r > 0.0, "ladder radii must be positive");
        Vec x(direction);
        for (double& c : x) c *= r / dn;
        est.radii.push_back(r);
        est.ratios.push_back(u(x) / gamma_kernel(r, n));
    }
    const std::size_t k = est.ratios.size();
    double a = est.ratios[k - 3], b = est.ratios[k - 2], c = est.ratios[k - 1];
    est.m = c;
    est.drift = std::abs(c - b) / std::max(1.0, std::abs(c));
    bool settled = est.drift <= 0.005 ||
                   (std::abs(c - b) <= 0.85 * std::abs(b - a) && est.drift <= 0.05);
    est.verdict = settled ? Verdict::Consistent : Verdict::Inconclusive;
    return est;
}

// -------------------------------------------------- superharmonic stencil ----

struct SuperharmonicReport {
    Verdict verdict = Verdict::Consistent;
    double max_laplacian = -inf;    // most positive discrete Laplacian seen
    double allowance_at_max = 0.0;  // the tolerance it was held against
    std::size_t samples = 0;
};

// Discrete check of -Delta u >= 0.  The tolerance is self-calibrated: the
// fourth difference along each axis estimates the stencil's own truncation
// error (h^2/12 sum of fourth derivatives), so smooth curvature is excused
// while a genuine sign violation (e.g. u = |x|^2, where the fourth
// differences vanish exactly) is flagged.
template <class U>
SuperharmonicReport superharmonic_check(U&& u, const std::vector<Vec>& samples,
                                        double h, int n) {
    require_dim(n);
    check_arg(h > 0.0, "stencil width must be positive");
    check_arg(!samples.empty(), "need at least one sample");
    SuperharmonicReport rep;
    for (const Vec& x : samples) {
        check_arg(static_cast<int>(x.size()) == n, "sample dimension mismatch");
        require(norm2(x) > 2.0 * h,
                "sample too close to the origin for the stencil");
        double uc = u(x);
        double umax = std::abs(uc);
        KahanSum num;
        num.add(-2.0 * n * uc);
        double d4sum = 0.0;
        for (int i = 0; i < n; ++i) {
            Vec q = x;
            q[i] = x[i] + h;
            double up1 = u(q);
            q[i] = x[i] - h;
            double um1 = u(q);
            q[i] = x[i] + 2.0 * h;
            double up2 = u(q);
            q[i] = x[i] - 2.0 * h;
            double um2 = u(q);
            num.add(up1);
            num.add(um1);
            d4sum += std::abs(up2 - 4.0 * up1 + 6.0 * uc - 4.0 * um1 + um2);
            umax = std::max({umax, std::abs(up1), std::abs(um1), std::abs(up2),
                             std::abs(um2)});
        }
        double lap = num.value() / (h * h);
        double allowance = 3.0 * d4sum / (12.0 * h * h) +
                           64.0 * 1e-16 * (2.0 * n + 2.0) * std::max(1.0, umax) /
                               (h * h);
        if (lap > rep.max_laplacian) {
            rep.max_laplacian = lap;
            rep.allowance_at_max = allowance;
        }
        if (lap > allowance) rep.verdict = Verdict::Violated;
        ++rep.samples;
    }
    return rep;
}

// ------------------------------------------------ harmonic-bound verdicts ----

struct HarmonicBoundReport {
    BlowupVerdict verdict = BlowupVerdict::Inconclusive;
    double sup_ratio = 0.0;
    Vec radii;
    Vec ratios;  // u / Gamma down the ladder
};

// sup of u/Gamma along a shrinking ladder with the monotone-trend rule: the
// ratio must rise over the trailing half and gain the divergence factor to
// count as harmonically unbounded.
template <class U>
HarmonicBoundReport harmonic_bound_verdict(U&& u, int n,
                                           Vec ladder = default_mass_ladder(),
                                           Vec direction = Vec{},
                                           double factor = 4.0) {
    require_dim(n);
    check_arg(ladder.size() >= 2, "ladder needs at least 2 rungs");
    check_arg(factor > 1.0, "divergence factor must exceed 1");
    if (direction.empty()) {
        direction.assign(static_cast<std::size_t>(n), 0.0);
        direction[0] = 1.0;
    }
    double dn = norm2(direction);
    check_arg(dn > 0.0, "direction must be nonzero");

    HarmonicBoundReport rep;
    std::sort(ladder.begin(), ladder.end(), std::greater<double>());
    for (double r : ladder) {
        require(r > 0.0, "ladder radii must be positive");
        Vec x(direction);
        for (double& c : x) c *= r / dn;
        double ratio = u(x) / gamma_kernel(r, n);
        rep.radii.push_back(r);
        rep.ratios.push_back(ratio);
        rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    }
    const std::size_t m = rep.ratios.size();
    double growth = rep.ratios.back() / rep.ratios.front();
    std::size_t tail = std::max<std::size_t>(2, m / 2);
    bool rising = true;
    for (std::size_t j = m - tail; j + 1 < m; ++j)
        if (!(rep.ratios[j + 1] > rep.ratios[j])) rising = false;
    if (rising && growth >= factor)
        rep.verdict = BlowupVerdict::Diverges;
    else if (growth <= 1.0)
        rep.verdict = BlowupVerdict::Bounded;
    return rep;
}

}  // namespace nlpot
