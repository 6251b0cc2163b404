#pragma once

#include <map>
#include <sstream>
#include <string>

#include "core.hpp"
#include "measure.hpp"
#include "potentials.hpp"

namespace nlpot {

enum class EstimateId {
    Thm41_ub1,
    Thm41_ub2,
    Cor41_super,
    Cor41_crit,
    Thm42_lower,
    Thm42_upper,
    Thm42_phi,
    Thm43_a,
    Thm43_b,
    Thm44_est1,
    Thm44_est2,
    Thm44_est3,
    Thm44_est4,
    Lemma42,
};

inline const char* estimate_name(EstimateId id) {
    switch (id) {
        case EstimateId::Thm41_ub1: return "Thm41_ub1";
        case EstimateId::Thm41_ub2: return "Thm41_ub2";
        case EstimateId::Cor41_super: return "Cor41_super";
        case EstimateId::Cor41_crit: return "Cor41_crit";
        case EstimateId::Thm42_lower: return "Thm42_lower";
        case EstimateId::Thm42_upper: return "Thm42_upper";
        case EstimateId::Thm42_phi: return "Thm42_phi";
        case EstimateId::Thm43_a: return "Thm43_a";
        case EstimateId::Thm43_b: return "Thm43_b";
        case EstimateId::Thm44_est1: return "Thm44_est1";
        case EstimateId::Thm44_est2: return "Thm44_est2";
        case EstimateId::Thm44_est3: return "Thm44_est3";
        case EstimateId::Thm44_est4: return "Thm44_est4";
        case EstimateId::Lemma42: return "Lemma42";
    }
    return "?";
}

inline EstimateId estimate_from_name(const std::string& s) {
    for (EstimateId id : {EstimateId::Thm41_ub1, EstimateId::Thm41_ub2, EstimateId::Cor41_super,
                          EstimateId::Cor41_crit, EstimateId::Thm42_lower, EstimateId::Thm42_upper,
                          EstimateId::Thm42_phi, EstimateId::Thm43_a, EstimateId::Thm43_b,
                          EstimateId::Thm44_est1, EstimateId::Thm44_est2, EstimateId::Thm44_est3,
                          EstimateId::Thm44_est4, EstimateId::Lemma42})
        if (s == estimate_name(id)) return id;
    check_arg(false, "unknown estimate id: " + s);
    return EstimateId::Lemma42;
}

enum class Verdict { Consistent, Violated, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "Consistent";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct SampleRow {
    std::string input;
    double lhs = 0.0, rhs = 0.0;
    double lhs_err = 0.0, rhs_err = 0.0;
};

// One inequality, many samples.  fitted_C is the max observed lhs/rhs; the
// verdict is Violated only when a sample has positive lhs against a genuinely
// zero rhs (beyond the error estimate), since the constants in the
// inequalities are unspecified and fitted a posteriori.
struct EstimateReport {
    EstimateId id = EstimateId::Lemma42;
    std::vector<SampleRow> samples;
    double max_ratio = 0.0;
    double min_ratio = inf;
    double fitted_C = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;
    std::map<std::string, double> params;
};

namespace detail {

inline std::string vec_str(const Vec& x) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

inline void finalize_report(EstimateReport& rep) {
    bool any = false, violated = false;
    for (const SampleRow& s : rep.samples) {
        if (!std::isfinite(s.lhs)) {
            violated = true;
            continue;
        }
        if (std::isinf(s.rhs)) {
            any = true;
            rep.min_ratio = std::min(rep.min_ratio, 0.0);
            continue;
        }
        if (!(s.rhs > 0.0)) {
            if (s.lhs > s.lhs_err) violated = true;
            continue;
        }
        any = true;
        double ratio = s.lhs / s.rhs;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
    }
    rep.fitted_C = rep.max_ratio;
    rep.verdict = violated ? Verdict::Violated
                           : (any ? Verdict::Consistent : Verdict::Inconclusive);
}

// quasi-random probes over the support region, plus near-singular points at
// distance 1e-3 from atoms and from the heaviest grid cells
inline std::vector<Vec> default_probes(const Measure& mu, int count, unsigned skip = 0) {
    int n = mu.dim();
    Vec lo, hi;
    mu.support_bounds(lo, hi);
    Vec c(n);
    double half = 0.0;
    for (int d = 0; d < n; ++d) {
        c[d] = 0.5 * (lo[d] + hi[d]);
        half = std::max(half, 0.5 * (hi[d] - lo[d]));
    }
    half = std::max(half, 1e-6) * 1.5;
    std::vector<Vec> probes;
    for (int i = 0; i < count; ++i) {
        Vec h = halton_point(i + skip + 1, n);
        Vec x(n);
        for (int d = 0; d < n; ++d) x[d] = c[d] + (2.0 * h[d] - 1.0) * half;
        probes.push_back(std::move(x));
    }
    switch (mu.kind()) {
        case MeasureKind::Atomic: {
            int added = 0;
            for (std::size_t i = 0; i < mu.points().size() && added < 12; ++i) {
                if (mu.masses()[i] <= 0.0) continue;
                Vec x = mu.points()[i];
                x[0] += 1e-3;
                probes.push_back(std::move(x));
                ++added;
            }
            break;
        }
        case MeasureKind::Grid: {
            std::vector<std::pair<double, std::size_t>> top;
            for (std::size_t i = 0; i < mu.cell_count(); ++i)
                if (mu.value_at(i) > 0.0) top.emplace_back(mu.value_at(i), i);
            std::sort(top.rbegin(), top.rend());
            for (std::size_t k = 0; k < top.size() && k < 3; ++k) {
                Vec x = mu.cell_center(top[k].second);
                probes.push_back(x);
                x[0] += 1e-3;
                probes.push_back(std::move(x));
            }
            break;
        }
        case MeasureKind::Radial: {
            if (!(mu.knots().front() == 0.0 && mu.cumulative().front() > 0.0))
                probes.push_back(Vec(n, 0.0));
            for (std::size_t k = 0; k < mu.knots().size() && k < 4; ++k) {
                Vec x(n, 0.0);
                x[0] = mu.knots()[k] + 1e-3;
                probes.push_back(std::move(x));
            }
            break;
        }
    }
    return probes;
}

// zero the cells of a grid density outside the ball inscribed in its box
inline Measure mask_to_inscribed_ball(const Measure& f) {
    Measure g = f;
    int n = f.dim();
    Vec cB(n);
    for (int d = 0; d < n; ++d) cB[d] = f.box_min()[d] + 0.5 * f.box_side();
    double RB = 0.5 * f.box_side();
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (dist(g.cell_center(c), cB) >= RB) g.set_value(c, 0.0);
    return g;
}

// int_0^inf (phi(r)/r^{n-alpha p})^{1/(p-1)} e^{-cr} dr/r with the
// ball-mass majorant phi(r) = sup_x mu(B_r(x)) realized over a finite
// candidate family (atoms, midpoints, heaviest cells, shell offsets); for
// atomic measures the integral diverges at small r and +inf is returned
inline PotentialValue phi_majorant_integral(const Measure& mu, double alpha, double p,
                                            double c, const PotentialSpec& spec) {
    int n = mu.dim();
    double q = 1.0 / (p - 1.0);
    double s = (alpha * p - n) * q;
    if (mu.total_mass() == 0.0) return {0.0, 0.0};
    std::vector<Vec> cands;
    switch (mu.kind()) {
        case MeasureKind::Atomic: {
            return {inf, 0.0}; // phi(0+) >= max atom mass, integrand ~ r^{s-1}
        }
        case MeasureKind::Grid: {
            std::vector<std::pair<double, std::size_t>> top;
            for (std::size_t i = 0; i < mu.cell_count(); ++i)
                if (mu.value_at(i) > 0.0) top.emplace_back(mu.value_at(i), i);
            std::sort(top.rbegin(), top.rend());
            for (std::size_t k = 0; k < top.size() && k < 8; ++k)
                cands.push_back(mu.cell_center(top[k].second));
            Vec cB(n);
            for (int d = 0; d < n; ++d) cB[d] = mu.box_min()[d] + 0.5 * mu.box_side();
            cands.push_back(std::move(cB));
            break;
        }
        case MeasureKind::Radial: {
            if (mu.knots().front() == 0.0 && mu.cumulative().front() > 0.0)
                return {inf, 0.0};
            cands.push_back(Vec(n, 0.0));
            break;
        }
    }
    std::vector<BallProfile> profs;
    for (const Vec& y : cands) profs.emplace_back(mu, y, true);
    double scale = 0.0, nearest = inf, rho = 0.0, dens = 0.0;
    for (const BallProfile& pr : profs) {
        scale = std::max(scale, pr.support_radius());
        if (pr.spread_mass() > 0.0) {
            rho = std::max(rho, pr.spread_radius());
            dens = std::max(dens, pr.spread_mass() / std::pow(pr.spread_radius(), n));
        }
        if (pr.nearest_mass_distance() > 0.0)
            nearest = std::min(nearest, pr.nearest_mass_distance());
    }
    double r_lo = 1e-6 * scale;
    if (rho > 0.0) r_lo = std::min(r_lo, 0.999 * rho);
    double head = 0.0, head_err = 0.0;
    if (dens > 0.0) {
        double e = alpha * p * q; // n q + s
        head = std::pow(dens, q) * std::pow(r_lo, e) / e;
        head_err = head * c * r_lo;
    }
    double total = mu.total_mass();
    double r_cut = std::max(scale * (1.0 + 1e-12), (80.0 + 5.0 * std::abs(s - 1.0)) / c);
    auto edges = log_edges(r_lo, r_cut, spec.quad_rings);
    auto phi_lo = [&](double r) {
        double m = 0.0;
        for (const BallProfile& pr : profs) m = std::max(m, pr.mass(r).lo);
        return m;
    };
    auto phi_hi = [&](double r) {
        double m = 0.0;
        for (const BallProfile& pr : profs) m = std::max(m, pr.mass(r).hi);
        return m;
    };
    KahanSum L, U;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double w = exp_power_ring_weight(s, c, edges[i], edges[i + 1]);
        L.add(std::pow(phi_lo(edges[i]), q) * w);
        U.add(std::pow(phi_hi(edges[i + 1]), q) * w);
    }
    double tail_err = std::pow(total, q) * std::pow(r_cut, s - 1.0) * std::exp(-c * r_cut) * 2.0 / c;
    return {0.5 * (L.value() + U.value()) + head,
            0.5 * (U.value() - L.value()) + head_err + tail_err};
}

} // namespace detail

// ---------------------------------------------------------------------------
// sup-norm bound for the composite Newtonian potential on the unit-scale ball:
//   ||N((Nf)^sigma)||_inf <= C ||f||_s^{2s(sigma+1)/n} ||f||_inf^{((n-2s)sigma-2s)/n}
// away from the critical exponent, log form at s = n sigma / (2(sigma+1))
inline EstimateReport verify_thm41(const Measure& f, double sigma, double s,
                                   const PotentialSpec& spec = {}, int probe_count = 8) {
    check_arg(f.kind() == MeasureKind::Grid, "verify_thm41 needs a grid density");
    int n = f.dim();
    check_arg(n == 3, "composite newtonian requires dimension 3 grids");
    double s_crit = n * sigma / (2.0 * (sigma + 1.0));
    bool crit = std::abs(s - s_crit) <= 1e-9 * std::max(1.0, s_crit);
    if (crit) {
        check_arg(sigma >= 2.0 / (n - 2.0) - 1e-12,
                  "critical branch requires sigma >= 2/(n-2)");
    } else {
        check_arg(sigma > 2.0 / (n - 2.0),
                  "noncritical branch requires sigma > 2/(n-2)");
        check_arg(s > 0.0 && s < s_crit,
                  "noncritical branch requires 0 < s < n*sigma/(2(sigma+1))");
    }
    EstimateReport rep;
    rep.id = crit ? EstimateId::Thm41_ub2 : EstimateId::Thm41_ub1;
    rep.params["sigma"] = sigma;
    rep.params["s"] = s;
    rep.params["degree"] = sigma; // common homogeneity degree of both sides
    Measure fB = detail::mask_to_inscribed_ball(f);
    double Ls = lp_norm(fB, s);
    double Linf = sup_norm(fB);
    if (Linf == 0.0) {
        rep.samples.push_back({"zero density", 0.0, 0.0, 0.0, 0.0});
        rep.notes.push_back("density vanishes on the ball; nothing to compare");
        detail::finalize_report(rep);
        return rep;
    }
    double rhs, rhs_err = 0.0;
    if (crit) {
        double RB = 0.5 * f.box_side();
        double volB = ball_volume(n) * std::pow(RB, n);
        // inner constant e * |B|^{1/s} keeps the log argument >= e
        rhs = std::pow(Ls, sigma)
              * std::log(std::exp(1.0) * std::pow(volB, 1.0 / s) * Linf / Ls);
    } else {
        double e1 = 2.0 * s * (sigma + 1.0) / n;
        double e2 = ((n - 2.0 * s) * sigma - 2.0 * s) / n;
        rhs = std::pow(Ls, e1) * std::pow(Linf, e2);
    }
    Vec xm;
    auto sup = composite_NN_sup(fB, sigma, spec, &xm);
    rep.samples.push_back({"sup over cell centers at " + detail::vec_str(xm),
                           sup.value, rhs, sup.error, rhs_err});
    Vec cB(n);
    for (int d = 0; d < n; ++d) cB[d] = f.box_min()[d] + 0.5 * f.box_side();
    double RB = 0.5 * f.box_side();
    for (int i = 0; i < probe_count; ++i) {
        Vec h = halton_point(i + 1, n);
        Vec x(n);
        for (int d = 0; d < n; ++d) x[d] = cB[d] + (2.0 * h[d] - 1.0) * RB / std::sqrt(3.0);
        auto pv = composite_NN(fB, sigma, x, spec);
        rep.samples.push_back({"probe " + detail::vec_str(x), pv.value, rhs, pv.error, rhs_err});
    }
    rep.notes.push_back("sup norms realized over cell centers plus quasi-random probes "
                        "(lower bound of the true sup)");
    detail::finalize_report(rep);
    return rep;
}

// same bound on a general ball, computed in normalized coordinates via
// f(x) = g(x0 + R x); the normalized report is exactly invariant under
// translation of the ball, and the ratio is invariant under dilation
inline EstimateReport verify_cor41(const Measure& g, double sigma,
                                   const PotentialSpec& spec = {}, int probe_count = 8) {
    check_arg(g.kind() == MeasureKind::Grid, "verify_cor41 needs a grid density");
    int n = g.dim();
    check_arg(n == 3, "composite newtonian requires dimension 3 grids");
    double crit_sigma = 2.0 / (n - 2.0);
    bool crit = std::abs(sigma - crit_sigma) <= 1e-12 * std::max(1.0, crit_sigma);
    check_arg(crit || sigma > crit_sigma, "cor41 requires sigma >= 2/(n-2)");
    // renormalize: same cell values on the unit-scale box [-1,1]^n
    Measure f = Measure::grid(n, Vec(n, -1.0), 2.0, g.cells_per_axis(), g.values());
    EstimateReport rep;
    rep.id = crit ? EstimateId::Cor41_crit : EstimateId::Cor41_super;
    rep.params["sigma"] = sigma;
    Measure fB = detail::mask_to_inscribed_ball(f);
    double L1 = lp_norm(fB, 1.0);
    double Linf = sup_norm(fB);
    if (Linf == 0.0) {
        rep.samples.push_back({"zero density", 0.0, 0.0, 0.0, 0.0});
        rep.notes.push_back("density vanishes on the ball; nothing to compare");
        detail::finalize_report(rep);
        return rep;
    }
    double rhs;
    if (crit) {
        double volB = ball_volume(n); // unit ball in normalized coordinates
        rhs = std::pow(L1, sigma) * std::log(std::exp(1.0) * volB * Linf / L1);
    } else {
        double e1 = (2.0 * sigma + 2.0) / n;
        double e2 = ((n - 2.0) * sigma - 2.0) / n;
        rhs = std::pow(L1, e1) * std::pow(Linf, e2);
    }
    Vec xm;
    auto sup = composite_NN_sup(fB, sigma, spec, &xm);
    rep.samples.push_back({"sup over cell centers at " + detail::vec_str(xm),
                           sup.value, rhs, sup.error, 0.0});
    for (int i = 0; i < probe_count; ++i) {
        Vec h = halton_point(i + 1, n);
        Vec x(n);
        for (int d = 0; d < n; ++d) x[d] = (2.0 * h[d] - 1.0) / std::sqrt(3.0);
        auto pv = composite_NN(fB, sigma, x, spec);
        rep.samples.push_back({"probe " + detail::vec_str(x), pv.value, rhs, pv.error, 0.0});
    }
    rep.notes.push_back("computed in normalized ball coordinates; translation of the ball "
                        "leaves the report unchanged and dilation leaves the ratio unchanged");
    detail::finalize_report(rep);
    return rep;
}

// two-sided comparison of the composed Bessel potential against the damped
// radial potential, branch chosen by the caller
inline EstimateReport verify_thm42(const Measure& mu, double alpha, double p, double c,
                                   EstimateId id, const PotentialSpec& spec = {},
                                   int probe_count = 16) {
    int n = mu.dim();
    check_arg(p > 1.0, "thm42 requires p > 1");
    check_arg(c > 0.0, "thm42 comparisons need c > 0");
    check_arg(alpha > 0.0, "thm42 requires alpha > 0");
    double p_split = 2.0 - alpha / n;
    EstimateReport rep;
    rep.id = id;
    rep.params["alpha"] = alpha;
    rep.params["p"] = p;
    rep.params["c"] = c;
    PotentialSpec sp = spec;
    sp.alpha = alpha;
    sp.p = p;
    sp.c = c;
    if (mu.total_mass() == 0.0) {
        rep.samples.push_back({"zero measure", 0.0, 0.0, 0.0, 0.0});
        rep.notes.push_back("zero measure: all potentials vanish");
        detail::finalize_report(rep);
        return rep;
    }
    switch (id) {
        case EstimateId::Thm42_lower:
            check_arg(alpha * p <= n + 1e-12, "lower comparison requires alpha <= n/p");
            break;
        case EstimateId::Thm42_upper:
            check_arg(alpha * p <= n + 1e-12, "upper comparison requires alpha <= n/p");
            check_arg(p > p_split, "upper comparison requires p > 2 - alpha/n");
            break;
        case EstimateId::Thm42_phi:
            check_arg(alpha * p < n, "phi comparison requires alpha < n/p");
            check_arg(p <= p_split + 1e-12, "phi comparison requires p <= 2 - alpha/n");
            break;
        default:
            check_arg(false, "verify_thm42 handles Thm42_lower/upper/phi only");
    }
    PotentialValue phi_int{0.0, 0.0};
    if (id == EstimateId::Thm42_phi) {
        phi_int = detail::phi_majorant_integral(mu, alpha, p, c, sp);
        if (std::isinf(phi_int.value))
            rep.notes.push_back("phi majorant integral diverges at small radii for atomic "
                                "measures; bound trivially consistent");
        else
            rep.notes.push_back("phi majorant realized over a finite candidate family "
                                "(lower bound of the true sup)");
    }
    auto probes = detail::default_probes(mu, probe_count);
    for (const Vec& x : probes) {
        try {
            double V = v_potential(mu, alpha, p, x, sp).value;
            double Verr = 0.0;
            switch (id) {
                case EstimateId::Thm42_lower: {
                    auto W = wolff(mu, alpha, p, c, x, sp);
                    rep.samples.push_back({"x=" + detail::vec_str(x), W.value, V, W.error, Verr});
                    break;
                }
                case EstimateId::Thm42_upper: {
                    auto W = wolff(mu, alpha, p, c, x, sp);
                    rep.samples.push_back({"x=" + detail::vec_str(x), V, W.value, Verr, W.error});
                    break;
                }
                default:
                    rep.samples.push_back({"x=" + detail::vec_str(x), V, phi_int.value, Verr,
                                           phi_int.error});
            }
        } catch (const std::domain_error& e) {
            rep.notes.push_back(std::string("probe skipped: ") + e.what());
        }
    }
    detail::finalize_report(rep);
    if (rep.max_ratio > 0.0 && std::isfinite(rep.max_ratio)) {
        rep.params["min_lhs_over_rhs"] = rep.min_ratio;
        rep.params["max_lhs_over_rhs"] = rep.max_ratio;
    }
    return rep;
}

// regime-driven variant: the lower comparison always runs; the upper branch
// runs for p > 2 - alpha/n and the phi branch otherwise
inline EstimateReport verify_thm42(const Measure& mu, double alpha, double p, double c,
                                   const PotentialSpec& spec = {}, int probe_count = 16) {
    double p_split = 2.0 - alpha / mu.dim();
    EstimateId second = (p > p_split) ? EstimateId::Thm42_upper : EstimateId::Thm42_phi;
    EstimateReport lower = verify_thm42(mu, alpha, p, c, EstimateId::Thm42_lower, spec, probe_count);
    EstimateReport rep = verify_thm42(mu, alpha, p, c, second, spec, probe_count);
    for (SampleRow s : lower.samples) {
        s.input = "lower: " + s.input;
        rep.samples.push_back(std::move(s));
    }
    rep.params["lower_max_ratio"] = lower.max_ratio;
    rep.params["lower_min_ratio"] = lower.min_ratio;
    if (lower.verdict == Verdict::Violated) rep.verdict = Verdict::Violated;
    rep.notes.push_back(std::string("lower comparison verdict: ") + verdict_name(lower.verdict));
    rep.notes.push_back(second == EstimateId::Thm42_upper
                            ? "upper branch selected (p > 2 - alpha/n)"
                            : "upper branch skipped (p <= 2 - alpha/n); phi branch executed");
    return rep;
}

// bounded-potential substitutes for the upper comparison in 1 < p <= 2 - alpha/n
inline EstimateReport verify_thm43(const Measure& mu, double alpha, double p, double K,
                                   const PotentialSpec& spec = {}, int probe_count = 16) {
    int n = mu.dim();
    require(K > 0.0, "thm43 requires K > 0");
    check_arg(p > 1.0, "thm43 requires p > 1");
    check_arg(alpha > 0.0 && alpha * p < n, "thm43 requires 0 < alpha < n/p");
    double p_split = 2.0 - alpha / n;
    bool log_branch = std::abs(p - p_split) <= 1e-12;
    check_arg(log_branch || p < p_split, "thm43 requires 1 < p <= 2 - alpha/n");
    double c = 1.0; // damping convention for the comparison integral
    EstimateReport rep;
    rep.id = log_branch ? EstimateId::Thm43_b : EstimateId::Thm43_a;
    rep.params["alpha"] = alpha;
    rep.params["p"] = p;
    rep.params["K"] = K;
    rep.params["c"] = c;
    PotentialSpec sp = spec;
    sp.alpha = alpha;
    sp.p = p;
    if (mu.total_mass() == 0.0) {
        rep.samples.push_back({"zero measure", 0.0, 0.0, 0.0, 0.0});
        detail::finalize_report(rep);
        return rep;
    }
    auto probes = detail::default_probes(mu, probe_count);
    // hypothesis: V <= K on the probe set (a lower bound of the true sup)
    double supV = 0.0;
    std::vector<double> Vvals(probes.size(), 0.0);
    std::vector<char> ok(probes.size(), 1);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        try {
            Vvals[i] = v_potential(mu, alpha, p, probes[i], sp).value;
            supV = std::max(supV, Vvals[i]);
        } catch (const std::domain_error&) {
            ok[i] = 0;
        }
    }
    rep.params["sup_V"] = supV;
    double q_log = 1.0 / (p - 1.0);
    double exp_a = (n - 1.0) / (n - alpha * p);
    double s_a = 1.0 - n; // = -(n - alpha p) * exp_a
    double s_log = (alpha * p - n) * q_log;
    double Kpow = std::pow(K, ((2.0 - p) * n - alpha) / (n - alpha * p));
    // data-dependent inner constant for the log branch: keeps log arguments
    // >= 1 and the map m -> m log(A/m) increasing over every ring
    double c2 = std::exp(1.0);
    int zero_rings = 0;
    auto ring_setup = [&](const BallProfile& prof, double& r_lo, double& r_cut,
                          double& head, double& head_err) {
        double scale = prof.support_radius();
        r_lo = 1e-6 * scale;
        if (prof.nearest_mass_distance() < inf && prof.nearest_mass_distance() > 0.0)
            r_lo = std::min(r_lo, 0.49 * prof.nearest_mass_distance());
        head = head_err = 0.0;
        if (prof.spread_mass() > 0.0) {
            r_lo = std::min(r_lo, 0.999 * prof.spread_radius());
            double dens = prof.spread_mass() / std::pow(prof.spread_radius(), n);
            if (!log_branch) {
                double e = n * exp_a + s_a; // positive in regime (a)
                head = std::pow(dens, exp_a) * std::pow(r_lo, e) / e;
                head_err = head * c * r_lo;
            }
        }
        double s_ring = log_branch ? s_log : s_a;
        r_cut = std::max(scale * (1.0 + 1e-12), (80.0 + 5.0 * std::abs(s_ring - 1.0)) / c);
    };
    if (log_branch) {
        // first pass fixes c2 from the largest observed ring ratio
        double worst = 1.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (!ok[i]) continue;
            BallProfile prof(mu, probes[i], true);
            if (prof.total() == 0.0 || prof.atom_at_probe()
                || prof.nearest_mass_distance() == 0.0) continue;
            double r_lo, r_cut, head, head_err;
            ring_setup(prof, r_lo, r_cut, head, head_err);
            auto edges = log_edges(r_lo, r_cut, sp.quad_rings);
            for (double r : edges) {
                double denom = std::pow(K, p - 1.0) * std::pow(r, n - alpha * p);
                worst = std::max(worst, prof.mass(r).hi / denom);
            }
        }
        c2 = std::exp(1.0) * worst;
        rep.params["c2"] = c2;
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!ok[i]) {
            rep.notes.push_back("probe skipped: potential undefined at " +
                                detail::vec_str(probes[i]));
            continue;
        }
        BallProfile prof(mu, probes[i], true);
        if (prof.total() == 0.0) continue;
        if (prof.atom_at_probe() || prof.nearest_mass_distance() == 0.0) {
            rep.notes.push_back("probe skipped (mass at probe): " + detail::vec_str(probes[i]));
            continue;
        }
        double r_lo, r_cut, head, head_err;
        ring_setup(prof, r_lo, r_cut, head, head_err);
        auto edges = log_edges(r_lo, r_cut, sp.quad_rings);
        KahanSum L, U;
        if (!log_branch) {
            for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
                double w = exp_power_ring_weight(s_a, c, edges[j], edges[j + 1]);
                L.add(std::pow(prof.mass(edges[j]).lo, exp_a) * w);
                U.add(std::pow(prof.mass(edges[j + 1]).hi, exp_a) * w);
            }
        } else {
            auto g = [&](double m, double r) {
                if (m <= 0.0) return 0.0; // 0 * log(A/0) taken as 0
                double A = c2 * std::pow(K, p - 1.0) * std::pow(r, n - alpha * p);
                return m * std::log(A / m);
            };
            for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
                double w = exp_power_ring_weight(s_log, c, edges[j], edges[j + 1]);
                double mlo = prof.mass(edges[j]).lo;
                double mhi = prof.mass(edges[j + 1]).hi;
                if (mlo <= 0.0) ++zero_rings;
                L.add(std::pow(g(mlo, edges[j]), q_log) * w);
                U.add(std::pow(g(mhi, edges[j + 1]), q_log) * w);
            }
        }
        double e_ring = log_branch ? s_log : s_a;
        double tail_err = std::pow(log_branch ? prof.total() * std::log(std::max(std::exp(1.0),
                                       c2 * std::pow(K, p - 1.0) * std::pow(r_cut, n - alpha * p)
                                           / prof.total()))
                                              : prof.total(),
                                   log_branch ? q_log : exp_a)
                          * std::pow(r_cut, e_ring - 1.0) * std::exp(-c * r_cut) * 2.0 / c;
        double integral = 0.5 * (L.value() + U.value()) + head;
        double ierr = 0.5 * (U.value() - L.value()) + head_err + tail_err;
        double rhs = log_branch ? integral : Kpow * integral;
        double rhs_err = log_branch ? ierr : Kpow * ierr;
        rep.samples.push_back({"x=" + detail::vec_str(probes[i]), Vvals[i], rhs, 0.0, rhs_err});
    }
    if (zero_rings > 0)
        rep.notes.push_back(std::to_string(zero_rings) +
                            " rings with zero ball mass treated as 0*log = 0");
    detail::finalize_report(rep);
    if (supV > K) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes.push_back("hypothesis fails: measured sup of the composed potential exceeds K");
    }
    return rep;
}

// pointwise bounds for composed potentials of densities through the maximal
// function and Lebesgue norms, explicit branch
inline EstimateReport verify_thm44(const Measure& f, double alpha, double p, double s,
                                   EstimateId id, const PotentialSpec& spec = {},
                                   int probe_count = 12) {
    check_arg(f.kind() == MeasureKind::Grid, "verify_thm44 needs a grid density");
    int n = f.dim();
    check_arg(p > 1.0, "thm44 requires p > 1");
    check_arg(alpha > 0.0 && alpha < n, "thm44 requires 0 < alpha < n");
    double s_c = n / (alpha * p);
    double p_split = 2.0 - alpha / n;
    bool crit = std::abs(s - s_c) <= 1e-9 * std::max(1.0, s_c);
    switch (id) {
        case EstimateId::Thm44_est1:
            check_arg(p > p_split, "est1 requires p > 2 - alpha/n");
            check_arg(alpha * p < n, "est1 requires alpha < n/p");
            check_arg(s >= 1.0 && !crit && s < s_c, "est1 requires 1 <= s < n/(alpha p)");
            break;
        case EstimateId::Thm44_est2:
            check_arg(alpha * p < n, "est2 requires alpha < n/p");
            check_arg(s > 0.0 && !crit && s < s_c, "est2 requires 0 < s < n/(alpha p)");
            break;
        case EstimateId::Thm44_est3:
            check_arg(p > p_split, "est3 requires p > 2 - alpha/n");
            check_arg(crit, "est3 requires s = n/(alpha p)");
            break;
        case EstimateId::Thm44_est4:
            check_arg(crit, "est4 requires s = n/(alpha p)");
            break;
        default:
            check_arg(false, "verify_thm44 handles Thm44_est1..est4 only");
    }
    EstimateReport rep;
    rep.id = id;
    rep.params["alpha"] = alpha;
    rep.params["p"] = p;
    rep.params["s"] = s;
    double q = 1.0 / (p - 1.0);
    double eM = (n - alpha * p * s) / ((p - 1.0) * n);
    double eS = alpha * p * s / ((p - 1.0) * n);
    require(std::abs(eM + eS - q) < 1e-12, "exponent identity violated");
    double Ls = lp_norm(f, s);
    double Linf = sup_norm(f);
    if (Linf == 0.0) {
        rep.samples.push_back({"zero density", 0.0, 0.0, 0.0, 0.0});
        detail::finalize_report(rep);
        return rep;
    }
    PotentialSpec sp = spec;
    sp.alpha = alpha;
    sp.p = p;
    auto logplus = [](double t) { return t > 1.0 ? std::log(t) : 0.0; };
    auto probes = detail::default_probes(f, probe_count);
    for (const Vec& x : probes) {
        try {
            double lhs, lhs_err, rhs;
            if (id == EstimateId::Thm44_est1 || id == EstimateId::Thm44_est2) {
                auto U = havin_mazya(f, alpha, p, x, sp);
                lhs = U.value;
                lhs_err = U.error;
                double base = (id == EstimateId::Thm44_est1) ? maximal(f, x).value : Linf;
                rhs = std::pow(base, eM) * std::pow(Ls, eS);
            } else {
                auto V = v_potential(f, alpha, p, x, sp);
                lhs = V.value;
                lhs_err = V.error;
                double base = (id == EstimateId::Thm44_est3) ? maximal(f, x).value : Linf;
                double aq = std::pow(base, q), bq = std::pow(Ls, q);
                rhs = bq * (aq / (aq + bq) + logplus(base / Ls));
            }
            rep.samples.push_back({"x=" + detail::vec_str(x), lhs, rhs, lhs_err, 0.0});
        } catch (const std::domain_error& e) {
            rep.notes.push_back(std::string("probe skipped: ") + e.what());
        }
    }
    detail::finalize_report(rep);
    return rep;
}

// regime-driven branch selection per the precondition table
inline EstimateReport verify_thm44(const Measure& f, double alpha, double p, double s,
                                   const PotentialSpec& spec = {}, int probe_count = 12) {
    int n = f.dim();
    double s_c = n / (alpha * p);
    double p_split = 2.0 - alpha / n;
    bool crit = std::abs(s - s_c) <= 1e-9 * std::max(1.0, s_c);
    EstimateId id;
    if (crit) {
        id = (p > p_split && alpha * p <= n + 1e-12) ? EstimateId::Thm44_est3
                                                     : EstimateId::Thm44_est4;
    } else {
        check_arg(s < s_c, "thm44 requires s <= n/(alpha p)");
        check_arg(alpha * p < n, "thm44 with s < n/(alpha p) requires alpha < n/p");
        id = (p > p_split && s >= 1.0) ? EstimateId::Thm44_est1 : EstimateId::Thm44_est2;
    }
    return verify_thm44(f, alpha, p, s, id, spec, probe_count);
}

// exact value of the Newtonian potential of the unit-density ball B_R(x0) at
// distance d from the center (harmonic kernel, valid for every n >= 3)
inline double ball_kernel_integral_exact(double d, double R, int n) {
    require(n >= 3, "newtonian kernel requires dimension >= 3");
    require(R > 0.0 && d >= 0.0, "ball_kernel_integral_exact needs R > 0, d >= 0");
    if (d >= R) return ball_volume(n) * std::pow(R, n) * std::pow(d, 2.0 - n);
    return sphere_area(n) * (d * d / n + 0.5 * (R * R - d * d));
}

// N(x) = int_{|y-x0|<R} |x-y|^{2-n} dy against the majorant C R^n /
// (|x-x0|^{n-2} + R^{n-2}); the shell ladder uses scale-covariant nodes so
// the fitted constant is exactly invariant under dilation
inline EstimateReport verify_lemma42(const Vec& x0, double R,
                                     const std::vector<Vec>& probe_xs,
                                     const PotentialSpec& spec = {}) {
    int n = static_cast<int>(x0.size());
    check_arg(n >= 3, "lemma42 requires dimension >= 3");
    require(R > 0.0, "lemma42 requires R > 0");
    spec.validate();
    EstimateReport rep;
    rep.id = EstimateId::Lemma42;
    rep.params["R"] = R;
    double max_dev = 0.0;
    std::vector<double> rel_edges = log_edges(1e-6, 1.0, spec.quad_rings);
    for (const Vec& x : probe_xs) {
        check_arg(static_cast<int>(x.size()) == n, "probe dimension mismatch");
        double d = dist(x, x0);
        // shell ladder: integrand A rho^{n-1} * max(d, rho)^{2-n} (spherical
        // mean of the harmonic kernel), geometric midpoints
        KahanSum acc, err;
        double A = sphere_area(n);
        for (std::size_t i = 0; i + 1 < rel_edges.size(); ++i) {
            double a = R * rel_edges[i], b = R * rel_edges[i + 1];
            double rho = std::sqrt(a * b);
            auto integrand = [&](double r) {
                double m = std::max(d, r);
                double mean = (n == 3) ? 1.0 / m : std::pow(m, 2.0 - n);
                return A * std::pow(r, n - 1.0) * mean;
            };
            acc.add(integrand(rho) * (b - a));
            err.add(0.5 * std::abs(integrand(b) - integrand(a)) * (b - a));
        }
        // head below the smallest shell
        double r0 = R * rel_edges.front();
        double head = (d >= r0) ? ball_volume(n) * std::pow(r0, n) * std::pow(d, 2.0 - n)
                                : ball_kernel_integral_exact(d, r0, n);
        double N = acc.value() + head;
        double rhs = std::pow(R, n) / (std::pow(d, n - 2.0) + std::pow(R, n - 2.0));
        rep.samples.push_back({"x=" + detail::vec_str(x), N, rhs, err.value(), 0.0});
        double exact = ball_kernel_integral_exact(d, R, n);
        max_dev = std::max(max_dev, std::abs(N - exact) / exact);
    }
    rep.params["max_closed_form_rel_dev"] = max_dev;
    detail::finalize_report(rep);
    return rep;
}

} // namespace nlpot
