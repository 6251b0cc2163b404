#pragma once

#include <string>

#include "core.hpp"
#include "measure.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace nlpot {

// value with a quadrature/discretization error estimate attached; the
// estimate brackets the ring quadrature exactly and treats kernel sums over
// grid cells to first order in the cell diameter
struct PotentialValue {
    double value = 0.0;
    double error = 0.0;
};

enum class PotentialOp {
    riesz_layercake,
    riesz_kernel,
    newtonian_ball,
    truncated_newtonian,
    bessel,
    wolff,
    havin_mazya,
    v_potential,
    composite_NN,
    wolff_sigma,
    maximal,
};

inline const char* op_name(PotentialOp op) {
    switch (op) {
        case PotentialOp::riesz_layercake: return "riesz_layercake";
        case PotentialOp::riesz_kernel: return "riesz_kernel";
        case PotentialOp::newtonian_ball: return "newtonian_ball";
        case PotentialOp::truncated_newtonian: return "truncated_newtonian";
        case PotentialOp::bessel: return "bessel";
        case PotentialOp::wolff: return "wolff";
        case PotentialOp::havin_mazya: return "havin_mazya";
        case PotentialOp::v_potential: return "v_potential";
        case PotentialOp::composite_NN: return "composite_NN";
        case PotentialOp::wolff_sigma: return "wolff_sigma";
        case PotentialOp::maximal: return "maximal";
    }
    return "?";
}

inline PotentialOp op_from_name(const std::string& s) {
    for (PotentialOp op : {PotentialOp::riesz_layercake, PotentialOp::riesz_kernel,
                           PotentialOp::newtonian_ball, PotentialOp::truncated_newtonian,
                           PotentialOp::bessel, PotentialOp::wolff, PotentialOp::havin_mazya,
                           PotentialOp::v_potential, PotentialOp::composite_NN,
                           PotentialOp::wolff_sigma, PotentialOp::maximal})
        if (s == op_name(op)) return op;
    check_arg(false, "unknown potential op: " + s);
    return PotentialOp::riesz_layercake;
}

// shared numeric knobs; operator-specific parameters are validated by the
// operator itself when used
struct PotentialSpec {
    double alpha = 1.0;
    double p = 2.0;
    double sigma = 1.0;
    double c = 0.0;
    double r_max = 0.0;   // 0: integrate the full half-line
    int quad_rings = 512; // ring count for cake quadratures
    int grid = 24;        // working-lattice resolution for composed potentials
    double trunc_R = 1.0; // ball radius for the truncated Newtonian

    void validate() const {
        check_arg(quad_rings >= 16, "quad_rings must be at least 16");
        check_arg(grid >= 2, "grid must be at least 2");
        check_arg(r_max >= 0.0, "r_max must be nonnegative");
    }
};

namespace detail {

struct PowerKernel {
    double alpha;
    int n;
    double operator()(double r) const { return std::pow(r, alpha - n); }
    double ball_integral(double rho) const {
        return sphere_area(n) * std::pow(rho, alpha) / alpha;
    }
};

struct BesselKernelRef {
    const BesselKernel* g;
    double operator()(double r) const { return (*g)(r); }
    double ball_integral(double rho) const { return g->ball_integral(rho); }
};

// mean of r -> r^{alpha-n} over the sphere |y| = rho, probe at distance d
// from the center; n = 3 has the classical closed form, other n go through
// a Gauss rule in the polar angle with the cancellation-free distance
// (d-rho)^2 + 4 d rho sin^2(theta/2)
inline double power_shell_mean(double d, double rho, double alpha, int n) {
    require(d > 0.0 && rho > 0.0, "shell mean needs positive radii");
    require(std::abs(d - rho) > 1e-12 * (d + rho),
            "kernel mean undefined on a mass-carrying sphere; perturb the probe");
    if (n == 3) {
        double e = alpha - 1.0; // alpha - n + 2
        if (std::abs(e) < 1e-13)
            return std::log((d + rho) / std::abs(d - rho)) / (2.0 * d * rho);
        return (std::pow(d + rho, e) - std::pow(std::abs(d - rho), e)) / (2.0 * d * rho * e);
    }
    double coeff = (n == 2) ? 1.0 / pi : sphere_area(n - 1) / sphere_area(n);
    KahanSum acc;
    for (int i = 0; i < gauss::gauss32_count; ++i) {
        double theta = 0.5 * pi * (gauss::gauss32_x[i] + 1.0);
        double sh = std::sin(0.5 * theta);
        double dd2 = sq(d - rho) + 4.0 * d * rho * sh * sh;
        double f = std::pow(dd2, 0.5 * (alpha - n));
        if (n > 2) f *= std::pow(std::sin(theta), n - 2);
        acc.add(gauss::gauss32_w[i] * f);
    }
    return coeff * 0.5 * pi * acc.value();
}

template <class K>
double generic_shell_mean(const K& k, double d, double rho, int n) {
    require(std::abs(d - rho) > 1e-12 * (d + rho),
            "kernel mean undefined on a mass-carrying sphere; perturb the probe");
    double coeff = (n == 2) ? 1.0 / pi : sphere_area(n - 1) / sphere_area(n);
    KahanSum acc;
    for (int i = 0; i < gauss::gauss32_count; ++i) {
        double theta = 0.5 * pi * (gauss::gauss32_x[i] + 1.0);
        double sh = std::sin(0.5 * theta);
        double dd = std::sqrt(sq(d - rho) + 4.0 * d * rho * sh * sh);
        double f = k(dd);
        if (n > 2) f *= std::pow(std::sin(theta), n - 2);
        acc.add(gauss::gauss32_w[i] * f);
    }
    return coeff * 0.5 * pi * acc.value();
}

// direct kernel sum int k(|x-y|) dmu(y).  Grid cells use the cell-center
// distance with the self-cell replaced by the exact ball integral of the
// kernel at the equal-volume radius; distances below `smoothing` are
// replaced by the kernel's ball average at that radius (used when sampling
// inner fields of composed potentials at lattice nodes).
template <class Kernel>
PotentialValue kernel_sum(const Measure& mu, const Vec& x, const Kernel& k,
                          double smoothing = 0.0) {
    int n = mu.dim();
    check_arg(static_cast<int>(x.size()) == n, "probe dimension mismatch");
    KahanSum val, err;
    switch (mu.kind()) {
        case MeasureKind::Atomic: {
            for (std::size_t i = 0; i < mu.points().size(); ++i) {
                double m = mu.masses()[i];
                if (m == 0.0) continue;
                double d = dist(x, mu.points()[i]);
                if (d <= smoothing && smoothing > 0.0) {
                    val.add(m * k.ball_integral(smoothing)
                            / (ball_volume(n) * std::pow(smoothing, n)));
                    continue;
                }
                require(d > 0.0, "kernel sum evaluated at an atom of the measure");
                val.add(m * k(d));
            }
            err.add(1e-14 * std::abs(val.value()));
            break;
        }
        case MeasureKind::Grid: {
            double h = mu.cell_width();
            double vol = mu.cell_volume();
            double rho = mu.equal_volume_radius();
            double Rc = 0.5 * h * std::sqrt(static_cast<double>(n));
            long long self = mu.cell_index_of(x);
            for (std::size_t c = 0; c < mu.cell_count(); ++c) {
                double v = mu.value_at(c);
                if (v == 0.0) continue;
                if (static_cast<long long>(c) == self) {
                    val.add(v * k.ball_integral(rho));
                    continue;
                }
                double d = dist(x, mu.cell_center(c));
                double m = v * vol;
                if (d <= smoothing && smoothing > 0.0) {
                    val.add(m * k.ball_integral(smoothing)
                            / (ball_volume(n) * std::pow(smoothing, n)));
                    continue;
                }
                val.add(m * k(d));
                double d_lo = std::max(d - Rc, 0.25 * d);
                err.add(0.5 * m * std::abs(k(d_lo) - k(d + Rc)));
            }
            break;
        }
        case MeasureKind::Radial: {
            BallProfile prof(mu, x, false);
            double d = prof.center_distance();
            const auto& knots = mu.knots();
            const auto& cum = mu.cumulative();
            double prev = 0.0;
            for (std::size_t i = 0; i < knots.size(); ++i) {
                double m = cum[i] - prev;
                prev = cum[i];
                if (m == 0.0) continue;
                double rho = knots[i];
                if (prof.centered()) {
                    require(rho > 0.0, "kernel sum evaluated at an atom of the measure");
                    val.add(m * k(rho));
                } else if (rho == 0.0) {
                    require(d > 0.0, "kernel sum evaluated at an atom of the measure");
                    val.add(m * k(d));
                } else {
                    val.add(m * generic_shell_mean(k, d, rho, n));
                }
            }
            err.add(1e-12 * std::abs(val.value()));
            break;
        }
    }
    return {val.value(), err.value()};
}

// cubic working lattice used by composed potentials: covers the support of
// the measure and the probe with a factor-two margin so analytic tails apply
struct WorkGrid {
    Vec box_min;
    double side = 0.0;
    int cells = 0;
    int n = 0;

    double h() const { return side / cells; }
    double vol() const { return std::pow(h(), n); }
    double rho() const { return h() * std::pow(1.0 / ball_volume(n), 1.0 / n); }
    long count() const {
        long c = 1;
        for (int d = 0; d < n; ++d) c *= cells;
        return c;
    }
    Vec center(long flat) const {
        Vec y(n);
        for (int d = 0; d < n; ++d) {
            y[d] = box_min[d] + (flat % cells + 0.5) * h();
            flat /= cells;
        }
        return y;
    }
    long index_of(const Vec& x) const {
        long flat = 0, stride = 1;
        for (int d = 0; d < n; ++d) {
            double t = (x[d] - box_min[d]) / h();
            long i = static_cast<long>(std::floor(t));
            if (i < 0 || i >= cells) return -1;
            flat += i * stride;
            stride *= cells;
        }
        return flat;
    }
    Vec box_center() const {
        Vec c(n);
        for (int d = 0; d < n; ++d) c[d] = box_min[d] + 0.5 * side;
        return c;
    }
};

inline WorkGrid make_work_grid(const Measure& mu, const Vec& x, int cells,
                               double margin = 2.0) {
    int n = mu.dim();
    Vec lo, hi;
    mu.support_bounds(lo, hi);
    for (int d = 0; d < n; ++d) {
        lo[d] = std::min(lo[d], x[d]);
        hi[d] = std::max(hi[d], x[d]);
    }
    double half = 0.0;
    Vec c(n);
    for (int d = 0; d < n; ++d) {
        c[d] = 0.5 * (lo[d] + hi[d]);
        half = std::max(half, 0.5 * (hi[d] - lo[d]));
    }
    half = std::max(half, 1e-8);
    WorkGrid wg;
    wg.n = n;
    wg.cells = cells;
    wg.side = 2.0 * half * margin;
    wg.box_min.resize(n);
    for (int d = 0; d < n; ++d) wg.box_min[d] = c[d] - 0.5 * wg.side;
    return wg;
}

// splice the discontinuity radii of an exact step profile into a ring ladder
// so every ring sees constant ball mass on its open interior
inline void align_edges_with_steps(std::vector<double>& edges,
                                   const std::vector<double>& steps) {
    double lo = edges.front(), hi = edges.back();
    std::size_t before = edges.size();
    for (double d : steps)
        if (d > lo && d < hi) edges.push_back(d);
    if (edges.size() != before) std::sort(edges.begin(), edges.end());
}

} // namespace detail

// ---------------------------------------------------------------------------
// cake-form Riesz potential
//   I_alpha mu(x) = int_0^inf mu(B_r(x)) r^{alpha-n-1} dr
// with a bracketed ring ladder, an exact head for the spread self cell and a
// closed-form saturated tail
inline PotentialValue riesz_layercake(const Measure& mu, double alpha, const Vec& x,
                                      const PotentialSpec& spec = {}) {
    spec.validate();
    int n = mu.dim();
    check_arg(alpha > 0.0 && alpha < n, "riesz potential requires 0 < alpha < n");
    BallProfile prof(mu, x, true);
    double total = prof.total();
    if (total == 0.0) return {0.0, 0.0};
    require(!prof.atom_at_probe(), "potential diverges: point mass at the probe");
    require(prof.nearest_mass_distance() > 0.0,
            "cake quadrature undefined with a mass sphere through the probe; perturb the probe");
    double scale = prof.support_radius();
    double r_lo = 1e-6 * scale;
    if (prof.nearest_mass_distance() < inf)
        r_lo = std::min(r_lo, 0.49 * prof.nearest_mass_distance());
    if (prof.spread_mass() > 0.0) r_lo = std::min(r_lo, 0.999 * prof.spread_radius());
    double head = 0.0;
    if (prof.spread_mass() > 0.0) {
        double dens = prof.spread_mass() / std::pow(prof.spread_radius(), n);
        head = dens * std::pow(r_lo, alpha) / alpha;
    }
    double r_hi = scale * (1.0 + 1e-12);
    double trunc_err = 0.0;
    bool truncated = spec.r_max > 0.0 && spec.r_max < r_hi;
    if (truncated) {
        trunc_err = total * std::pow(spec.r_max, alpha - n) / (n - alpha);
        r_hi = std::max(spec.r_max, r_lo * (1.0 + 1e-12));
    }
    auto edges = log_edges(r_lo, r_hi, spec.quad_rings);
    bool exact = prof.exact_steps();
    if (exact) detail::align_edges_with_steps(edges, prof.step_radii());
    KahanSum L, U;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double w = power_ring_weight(alpha - n, edges[i], edges[i + 1]);
        if (exact) {
            // constant on the open ring, so one interior sample is exact
            double m = prof.mass(std::sqrt(edges[i] * edges[i + 1])).mid();
            L.add(m * w);
            U.add(m * w);
        } else {
            L.add(prof.mass(edges[i]).lo * w);
            U.add(prof.mass(edges[i + 1]).hi * w);
        }
    }
    double tail = truncated ? 0.0 : total * std::pow(r_hi, alpha - n) / (n - alpha);
    double value = 0.5 * (L.value() + U.value()) + head + tail;
    double error = 0.5 * (U.value() - L.value()) + trunc_err + 1e-14 * std::abs(value);
    return {value, error};
}

// dual route: direct kernel sum (1/(n-alpha)) int |x-y|^{alpha-n} dmu(y)
inline PotentialValue riesz_kernel(const Measure& mu, double alpha, const Vec& x) {
    int n = mu.dim();
    check_arg(alpha > 0.0 && alpha < n, "riesz potential requires 0 < alpha < n");
    auto kv = detail::kernel_sum(mu, x, detail::PowerKernel{alpha, n});
    return {kv.value / (n - alpha), kv.error / (n - alpha)};
}

// Newtonian potential of a grid density, kernel |x-y|^{2-n} without prefactor
inline PotentialValue newtonian_ball(const Measure& f, const Vec& x) {
    check_arg(f.kind() == MeasureKind::Grid, "newtonian_ball needs a grid density");
    check_arg(f.dim() >= 3, "newtonian kernel requires dimension >= 3");
    return detail::kernel_sum(f, x, detail::PowerKernel{2.0, f.dim()});
}

// Newtonian potential restricted to cells whose centers lie in |zeta| < R
inline PotentialValue truncated_newtonian(const Measure& f, double R, const Vec& x) {
    check_arg(f.kind() == MeasureKind::Grid, "truncated_newtonian needs a grid density");
    check_arg(f.dim() >= 3, "newtonian kernel requires dimension >= 3");
    check_arg(R > 0.0, "truncation radius must be positive");
    Measure masked = f;
    for (std::size_t c = 0; c < masked.cell_count(); ++c) {
        if (masked.value_at(c) == 0.0) continue;
        if (norm2(masked.cell_center(c)) >= R) masked.set_value(c, 0.0);
    }
    return detail::kernel_sum(masked, x, detail::PowerKernel{2.0, f.dim()});
}

inline PotentialValue bessel(const Measure& mu, double alpha, const Vec& x) {
    int n = mu.dim();
    check_arg(alpha > 0.0 && alpha < n, "bessel potential requires 0 < alpha < n");
    const BesselKernel& G = bessel_kernel(alpha, n);
    return detail::kernel_sum(mu, x, detail::BesselKernelRef{&G});
}

// nonlinear radial potential
//   W(x) = int_0^inf ( mu(B_r(x)) / r^{n - alpha p} )^{1/(p-1)} e^{-c r} dr / r
// (c = 0: plain form, requires alpha p < n; c > 0: damped form, alpha p <= n)
inline PotentialValue wolff(const Measure& mu, double alpha, double p, double c,
                            const Vec& x, const PotentialSpec& spec = {}) {
    spec.validate();
    int n = mu.dim();
    check_arg(p > 1.0, "wolff potential requires p > 1");
    check_arg(alpha > 0.0, "wolff potential requires alpha > 0");
    if (c == 0.0)
        check_arg(alpha * p < n, "wolff potential with c = 0 requires alpha*p < n");
    else {
        check_arg(c > 0.0, "damping constant must be nonnegative");
        check_arg(alpha * p <= n, "damped wolff potential requires alpha*p <= n");
    }
    double q = 1.0 / (p - 1.0);
    double s = (alpha * p - n) * q; // ring exponent, <= 0
    BallProfile prof(mu, x, true);
    double total = prof.total();
    if (total == 0.0) return {0.0, 0.0};
    require(!prof.atom_at_probe(), "potential diverges: point mass at the probe");
    require(prof.nearest_mass_distance() > 0.0,
            "cake quadrature undefined with a mass sphere through the probe; perturb the probe");
    double scale = prof.support_radius();
    double r_lo = 1e-6 * scale;
    if (prof.nearest_mass_distance() < inf)
        r_lo = std::min(r_lo, 0.49 * prof.nearest_mass_distance());
    if (prof.spread_mass() > 0.0) r_lo = std::min(r_lo, 0.999 * prof.spread_radius());
    double head = 0.0, head_err = 0.0;
    if (prof.spread_mass() > 0.0) {
        double dens = prof.spread_mass() / std::pow(prof.spread_radius(), n);
        double e = n * q + s; // = q * alpha * p > 0
        head = std::pow(dens, q) * std::pow(r_lo, e) / e;
        if (c > 0.0) head_err = head * c * r_lo; // 1 - e^{-cr} <= cr on the head
    }
    double r_supp = scale * (1.0 + 1e-12);
    double r_end = r_supp;
    double tail = 0.0, tail_err = 0.0;
    if (c == 0.0) {
        tail = std::pow(total, q) * std::pow(r_supp, s) / (-s);
    } else {
        double r_cut = std::max(r_supp, (80.0 + 5.0 * std::abs(s - 1.0)) / c);
        r_end = r_cut;
        tail_err = std::pow(total, q) * std::pow(r_cut, s - 1.0) * std::exp(-c * r_cut) * 2.0 / c;
    }
    double trunc_err = 0.0;
    bool truncated = spec.r_max > 0.0 && spec.r_max < r_end;
    if (truncated) {
        if (c == 0.0)
            trunc_err = std::pow(total, q) * std::pow(spec.r_max, s) / (-s);
        else
            trunc_err = std::pow(total, q)
                        * exp_power_ring_weight(s, c, spec.r_max, r_end)
                        + tail_err;
        tail = 0.0;
        tail_err = 0.0;
        r_end = std::max(spec.r_max, r_lo * (1.0 + 1e-12));
    }
    auto edges = log_edges(r_lo, r_end, spec.quad_rings);
    bool exact = prof.exact_steps();
    if (exact) detail::align_edges_with_steps(edges, prof.step_radii());
    KahanSum L, U;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double w = (c == 0.0) ? power_ring_weight(s, edges[i], edges[i + 1])
                              : exp_power_ring_weight(s, c, edges[i], edges[i + 1]);
        if (exact) {
            double m = std::pow(prof.mass(std::sqrt(edges[i] * edges[i + 1])).mid(), q);
            L.add(m * w);
            U.add(m * w);
        } else {
            L.add(std::pow(prof.mass(edges[i]).lo, q) * w);
            U.add(std::pow(prof.mass(edges[i + 1]).hi, q) * w);
        }
    }
    double value = 0.5 * (L.value() + U.value()) + head + tail;
    double error = 0.5 * (U.value() - L.value()) + head_err + tail_err + trunc_err
                   + 1e-14 * std::abs(value);
    return {value, error};
}

// composed Riesz potential I_alpha( (I_alpha mu)^{1/(p-1)} ) sampled through a
// working lattice; requires alpha p < n so the outer integral converges
inline PotentialValue havin_mazya(const Measure& mu, double alpha, double p,
                                  const Vec& x, const PotentialSpec& spec = {}) {
    spec.validate();
    int n = mu.dim();
    check_arg(p > 1.0, "composed potential requires p > 1");
    check_arg(alpha > 0.0 && alpha < n, "composed potential requires 0 < alpha < n");
    check_arg(alpha * p < n, "composed riesz potential requires alpha*p < n");
    if (mu.total_mass() == 0.0) return {0.0, 0.0};
    double q = 1.0 / (p - 1.0);
    auto wg = detail::make_work_grid(mu, x, spec.grid);
    detail::PowerKernel k{alpha, n};
    long count = wg.count();
    std::vector<double> g(count);
    for (long cidx = 0; cidx < count; ++cidx) {
        auto kv = detail::kernel_sum(mu, wg.center(cidx), k, wg.rho());
        g[cidx] = std::pow(kv.value / (n - alpha), q);
    }
    // outer pass: lattice field as a density against the same kernel
    double vol = wg.vol();
    double Rc = 0.5 * wg.h() * std::sqrt(static_cast<double>(n));
    long self = wg.index_of(x);
    KahanSum val, err;
    for (long cidx = 0; cidx < count; ++cidx) {
        if (g[cidx] == 0.0) continue;
        if (cidx == self) {
            val.add(g[cidx] * k.ball_integral(wg.rho()));
            continue;
        }
        double d = dist(x, wg.center(cidx));
        double m = g[cidx] * vol;
        val.add(m * k(d));
        double d_lo = std::max(d - Rc, 0.25 * d);
        err.add(0.5 * m * std::abs(k(d_lo) - k(d + Rc)));
    }
    // analytic tail outside the lattice: both the inner potential and the
    // outer kernel are dominated by power envelopes around the box center
    Vec cW = wg.box_center();
    double R0 = 0.5 * wg.side;
    double gam1 = 1.0 - dist(x, cW) / R0;
    Vec slo, shi;
    mu.support_bounds(slo, shi);
    double supp_from_c = 0.0;
    for (int d = 0; d < n; ++d)
        supp_from_c = std::max(supp_from_c,
                               std::max(std::abs(slo[d] - cW[d]), std::abs(shi[d] - cW[d])));
    supp_from_c *= std::sqrt(static_cast<double>(n));
    double gam2 = 1.0 - supp_from_c / R0;
    require(gam1 > 0.05 && gam2 > 0.05, "working lattice margin too small for the tail bound");
    double M = mu.total_mass();
    double c_in = M * std::pow(gam2, alpha - n) / (n - alpha);
    double E = (alpha - n) * (q + 1.0) + n; // < 0 iff alpha p < n
    double tail = std::pow(c_in, q) * std::pow(gam1, alpha - n) * sphere_area(n)
                  * std::pow(R0, E) / (-E) / (n - alpha);
    err.add(tail);
    return {val.value() / (n - alpha), err.value() / (n - alpha)};
}

// composed Bessel potential J_alpha( (J_alpha mu)^{1/(p-1)} ); converges for
// any 0 < alpha < n thanks to the exponential decay of the kernel
inline PotentialValue v_potential(const Measure& mu, double alpha, double p,
                                  const Vec& x, const PotentialSpec& spec = {}) {
    spec.validate();
    int n = mu.dim();
    check_arg(p > 1.0, "composed potential requires p > 1");
    check_arg(alpha > 0.0 && alpha < n, "composed potential requires 0 < alpha < n");
    if (mu.total_mass() == 0.0) return {0.0, 0.0};
    double q = 1.0 / (p - 1.0);
    auto wg = detail::make_work_grid(mu, x, spec.grid);
    const BesselKernel& G = bessel_kernel(alpha, n);
    detail::BesselKernelRef k{&G};
    long count = wg.count();
    std::vector<double> g(count);
    for (long cidx = 0; cidx < count; ++cidx) {
        auto kv = detail::kernel_sum(mu, wg.center(cidx), k, wg.rho());
        g[cidx] = std::pow(kv.value, q);
    }
    double vol = wg.vol();
    double Rc = 0.5 * wg.h() * std::sqrt(static_cast<double>(n));
    long self = wg.index_of(x);
    KahanSum val, err;
    for (long cidx = 0; cidx < count; ++cidx) {
        if (g[cidx] == 0.0) continue;
        if (cidx == self) {
            val.add(g[cidx] * k.ball_integral(wg.rho()));
            continue;
        }
        double d = dist(x, wg.center(cidx));
        double m = g[cidx] * vol;
        val.add(m * k(d));
        double d_lo = std::max(d - Rc, 0.25 * d);
        err.add(0.5 * m * std::abs(k(d_lo) - k(d + Rc)));
    }
    Vec cW = wg.box_center();
    double R0 = 0.5 * wg.side;
    double gam1 = 1.0 - dist(x, cW) / R0;
    Vec slo, shi;
    mu.support_bounds(slo, shi);
    double supp_from_c = 0.0;
    for (int d = 0; d < n; ++d)
        supp_from_c = std::max(supp_from_c,
                               std::max(std::abs(slo[d] - cW[d]), std::abs(shi[d] - cW[d])));
    supp_from_c *= std::sqrt(static_cast<double>(n));
    double gam2 = 1.0 - supp_from_c / R0;
    require(gam1 > 0.05 && gam2 > 0.05, "working lattice margin too small for the tail bound");
    double M = mu.total_mass();
    double tail = std::pow(M * G(R0 * gam2), q) * std::pow(gam1, -static_cast<double>(n))
                  * G.integral_beyond(R0 * gam1);
    err.add(tail);
    return {val.value(), err.value()};
}

// composite Newtonian potential N((N f)^sigma) of a grid density, with both
// passes restricted to a ball B (cells whose centers lie in B); by default B
// is the ball inscribed in the grid box
inline PotentialValue composite_NN(const Measure& f, double sigma, const Vec& x,
                                   const PotentialSpec& spec = {},
                                   const Vec* ball_center = nullptr,
                                   double ball_radius = 0.0) {
    spec.validate();
    check_arg(f.kind() == MeasureKind::Grid, "composite_NN needs a grid density");
    int n = f.dim();
    check_arg(n == 3, "composite newtonian requires dimension 3 grids");
    check_arg(sigma > 0.0, "composite_NN requires sigma > 0");
    int N = f.cells_per_axis();
    double h = f.cell_width();
    double vol = f.cell_volume();
    double rho = f.equal_volume_radius();
    Vec cB(n);
    double RB = ball_radius;
    if (ball_center) {
        cB = *ball_center;
        check_arg(RB > 0.0, "ball radius must be positive");
    } else {
        for (int d = 0; d < n; ++d) cB[d] = f.box_min()[d] + 0.5 * f.box_side();
        RB = 0.5 * f.box_side();
    }
    std::vector<char> mask(f.cell_count());
    for (std::size_t c = 0; c < f.cell_count(); ++c)
        mask[c] = dist(f.cell_center(c), cB) < RB ? 1 : 0;
    // offset kernel table: K[di,dj,dk] = vol * |offset|^{2-n}, zero offset
    // replaced by the exact self-cell ball integral
    int W = 2 * N - 1;
    std::vector<double> K(static_cast<std::size_t>(W) * W * W);
    detail::PowerKernel pk{2.0, n};
    for (int di = -(N - 1); di <= N - 1; ++di)
        for (int dj = -(N - 1); dj <= N - 1; ++dj)
            for (int dk = -(N - 1); dk <= N - 1; ++dk) {
                std::size_t idx = static_cast<std::size_t>(di + N - 1)
                                  + static_cast<std::size_t>(W) * (dj + N - 1)
                                  + static_cast<std::size_t>(W) * W * (dk + N - 1);
                if (di == 0 && dj == 0 && dk == 0) {
                    K[idx] = pk.ball_integral(rho);
                } else {
                    double r = h * std::sqrt(static_cast<double>(di) * di
                                             + static_cast<double>(dj) * dj
                                             + static_cast<double>(dk) * dk);
                    K[idx] = vol * pk(r);
                }
            }
    // gather masked source cells once
    struct Cell { int i, j, k; double v; };
    std::vector<Cell> src;
    for (int kk = 0; kk < N; ++kk)
        for (int jj = 0; jj < N; ++jj)
            for (int ii = 0; ii < N; ++ii) {
                long flat = ii + static_cast<long>(N) * (jj + static_cast<long>(N) * kk);
                if (!mask[flat] || f.value_at(flat) == 0.0) continue;
                src.push_back({ii, jj, kk, f.value_at(flat)});
            }
    // inner convolution on masked evaluation cells
    std::vector<double> H(f.cell_count(), 0.0);
    for (int kk = 0; kk < N; ++kk)
        for (int jj = 0; jj < N; ++jj)
            for (int ii = 0; ii < N; ++ii) {
                long flat = ii + static_cast<long>(N) * (jj + static_cast<long>(N) * kk);
                if (!mask[flat]) continue;
                double acc = 0.0;
                for (const Cell& s : src) {
                    std::size_t idx = static_cast<std::size_t>(ii - s.i + N - 1)
                                      + static_cast<std::size_t>(W) * (jj - s.j + N - 1)
                                      + static_cast<std::size_t>(W) * W * (kk - s.k + N - 1);
                    acc += s.v * K[idx];
                }
                H[flat] = std::pow(acc, sigma);
            }
    // outer pass at the probe
    double Rc = 0.5 * h * std::sqrt(static_cast<double>(n));
    long long self = f.cell_index_of(x);
    KahanSum val, err;
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
        if (!mask[c] || H[c] == 0.0) continue;
        if (static_cast<long long>(c) == self) {
            val.add(H[c] * pk.ball_integral(rho));
            continue;
        }
        double d = dist(x, f.cell_center(c));
        double m = H[c] * vol;
        val.add(m * pk(d));
        double d_lo = std::max(d - Rc, 0.25 * d);
        err.add(0.5 * m * std::abs(pk(d_lo) - pk(d + Rc)));
    }
    return {val.value(), err.value()};
}

// sup of N((N f)^sigma) over the masked cell centers (full second
// convolution); the error estimate is taken from a direct evaluation at the
// maximizing center
inline PotentialValue composite_NN_sup(const Measure& f, double sigma,
                                       const PotentialSpec& spec = {},
                                       Vec* argmax = nullptr) {
    spec.validate();
    check_arg(f.kind() == MeasureKind::Grid, "composite_NN needs a grid density");
    check_arg(f.dim() == 3, "composite newtonian requires dimension 3 grids");
    check_arg(sigma > 0.0, "composite_NN requires sigma > 0");
    int n = 3;
    int N = f.cells_per_axis();
    double h = f.cell_width();
    double vol = f.cell_volume();
    double rho = f.equal_volume_radius();
    Vec cB(n);
    for (int d = 0; d < n; ++d) cB[d] = f.box_min()[d] + 0.5 * f.box_side();
    double RB = 0.5 * f.box_side();
    std::vector<char> mask(f.cell_count());
    for (std::size_t c = 0; c < f.cell_count(); ++c)
        mask[c] = dist(f.cell_center(c), cB) < RB ? 1 : 0;
    int W = 2 * N - 1;
    std::vector<double> K(static_cast<std::size_t>(W) * W * W);
    detail::PowerKernel pk{2.0, n};
    for (int di = -(N - 1); di <= N - 1; ++di)
        for (int dj = -(N - 1); dj <= N - 1; ++dj)
            for (int dk = -(N - 1); dk <= N - 1; ++dk) {
                std::size_t idx = static_cast<std::size_t>(di + N - 1)
                                  + static_cast<std::size_t>(W) * (dj + N - 1)
                                  + static_cast<std::size_t>(W) * W * (dk + N - 1);
                if (di == 0 && dj == 0 && dk == 0) {
                    K[idx] = pk.ball_integral(rho);
                } else {
                    double r = h * std::sqrt(static_cast<double>(di) * di
                                             + static_cast<double>(dj) * dj
                                             + static_cast<double>(dk) * dk);
                    K[idx] = vol * pk(r);
                }
            }
    struct Cell { int i, j, k; double v; };
    auto convolve = [&](auto value_of) {
        std::vector<Cell> src;
        for (int kk = 0; kk < N; ++kk)
            for (int jj = 0; jj < N; ++jj)
                for (int ii = 0; ii < N; ++ii) {
                    long flat = ii + static_cast<long>(N) * (jj + static_cast<long>(N) * kk);
                    if (!mask[flat]) continue;
                    double v = value_of(flat);
                    if (v != 0.0) src.push_back({ii, jj, kk, v});
                }
        std::vector<double> out(f.cell_count(), 0.0);
        for (int kk = 0; kk < N; ++kk)
            for (int jj = 0; jj < N; ++jj)
                for (int ii = 0; ii < N; ++ii) {
                    long flat = ii + static_cast<long>(N) * (jj + static_cast<long>(N) * kk);
                    if (!mask[flat]) continue;
                    double acc = 0.0;
                    for (const Cell& s : src) {
                        std::size_t idx = static_cast<std::size_t>(ii - s.i + N - 1)
                                          + static_cast<std::size_t>(W) * (jj - s.j + N - 1)
                                          + static_cast<std::size_t>(W) * W * (kk - s.k + N - 1);
                        acc += s.v * K[idx];
                    }
                    out[flat] = acc;
                }
        return out;
    };
    auto F = convolve([&](long flat) { return f.value_at(flat); });
    for (double& v : F) v = (v > 0.0) ? std::pow(v, sigma) : 0.0;
    auto G = convolve([&](long flat) { return F[flat]; });
    double best = 0.0;
    long best_c = -1;
    for (std::size_t c = 0; c < f.cell_count(); ++c)
        if (mask[c] && G[c] > best) {
            best = G[c];
            best_c = static_cast<long>(c);
        }
    if (best_c < 0) return {0.0, 0.0};
    Vec xm = f.cell_center(best_c);
    if (argmax) *argmax = xm;
    auto direct = composite_NN(f, sigma, xm, spec);
    return {best, direct.error};
}

// radial nonlinear potential of a density on the unit ball:
//   W_sigma f(x) = int_0^3 ( int_{B_r(x)} f )^sigma  r^{-(n-2) sigma} dr / r,
// probe restricted to |x| <= 1, density extended by zero outside its grid
inline PotentialValue wolff_sigma(const Measure& f, double sigma, const Vec& x,
                                  const PotentialSpec& spec = {}) {
    spec.validate();
    check_arg(f.kind() == MeasureKind::Grid, "wolff_sigma needs a grid density");
    int n = f.dim();
    check_arg(n >= 3, "wolff_sigma requires dimension >= 3");
    check_arg(sigma > 0.0, "wolff_sigma requires sigma > 0");
    check_arg(norm2(x) <= 1.0 + 1e-12, "probe must lie in the closed unit ball");
    double s = 2.0 - (n - 2.0) * sigma; // ring exponent
    BallProfile prof(f, x, true);
    if (prof.total() == 0.0) return {0.0, 0.0};
    double r_lo = 1e-6 * 3.0;
    if (prof.nearest_mass_distance() < inf && prof.nearest_mass_distance() > 0.0)
        r_lo = std::min(r_lo, 0.49 * prof.nearest_mass_distance());
    double head = 0.0;
    if (prof.spread_mass() > 0.0) {
        r_lo = std::min(r_lo, 0.999 * prof.spread_radius());
        double dens = prof.spread_mass() / std::pow(prof.spread_radius(), n);
        double e = n * sigma + s; // = 2 sigma + 2 > 0
        head = std::pow(dens, sigma) * std::pow(r_lo, e) / e;
    }
    auto edges = log_edges(r_lo, 3.0, spec.quad_rings);
    KahanSum L, U;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double w = power_ring_weight(s, edges[i], edges[i + 1]);
        L.add(std::pow(prof.mass(edges[i]).lo, sigma) * w);
        U.add(std::pow(prof.mass(edges[i + 1]).hi, sigma) * w);
    }
    double value = 0.5 * (L.value() + U.value()) + head;
    double error = 0.5 * (U.value() - L.value());
    return {value, error};
}

// Hardy-Littlewood maximal function of a grid density (continuum-normalized
// ball averages on a quarter-octave radius ladder, clamped by sup f)
inline PotentialValue maximal(const Measure& f, const Vec& x) {
    check_arg(f.kind() == MeasureKind::Grid, "maximal needs a grid density");
    int n = f.dim();
    BallProfile prof(f, x, true);
    if (prof.total() == 0.0) return {0.0, 0.0};
    double h = f.cell_width();
    double r_hi = 0.0;
    for (long corner = 0; corner < (1L << n); ++corner) {
        Vec pt(n);
        for (int d = 0; d < n; ++d)
            pt[d] = f.box_min()[d] + ((corner >> d) & 1 ? f.box_side() : 0.0);
        r_hi = std::max(r_hi, dist(pt, x));
    }
    r_hi += prof.spread_radius();
    double best = 0.0, best_err = 0.0;
    double step = std::pow(2.0, 0.25);
    for (double r = 0.25 * h; r <= r_hi * 1.0001; r *= step) {
        auto m = prof.mass(r);
        double denom = ball_volume(n) * std::pow(r, n);
        double avg = m.mid() / denom;
        if (avg > best) {
            best = avg;
            best_err = m.half_width() / denom;
        }
    }
    if (best > f.max_value()) {
        best_err += best - f.max_value();
        best = f.max_value();
    }
    return {best, best_err};
}

inline Measure scale_measure(const Measure& mu, double t) { return mu.scaled(t); }

inline double sup_norm(const Measure& f) {
    check_arg(f.kind() == MeasureKind::Grid, "sup_norm needs a grid density");
    return f.max_value();
}

inline double lp_norm(const Measure& f, double s) {
    check_arg(f.kind() == MeasureKind::Grid, "lp_norm needs a grid density");
    check_arg(s > 0.0, "lp_norm needs a positive exponent");
    KahanSum acc;
    for (std::size_t c = 0; c < f.cell_count(); ++c)
        if (f.value_at(c) > 0.0) acc.add(std::pow(f.value_at(c), s));
    return std::pow(acc.value() * f.cell_volume(), 1.0 / s);
}

// single dispatcher used by the CLI
inline PotentialValue evaluate(PotentialOp op, const Measure& mu, const Vec& x,
                               const PotentialSpec& spec) {
    switch (op) {
        case PotentialOp::riesz_layercake: return riesz_layercake(mu, spec.alpha, x, spec);
        case PotentialOp::riesz_kernel: return riesz_kernel(mu, spec.alpha, x);
        case PotentialOp::newtonian_ball: return newtonian_ball(mu, x);
        case PotentialOp::truncated_newtonian: return truncated_newtonian(mu, spec.trunc_R, x);
        case PotentialOp::bessel: return bessel(mu, spec.alpha, x);
        case PotentialOp::wolff: return wolff(mu, spec.alpha, spec.p, spec.c, x, spec);
        case PotentialOp::havin_mazya: return havin_mazya(mu, spec.alpha, spec.p, x, spec);
        case PotentialOp::v_potential: return v_potential(mu, spec.alpha, spec.p, x, spec);
        case PotentialOp::composite_NN: return composite_NN(mu, spec.sigma, x, spec);
        case PotentialOp::wolff_sigma: return wolff_sigma(mu, spec.sigma, x, spec);
        case PotentialOp::maximal: return maximal(mu, x);
    }
    check_arg(false, "unhandled potential op");
    return {};
}

} // namespace nlpot
