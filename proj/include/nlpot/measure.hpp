#pragma once

#include <algorithm>
#include <utility>

#include "core.hpp"

namespace nlpot {

enum class MeasureKind { Atomic, Grid, Radial };

struct MassInterval {
    double lo = 0.0, hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
};

// Nonnegative finite measures in three concrete shapes:
//   Atomic - finitely many point masses
//   Grid   - density values at the centers of a cubic lattice over a box;
//            the mass of a cell is value * cell volume
//   Radial - mass concentrated on spheres about the origin; cumulative_mass[k]
//            is the total mass within radius knot_radii[k] (step profile)
class Measure {
public:
    static Measure atomic(int n, std::vector<Vec> points, Vec masses) {
        require_dim(n);
        check_arg(points.size() == masses.size(), "atomic measure needs one mass per point");
        for (const Vec& p : points)
            check_arg(static_cast<int>(p.size()) == n, "atomic point has wrong dimension");
        for (double m : masses) require(m >= 0.0, "masses must be nonnegative");
        Measure mu;
        mu.kind_ = MeasureKind::Atomic;
        mu.n_ = n;
        mu.points_ = std::move(points);
        mu.masses_ = std::move(masses);
        return mu;
    }

    static Measure grid(int n, Vec box_min, double box_side, int cells_per_axis, Vec values) {
        require_dim(n);
        check_arg(n <= 3, "grid measures support dimensions 2 and 3");
        check_arg(static_cast<int>(box_min.size()) == n, "box_min has wrong dimension");
        require(box_side > 0.0, "box side must be positive");
        check_arg(cells_per_axis >= 1, "cells_per_axis must be positive");
        std::size_t count = 1;
        for (int d = 0; d < n; ++d) count *= static_cast<std::size_t>(cells_per_axis);
        check_arg(values.size() == count, "grid values must have cells_per_axis^n entries");
        for (double v : values) require(v >= 0.0, "density values must be nonnegative");
        Measure mu;
        mu.kind_ = MeasureKind::Grid;
        mu.n_ = n;
        mu.box_min_ = std::move(box_min);
        mu.side_ = box_side;
        mu.cells_ = cells_per_axis;
        mu.values_ = std::move(values);
        return mu;
    }

    static Measure radial(int n, Vec knot_radii, Vec cumulative_mass) {
        require_dim(n);
        check_arg(knot_radii.size() == cumulative_mass.size() && !knot_radii.empty(),
                  "radial measure needs matching nonempty knot/cumulative arrays");
        for (std::size_t i = 0; i < knot_radii.size(); ++i) {
            require(knot_radii[i] >= 0.0, "knot radii must be nonnegative");
            if (i) require(knot_radii[i] > knot_radii[i - 1], "knot radii must be strictly increasing");
            require(cumulative_mass[i] >= (i ? cumulative_mass[i - 1] : 0.0),
                    "cumulative mass must be nondecreasing and nonnegative");
        }
        Measure mu;
        mu.kind_ = MeasureKind::Radial;
        mu.n_ = n;
        mu.knots_ = std::move(knot_radii);
        mu.cum_ = std::move(cumulative_mass);
        return mu;
    }

    MeasureKind kind() const { return kind_; }
    int dim() const { return n_; }

    double total_mass() const {
        switch (kind_) {
            case MeasureKind::Atomic: {
                KahanSum s;
                for (double m : masses_) s.add(m);
                return s.value();
            }
            case MeasureKind::Grid: {
                KahanSum s;
                for (double v : values_) s.add(v);
                return s.value() * cell_volume();
            }
            case MeasureKind::Radial:
                return cum_.back();
        }
        return 0.0;
    }

    void scale(double t) {
        require(t >= 0.0, "measure scaling factor must be nonnegative");
        for (double& m : masses_) m *= t;
        for (double& v : values_) v *= t;
        for (double& c : cum_) c *= t;
    }

    Measure scaled(double t) const {
        Measure mu = *this;
        mu.scale(t);
        return mu;
    }

    // --- grid geometry ------------------------------------------------------
    int cells_per_axis() const { return cells_; }
    double cell_width() const { return side_ / cells_; }
    double cell_volume() const { return std::pow(cell_width(), n_); }
    // radius of the ball with the same volume as one cell
    double equal_volume_radius() const {
        return cell_width() * std::pow(1.0 / ball_volume(n_), 1.0 / n_);
    }
    std::size_t cell_count() const { return values_.size(); }
    const Vec& values() const { return values_; }
    double value_at(std::size_t flat) const { return values_[flat]; }
    void set_value(std::size_t flat, double v) {
        require(v >= 0.0, "density values must be nonnegative");
        values_[flat] = v;
    }
    const Vec& box_min() const { return box_min_; }
    double box_side() const { return side_; }

    Vec cell_center(std::size_t flat) const {
        Vec c(n_);
        std::size_t rest = flat;
        for (int d = 0; d < n_; ++d) {
            std::size_t idx = rest % cells_;
            rest /= cells_;
            c[d] = box_min_[d] + cell_width() * (idx + 0.5);
        }
        return c;
    }

    // flat index of the cell containing x, or -1 if x is outside the box
    long long cell_index_of(const Vec& x) const {
        check_arg(static_cast<int>(x.size()) == n_, "point has wrong dimension");
        long long flat = 0, stride = 1;
        for (int d = 0; d < n_; ++d) {
            double t = (x[d] - box_min_[d]) / cell_width();
            if (t < 0.0 || t >= cells_) return -1;
            flat += stride * static_cast<long long>(t);
            stride *= cells_;
        }
        return flat;
    }

    double max_value() const {
        double m = 0;
        for (double v : values_) m = std::max(m, v);
        return m;
    }

    // --- atomic / radial accessors -----------------------------------------
    const std::vector<Vec>& points() const { return points_; }
    const Vec& masses() const { return masses_; }
    const Vec& knots() const { return knots_; }
    const Vec& cumulative() const { return cum_; }

    // midpoint-counting mass of the closed ball B_r(x); radial off-center
    // probes get the midpoint of the rigorous bracket
    double ball_mass(const Vec& x, double r) const;

    // axis-aligned bounds containing all mass
    void support_bounds(Vec& lo, Vec& hi) const {
        lo.assign(n_, 0.0);
        hi.assign(n_, 0.0);
        switch (kind_) {
            case MeasureKind::Atomic: {
                lo.assign(n_, inf);
                hi.assign(n_, -inf);
                bool any = false;
                for (std::size_t i = 0; i < points_.size(); ++i) {
                    if (masses_[i] <= 0.0) continue;
                    any = true;
                    for (int d = 0; d < n_; ++d) {
                        lo[d] = std::min(lo[d], points_[i][d]);
                        hi[d] = std::max(hi[d], points_[i][d]);
                    }
                }
                if (!any) { lo.assign(n_, 0.0); hi.assign(n_, 0.0); }
                break;
            }
            case MeasureKind::Grid:
                for (int d = 0; d < n_; ++d) {
                    lo[d] = box_min_[d];
                    hi[d] = box_min_[d] + side_;
                }
                break;
            case MeasureKind::Radial:
                for (int d = 0; d < n_; ++d) {
                    lo[d] = -knots_.back();
                    hi[d] = knots_.back();
                }
                break;
        }
    }

private:
    MeasureKind kind_ = MeasureKind::Atomic;
    int n_ = 3;
    std::vector<Vec> points_;
    Vec masses_;
    Vec box_min_;
    double side_ = 1.0;
    int cells_ = 1;
    Vec values_;
    Vec knots_, cum_;
};

// Sorted distance profile of a measure about a fixed probe.  Provides the
// monotone envelopes used by the cake quadratures.  For grid measures,
// spread_self_cell replaces the cell containing the probe by the same mass
// spread uniformly over the equal-volume ball about the probe, which keeps
// the cake and kernel routes consistent near the singularity.
class BallProfile {
public:
    BallProfile(const Measure& mu, const Vec& x, bool spread_self_cell)
        : n_(mu.dim()) {
        check_arg(static_cast<int>(x.size()) == n_, "probe has wrong dimension");
        switch (mu.kind()) {
            case MeasureKind::Atomic: {
                std::vector<std::pair<double, double>> dm;
                dm.reserve(mu.points().size());
                for (std::size_t i = 0; i < mu.points().size(); ++i) {
                    if (mu.masses()[i] <= 0.0) continue;
                    dm.emplace_back(dist(x, mu.points()[i]), mu.masses()[i]);
                }
                finish_sorted(std::move(dm));
                exact_steps_ = true;
                break;
            }
            case MeasureKind::Grid: {
                long long self = mu.cell_index_of(x);
                std::vector<std::pair<double, double>> dm;
                dm.reserve(mu.cell_count());
                double vol = mu.cell_volume();
                for (std::size_t i = 0; i < mu.cell_count(); ++i) {
                    double v = mu.value_at(i);
                    if (v <= 0.0) continue;
                    if (spread_self_cell && static_cast<long long>(i) == self) {
                        m0_ = v * vol;
                        rho_ = mu.equal_volume_radius();
                        continue;
                    }
                    dm.emplace_back(dist(x, mu.cell_center(i)), v * vol);
                }
                finish_sorted(std::move(dm));
                if (m0_ > 0.0) {
                    total_ += m0_;
                    supp_ = std::max(supp_, rho_);
                }
                break;
            }
            case MeasureKind::Radial: {
                d_ = norm2(x);
                const Vec& knots = mu.knots();
                const Vec& cum = mu.cumulative();
                if (d_ <= 1e-14 * (knots.back() + 1.0)) {
                    // centered probe: shells act as exact distance steps
                    std::vector<std::pair<double, double>> dm;
                    for (std::size_t k = 0; k < knots.size(); ++k) {
                        double delta = cum[k] - (k ? cum[k - 1] : 0.0);
                        if (delta > 0.0) dm.emplace_back(knots[k], delta);
                    }
                    finish_sorted(std::move(dm));
                    exact_steps_ = true;
                } else {
                    radial_offcenter_ = true;
                    knots_ = knots;
                    cum_ = cum;
                    total_ = cum.back();
                    supp_ = d_ + knots.back();
                    nearest_ = inf;
                    for (std::size_t k = 0; k < knots.size(); ++k) {
                        double delta = cum[k] - (k ? cum[k - 1] : 0.0);
                        if (delta > 0.0) nearest_ = std::min(nearest_, std::fabs(d_ - knots[k]));
                    }
                }
                break;
            }
        }
    }

    MassInterval mass(double r) const {
        if (r < 0.0) return {0.0, 0.0};
        MassInterval iv;
        if (radial_offcenter_) {
            iv.lo = cum_at(r - d_);
            iv.hi = (r + d_ >= knots_.back()) ? cum_.back()
                                              : cum_at(r + d_) ;
            // shells closer than d - r are entirely outside the ball
            if (d_ > r) iv.hi -= cum_at_strictly_below(d_ - r);
            if (iv.hi < iv.lo) iv.hi = iv.lo;
        } else {
            double v = prefix_at(r);
            iv.lo = iv.hi = v;
        }
        if (m0_ > 0.0) {
            double frac = (r >= rho_) ? 1.0 : std::pow(r / rho_, n_);
            iv.lo += m0_ * frac;
            iv.hi += m0_ * frac;
        }
        return iv;
    }

    double nearest_mass_distance() const { return nearest_; }
    double support_radius() const { return supp_; }
    double total() const { return total_; }
    double spread_mass() const { return m0_; }
    double spread_radius() const { return rho_; }
    int dim() const { return n_; }
    // a discrete mass sits exactly at the probe (never set for off-center
    // radial probes, where zero distance means a sphere through the probe)
    bool atom_at_probe() const { return !radial_offcenter_ && nearest_ == 0.0 && total_ > 0.0; }
    bool centered() const { return !radial_offcenter_; }
    double center_distance() const { return d_; }
    // r -> mu(B_r(x)) is an exact step function of r (atomic measures and
    // centered radial probes); grid profiles stay inexact because the cell
    // centers only approximate where the mass sits inside each cell
    bool exact_steps() const { return exact_steps_; }
    // sorted discontinuity radii of the step function (valid when exact)
    const std::vector<double>& step_radii() const { return dist_; }

private:
    void finish_sorted(std::vector<std::pair<double, double>> dm) {
        std::sort(dm.begin(), dm.end());
        dist_.resize(dm.size());
        prefix_.resize(dm.size());
        KahanSum s;
        nearest_ = inf;
        for (std::size_t i = 0; i < dm.size(); ++i) {
            dist_[i] = dm[i].first;
            s.add(dm[i].second);
            prefix_[i] = s.value();
            if (dm[i].first < nearest_) nearest_ = dm[i].first;
        }
        total_ = dm.empty() ? 0.0 : prefix_.back();
        supp_ = dm.empty() ? 0.0 : dist_.back();
    }

    double prefix_at(double r) const {
        auto it = std::upper_bound(dist_.begin(), dist_.end(), r);
        if (it == dist_.begin()) return 0.0;
        return prefix_[static_cast<std::size_t>(it - dist_.begin()) - 1];
    }

    double cum_at(double r) const {
        if (r < 0.0) return 0.0;
        auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
        if (it == knots_.begin()) return 0.0;
        return cum_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    }

    double cum_at_strictly_below(double r) const {
        auto it = std::lower_bound(knots_.begin(), knots_.end(), r);
        if (it == knots_.begin()) return 0.0;
        return cum_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    }

    int n_;
    bool radial_offcenter_ = false;
    bool exact_steps_ = false;
    double m0_ = 0.0, rho_ = 0.0, d_ = 0.0;
    std::vector<double> dist_, prefix_;
    Vec knots_, cum_;
    double nearest_ = inf, supp_ = 0.0, total_ = 0.0;
};

inline double Measure::ball_mass(const Vec& x, double r) const {
    require(r >= 0.0, "ball radius must be nonnegative");
    return BallProfile(*this, x, false).mass(r).mid();
}

// grid density sampled from a function of the cell center
template <class F>
Measure grid_from_function(int n, Vec box_min, double box_side, int cells_per_axis, F f) {
    std::size_t count = 1;
    for (int d = 0; d < n; ++d) count *= static_cast<std::size_t>(cells_per_axis);
    Vec values(count);
    Measure shape = Measure::grid(n, box_min, box_side, cells_per_axis, values);
    for (std::size_t c = 0; c < count; ++c)
        values[c] = f(shape.cell_center(c));
    return Measure::grid(n, std::move(box_min), box_side, cells_per_axis, std::move(values));
}

} // namespace nlpot
