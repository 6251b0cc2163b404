#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "core.hpp"

// Blow-up rate taxonomy for the coupled system: region classification in the
// (lambda, sigma) plane, the pointwise bound shapes near an isolated
// singularity and at infinity, the Moser-type integrability ladder, and the
// inversion that exchanges the two.

namespace nlpot {

// ------------------------------------------------------------ descriptors ----

enum class BoundFlavor { BigO, LittleO };

inline const char* flavor_name(BoundFlavor f) {
    return f == BoundFlavor::BigO ? "BigO" : "LittleO";
}

// One asymptotic rate: scale^{base_exponent} * log^{log_power}, where the
// scale is 1/|x| near the origin and |y| at infinity.  epsilon_slack is the
// multiplier of the arbitrary epsilon > 0 some little-o rates carry; the
// stated exponent is the epsilon -> 0 limit.
struct BoundDescriptor {
    double base_exponent = 0.0;
    double log_power = 0.0;
    BoundFlavor flavor = BoundFlavor::BigO;
    double epsilon_slack = 0.0;
};

struct SystemBounds {
    BoundDescriptor u;
    BoundDescriptor v;
};

inline bool bound_close(const BoundDescriptor& a, const BoundDescriptor& b,
                        double tol = 1e-12) {
    return std::abs(a.base_exponent - b.base_exponent) <= tol &&
           std::abs(a.log_power - b.log_power) <= tol && a.flavor == b.flavor;
}

inline std::string format_bound(const BoundDescriptor& d, bool at_infinity = false) {
    char buf[160];
    const char* scale = at_infinity ? "|y|" : "(1/|x|)";
    std::string body;
    std::snprintf(buf, sizeof(buf), "%s^%.6g", scale, d.base_exponent);
    body = buf;
    if (d.log_power != 0.0) {
        std::snprintf(buf, sizeof(buf), " log^%.6g", d.log_power);
        body += buf;
    }
    if (d.epsilon_slack != 0.0) {
        std::snprintf(buf, sizeof(buf), " (+%.6g eps)", d.epsilon_slack);
        body += buf;
    }
    return std::string(d.flavor == BoundFlavor::BigO ? "O(" : "o(") + body + ")";
}

namespace detail {

// O(Gamma) + o(scale^e): the larger rate wins; ties go to O(Gamma).
inline BoundDescriptor gamma_plus_little_o(double e, int n) {
    if (e <= n - 2.0) return {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
    return {e, 0.0, BoundFlavor::LittleO, 0.0};
}

// O(Gamma) + o(scale^e log^p): a positive log power breaks the tie.
inline BoundDescriptor gamma_plus_little_o_log(double e, double logp, int n) {
    if (e > n - 2.0 || (e == n - 2.0 && logp > 0.0))
        return {e, logp, BoundFlavor::LittleO, 0.0};
    return {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
}

}  // namespace detail

// -------------------------------------------------------------- regions ----

// sigma level below which the supercritical construction degenerates
inline double critical_sigma(double lambda, int n) {
    require(n >= 3, "critical exponent needs dimension at least 3");
    require(lambda > 0.0, "critical exponent needs lambda > 0");
    return 2.0 / (n - 2.0) + n / ((n - 2.0) * lambda);
}

enum class Region { A, B, C, D };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        default: return "D";
    }
}

// Partition of {0 <= sigma <= lambda}:
//   A: lambda <= n/(n-2)
//   B: lambda > n/(n-2), sigma below the critical curve
//   C: lambda > n/(n-2), sigma above it (up to lambda)
//   D: the critical curve itself
inline Region classify_region(double lambda, double sigma, int n) {
    require(n >= 3, "region map needs dimension at least 3");
    require(sigma >= 0.0 && sigma <= lambda,
            "region map needs 0 <= sigma <= lambda");
    if (lambda <= static_cast<double>(n) / (n - 2)) return Region::A;
    double crit = critical_sigma(lambda, n);
    if (sigma < crit) return Region::B;
    if (sigma == crit) return Region::D;
    return Region::C;
}

// Sharp pointwise rates per region, where they exist.  In regions C and D no
// pointwise bound holds (arbitrarily wild blow-up can be constructed), so
// has_bounds is false and the descriptors are meaningless there.
struct RegionOutcome {
    Region region = Region::A;
    bool has_bounds = false;
    BoundDescriptor u;
    BoundDescriptor v;
};

inline RegionOutcome sweep_cell(double lambda, double sigma, int n) {
    RegionOutcome out;
    out.region = classify_region(lambda, sigma, n);
    switch (out.region) {
        case Region::A:
            out.has_bounds = true;
            out.u = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
            out.v = out.u;
            break;
        case Region::B:
            out.has_bounds = true;
            out.u = {sq(n - 2.0) * lambda / n, 0.0, BoundFlavor::LittleO, 0.0};
            out.v = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
            break;
        default:
            out.has_bounds = false;
            break;
    }
    return out;
}

// -------------------------------------------------- bounds at the origin ----

namespace detail {

inline void check_pair_hypothesis(double lambda, double sigma, int n) {
    require(n >= 3, "bounds need dimension at least 3");
    require(lambda >= sigma && sigma >= 0.0,
            "hypothesis violated: need lambda >= sigma >= 0");
    if (lambda > 0.0)
        require(sigma < critical_sigma(lambda, n),
                "hypothesis violated: sigma must lie below the critical curve");
}

// the shared shape for the first sub-case of B, C and D: u harmonically
// bounded, v harmonically bounded unless beta is too large
inline SystemBounds quiet_case(double sigma, double beta, int n) {
    SystemBounds sb;
    sb.u = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
    if (beta <= n - (n - 2.0) * sigma)
        sb.v = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
    else
        sb.v = {(n - 2.0) * ((n - 2.0) * sigma + beta) / n, 0.0,
                BoundFlavor::LittleO, 0.0};
    return sb;
}

}  // namespace detail

// Pointwise rates as x -> 0 for 0 <= -Delta u <= |x|^{-alpha} (v + Gamma)^lambda,
// 0 <= -Delta v <= |x|^{-beta} (u + Gamma)^sigma, under the pair hypothesis.
inline SystemBounds bounds_thm37(double lambda, double sigma, int n,
                                 double alpha, double beta) {
    detail::check_pair_hypothesis(lambda, sigma, n);
    SystemBounds sb;
    const double two_over = 2.0 / (n - 2.0);

    if (sigma == 0.0) {
        if (beta <= n) {
            sb.u = detail::gamma_plus_little_o(
                (n - 2.0) * ((n - 2.0) * lambda + alpha) / n, n);
            sb.v = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
        } else {
            sb.u = detail::gamma_plus_little_o(
                (n - 2.0) * ((n - 2.0) * beta * lambda / n + alpha) / n, n);
            sb.v = {(n - 2.0) * beta / n, 0.0, BoundFlavor::LittleO, 0.0};
        }
        return sb;
    }

    if (sigma < two_over) {
        double delta = std::max((n - 2.0) * lambda + alpha,
                                ((n - 2.0) * sigma - 2.0 + beta) * lambda + alpha);
        if (delta <= n) return detail::quiet_case(sigma, beta, n);
        sb.u = {(n - 2.0) * delta / n, 0.0, BoundFlavor::LittleO, 0.0};
        double ev = (n - 2.0) * sigma - 2.0 + beta;
        sb.v = {std::max(n - 2.0, ev), 0.0, BoundFlavor::BigO, 0.0};
        return sb;
    }

    if (sigma == two_over) {
        bool quiet = (beta < n - 2.0 && (n - 2.0) * lambda + alpha <= n) ||
                     (beta >= n - 2.0 && beta * lambda + alpha < n);
        if (quiet) return detail::quiet_case(sigma, beta, n);
        if (beta < n - 2.0)
            sb.u = {(n - 2.0) * ((n - 2.0) * lambda + alpha) / n, 0.0,
                    BoundFlavor::LittleO, 0.0};
        else
            sb.u = {(n - 2.0) * (beta * lambda + alpha) / n,
                    (n - 2.0) * lambda / n, BoundFlavor::LittleO, 0.0};
        sb.v = detail::gamma_plus_little_o_log(beta, 1.0, n);
        return sb;
    }

    // sigma > 2/(n-2): the coupled exponents
    double a = lambda / n * ((n - 2.0) * sigma - 2.0);
    double b = alpha / n * ((n - 2.0) * sigma - 2.0) + beta;
    require(a > 0.0 && a < 1.0,
            "internal inconsistency: coupling exponent left (0,1)");
    double q = b / (1.0 - a);
    bool quiet = (q < n - 2.0 && (n - 2.0) * lambda <= n - alpha) ||
                 (q >= n - 2.0 && b * lambda / (1.0 - a) < n - alpha);
    if (quiet) return detail::quiet_case(sigma, beta, n);
    if (q < n - 2.0) {
        sb.u = {(n - 2.0) * ((n - 2.0) * lambda + alpha) / n, 0.0,
                BoundFlavor::LittleO, 0.0};
        sb.v = {n - 2.0, 0.0, BoundFlavor::BigO, 0.0};
    } else {
        sb.u = {(n - 2.0) * (b * lambda / (1.0 - a) + alpha) / n, 0.0,
                BoundFlavor::LittleO, (n - 2.0) / n};
        sb.v = {q, 0.0, BoundFlavor::LittleO, 1.0};
    }
    return sb;
}

// ---------------------------------------------------- bounds at infinity ----

// Rates as |y| -> infinity for 0 <= -Delta U <= (V+1)^lambda,
// 0 <= -Delta V <= (U+1)^sigma, under the same pair hypothesis.
inline SystemBounds bounds_thm36(double lambda, double sigma, int n) {
    detail::check_pair_hypothesis(lambda, sigma, n);
    SystemBounds sb;
    const double two_over = 2.0 / (n - 2.0);

    if (sigma == 0.0) {
        sb.u = {(n - 2.0) / n * (2.0 * (n - 2.0) * lambda / n + 2.0), 0.0,
                BoundFlavor::LittleO, 0.0};
        sb.v = {2.0 * (n - 2.0) / n, 0.0, BoundFlavor::LittleO, 0.0};
    } else if (sigma < two_over) {
        sb.u = {2.0 * (n - 2.0) * (lambda + 1.0) / n, 0.0, BoundFlavor::LittleO,
                0.0};
        sb.v = {2.0, 0.0, BoundFlavor::BigO, 0.0};
    } else if (sigma == two_over) {
        sb.u = {2.0 * (n - 2.0) * (lambda + 1.0) / n, (n - 2.0) * lambda / n,
                BoundFlavor::LittleO, 0.0};
        sb.v = {2.0, 1.0, BoundFlavor::LittleO, 0.0};
    } else {
        double D = (n - 2.0) * lambda * (critical_sigma(lambda, n) - sigma);
        require(D > 0.0, "internal inconsistency: decay margin not positive");
        sb.u = {2.0 * (n - 2.0) * (lambda + 1.0) / D, 0.0, BoundFlavor::LittleO,
                1.0};
        sb.v = {2.0 * (n - 2.0) * (sigma + 1.0) / D, 0.0, BoundFlavor::LittleO,
                1.0};
    }
    return sb;
}

// -------------------------------------------------------- planar variant ----

// In the plane the rates are pure log powers (base exponent 0).
inline SystemBounds bounds_2d(double lambda) {
    require(lambda >= 1.0, "planar bounds need lambda >= 1");
    SystemBounds sb;
    if (lambda == 1.0) {
        sb.u = {0.0, 1.0, BoundFlavor::BigO, 0.0};
        sb.v = sb.u;
    } else {
        sb.u = {0.0, lambda, BoundFlavor::LittleO, 0.0};
        sb.v = {0.0, 1.0, BoundFlavor::BigO, 0.0};
    }
    return sb;
}

// ----------------------------------------------------------- Moser ladder ----

// One rung of the integrability bootstrap: from -Delta u controlled in L^p we
// pass to v in L^{p2}, then u back in L^q = L^{p3/lambda}.  Infinite entries
// mark the terminal rung where sup bounds take over.
struct MoserStep {
    double p = 0, p2 = 0, p3 = 0, q = 0;
};

struct MoserTrace {
    double epsilon = 0;           // selected grid value k/16
    double C0 = 0, C1 = 0, C2 = 0;  // guaranteed per-rung gain and its two parts
    std::vector<MoserStep> steps;
    std::size_t m = 0;            // rungs taken, terminal rung included
    std::size_t step_bound = 0;   // ceil(1/C0) + 1
    bool reached_infinity = false;
};

// Bootstrap ledger: picks the smallest epsilon on the 1/16 grid satisfying
// the admissibility window, then iterates t_{k+1} = lambda sigma t_k - G,
// G = (2 - eps) lambda (sigma + 1)/n, starting from t_0 = 1.  Each rung's
// gain 1/p - 1/q is at least C0 = min(G, 1 - lambda sigma + G), so the
// ladder reaches the sup-norm regime in at most ceil(1/C0) + 1 rungs.
inline MoserTrace moser_ledger(int n, double lambda, double sigma) {
    require(n >= 3, "the ladder needs dimension at least 3");
    const double two_over = 2.0 / (n - 2.0);
    require(lambda >= sigma, "need lambda >= sigma");
    require(sigma >= two_over, "the ladder needs sigma >= 2/(n-2)");
    require(sigma < critical_sigma(lambda, n),
            "the ladder needs sigma below the critical curve");

    MoserTrace tr;
    bool found = false;
    for (int k = 1; k < 16; ++k) {
        double e = k / 16.0;
        double d = n - 2.0 + e;
        if (sigma < n / d && sigma < (2.0 - e) / d + n / (d * lambda)) {
            tr.epsilon = e;
            found = true;
            break;
        }
    }
    require(found, "no admissible epsilon on the 1/16 grid");

    const double eps = tr.epsilon;
    const double G = (2.0 - eps) * lambda * (sigma + 1.0) / n;
    tr.C1 = G;
    tr.C2 = 1.0 - lambda * sigma + G;
    tr.C0 = std::min(tr.C1, tr.C2);
    require(tr.C0 > 0.0, "per-rung gain is not positive (internal inconsistency)");
    tr.step_bound = static_cast<std::size_t>(std::ceil(1.0 / tr.C0)) + 1;

    double t = 1.0;
    const double half_n = 0.5 * n;
    const double shift = (2.0 - eps) / n;
    for (std::size_t guard = 0; guard < 1000; ++guard) {
        double p = 1.0 / t;
        if (p > half_n) {
            tr.steps.push_back({p, inf, inf, inf});
            tr.reached_infinity = true;
            break;
        }
        double p2 = 1.0 / (t - shift);
        if (p2 / sigma > half_n) {
            tr.steps.push_back({p, p2, inf, inf});
            tr.reached_infinity = true;
            break;
        }
        double inv_p3 = sigma / p2 - shift;
        if (inv_p3 <= 0.0) {
            tr.steps.push_back({p, p2, inf, inf});
            tr.reached_infinity = true;
            break;
        }
        double p3 = 1.0 / inv_p3;
        double q = p3 / lambda;
        tr.steps.push_back({p, p2, p3, q});
        double t_next = lambda * sigma * t - G;
        require(std::abs(t_next - 1.0 / q) <= 1e-9 * std::max(1.0, std::abs(t_next)),
                "rung recurrence disagrees with the exponent chain");
        t = 1.0 / q;
    }
    require(tr.reached_infinity, "ladder failed to terminate (internal error)");
    tr.m = tr.steps.size();
    require(tr.m <= tr.step_bound, "ladder exceeded its guaranteed rung bound");
    return tr;
}

// --------------------------------------------------------------- inversion ----

inline Vec kelvin_point(const Vec& x) {
    double n2 = 0.0;
    for (double c : x) n2 += c * c;
    require(n2 > 0.0, "inversion is undefined at the origin");
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / n2;
    return y;
}

// value transported by the inversion: U(y) = |x|^{n-2} u(x) with y = x/|x|^2
inline double kelvin_value(const Vec& x, double value, int n) {
    require_dim(n);
    if (n == 2) return value;
    double r = norm2(x);
    require(r > 0.0, "inversion is undefined at the origin");
    return std::pow(r, n - 2.0) * value;
}

}  // namespace nlpot
