#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpot {

using Vec = std::vector<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// domain violations carry the name of the violated constraint
inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

// usage / argument errors (wrong shapes, unknown names, malformed input)
inline void check_arg(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

inline void require_dim(int n) { require(n >= 2, "dimension must be >= 2"); }

inline double sq(double x) { return x * x; }

// surface area of the unit sphere S^{n-1} in R^n
inline double sphere_area(int n) {
    require_dim(n);
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// volume of the unit ball in R^n
inline double ball_volume(int n) {
    require_dim(n);
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// fundamental kernel: r^{2-n} for n >= 3, log(2/r) for n = 2
inline double gamma_kernel(double r, int n) {
    require_dim(n);
    require(r > 0.0, "gamma_kernel requires r > 0");
    if (n == 2) return std::log(2.0 / r);
    return std::pow(r, 2.0 - n);
}

// weight in front of the measure term of the superharmonic decomposition
inline double omega_weight(int n) {
    require_dim(n);
    if (n == 2) return 1.0 / (2.0 * pi);
    return 1.0 / ((n - 2) * sphere_area(n));
}

inline double norm2(const Vec& a) {
    double s = 0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double dist(const Vec& a, const Vec& b) {
    check_arg(a.size() == b.size(), "point dimensions disagree");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
    return std::sqrt(s);
}

// compensated accumulator; keeps positive sums order-stable to ~1 ulp so the
// exact-homogeneity properties hold with margin
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// Halton low-discrepancy sequence (deterministic probe layouts)
inline double halton(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

inline Vec halton_point(std::uint64_t i, int n) {
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19};
    check_arg(n <= 8, "halton_point supports up to 8 dimensions");
    Vec p(n);
    for (int d = 0; d < n; ++d) p[d] = halton(i + 1, bases[d]);
    return p;
}

} // namespace nlpot
