#pragma once

#include <functional>

#include "core.hpp"
#include "gauss_tables.hpp"

namespace nlpot {

// closed-form integral of r^{s-1} over [a,b]; the s = 0 case degenerates to log
inline double power_ring_weight(double s, double a, double b) {
    require(0.0 < a && a <= b, "ring endpoints must satisfy 0 < a <= b");
    if (s == 0.0) return std::log(b / a);
    return (std::pow(b, s) - std::pow(a, s)) / s;
}

// integral of r^{s-1} e^{-c r} over [a,b]; exact for c = 0, otherwise
// 16-point Gauss on the (narrow, log-spaced) ring
inline double exp_power_ring_weight(double s, double c, double a, double b) {
    if (c == 0.0) return power_ring_weight(s, a, b);
    require(c > 0.0, "damping constant must be nonnegative");
    double mid = 0.5 * (b + a), half = 0.5 * (b - a), acc = 0.0;
    for (int i = 0; i < gauss::gauss16_count; ++i) {
        double r = mid + half * gauss::gauss16_x[i];
        acc += gauss::gauss16_w[i] * std::pow(r, s - 1.0) * std::exp(-c * r);
    }
    return acc * half;
}

// rings+1 log-spaced edges from a to b (endpoints exact)
inline std::vector<double> log_edges(double a, double b, int rings) {
    require(0.0 < a && a < b, "log-spaced edges need 0 < a < b");
    check_arg(rings >= 1, "ring count must be positive");
    std::vector<double> e(rings + 1);
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i <= rings; ++i)
        e[i] = std::exp(la + (lb - la) * i / rings);
    e.front() = a;
    e.back() = b;
    return e;
}

// composite Simpson on [a,b]
inline double integrate_simpson(const std::function<double(double)>& f,
                                double a, double b, int intervals) {
    check_arg(intervals >= 2, "Simpson needs at least 2 intervals");
    if (intervals % 2) ++intervals;
    double h = (b - a) / intervals;
    KahanSum acc;
    acc.add(f(a));
    acc.add(f(b));
    for (int i = 1; i < intervals; ++i)
        acc.add(f(a + i * h) * (i % 2 ? 4.0 : 2.0));
    return acc.value() * h / 3.0;
}

// Simpson in log-abscissa, for positive integrands smooth on a log scale
inline double integrate_log(const std::function<double(double)>& f,
                            double a, double b, int intervals) {
    require(0 < a && a < b, "log-scale integration needs 0 < a < b");
    auto g = [&](double u) { double r = std::exp(u); return f(r) * r; };
    return integrate_simpson(g, std::log(a), std::log(b), intervals);
}

} // namespace nlpot
