#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "core.hpp"
#include "quadrature.hpp"

namespace nlpot {

// Smooth radial bump exp(1 - 1/(1-t^2)) on [0,1), extended by zero, together
// with its total integral and the radial profile of its fundamental-kernel
// convolution.  All bumps in the singular constructions are translates and
// dilations of this one profile, so the convolution reduces to a 1-D table.
class BumpProfile {
public:
    explicit BumpProfile(int n) : n_(n) {
        require_dim(n);
        build();
    }

    int dim() const { return n_; }

    static double psi(double t) {
        if (t >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    }

    // integral of the bump over R^n
    double integral() const { return I_; }

    // mean of the kernel against the unit bump: for n >= 3 the map
    //   tau -> int psi(|z|) |tau e - z|^{2-n} dz      (|e| = 1)
    // and for n = 2 the log analogue with kernel log(4/|.|).  Exact closed
    // form outside the support; tabulated (piecewise linear) inside.
    double kernel_mean(double tau) const {
        require(tau >= 0.0, "kernel_mean needs tau >= 0");
        if (tau >= 1.0) {
            if (n_ == 2) return I_ * std::log(4.0 / tau);
            return I_ * std::pow(tau, 2.0 - n_);
        }
        double t = tau * (table_nodes - 1);
        int i = static_cast<int>(t);
        if (i >= table_nodes - 1) return val_.back();
        double frac = t - i;
        return val_[i] * (1.0 - frac) + val_[i + 1] * frac;
    }

    // minimum of the kernel mean over the closed unit ball, probed on a
    // 64-value ladder (the minimum sits on the boundary for these kernels)
    double ladder_min_kernel_mean() const {
        double m = inf;
        for (int k = 0; k < 64; ++k)
            m = std::min(m, kernel_mean(static_cast<double>(k) / 63.0));
        return m;
    }

private:
    static constexpr int table_nodes = 1025;
    static constexpr int fine = 8192; // Simpson half-intervals per table build

    void build() {
        // cumulative integrals on a fine grid; table nodes align with every
        // (fine/(table_nodes-1))-th cumulative node so no resampling happens
        static_assert(fine % (table_nodes - 1) == 0);
        int M = 2 * fine; // Simpson interval count (even)
        double h = 1.0 / M;
        std::vector<double> cPow(fine + 1), cLin(fine + 1), cLog(fine + 1);
        KahanSum aPow, aLin, aLog;
        auto fPow = [&](double s) { return psi(s) * std::pow(s, n_ - 1); };
        auto fLin = [&](double s) { return psi(s) * s; };
        auto fLog = [&](double s) { return s > 0 ? psi(s) * s * std::log(4.0 / s) : 0.0; };
        cPow[0] = cLin[0] = cLog[0] = 0.0;
        for (int k = 0; k < fine; ++k) {
            double a = 2 * k * h, m = (2 * k + 1) * h, b = (2 * k + 2) * h;
            aPow.add(h / 3.0 * (fPow(a) + 4.0 * fPow(m) + fPow(b)));
            aLin.add(h / 3.0 * (fLin(a) + 4.0 * fLin(m) + fLin(b)));
            aLog.add(h / 3.0 * (fLog(a) + 4.0 * fLog(m) + fLog(b)));
            cPow[k + 1] = aPow.value();
            cLin[k + 1] = aLin.value();
            cLog[k + 1] = aLog.value();
        }
        double A = sphere_area(n_);
        I_ = A * cPow.back();
        val_.resize(table_nodes);
        int stride = fine / (table_nodes - 1);
        for (int k = 0; k < table_nodes; ++k) {
            double tau = static_cast<double>(k) / (table_nodes - 1);
            int j = k * stride;
            if (n_ == 2) {
                double head = (k == 0) ? 0.0 : std::log(4.0 / tau) * cLin[j];
                val_[k] = A * (head + (cLog.back() - cLog[j]));
            } else {
                double head = (k == 0) ? 0.0 : std::pow(tau, 2.0 - n_) * cPow[j];
                val_[k] = A * (head + (cLin.back() - cLin[j]));
            }
        }
    }

    int n_;
    double I_ = 0.0;
    std::vector<double> val_;
};

// Bessel-type kernel G_alpha via the subordination integral
//   G_alpha(r) = (4 pi)^{-n/2} / Gamma(alpha/2) *
//                int_0^inf e^{-t - r^2/(4t)} t^{(alpha-n)/2 - 1} dt,
// tabulated once per (alpha, n) on a log radial grid.  Near zero it matches
// the Riesz kernel asymptotics c r^{alpha-n}; beyond the table it decays like
// e^{-r} and is treated as zero (r > 95).
class BesselKernel {
public:
    BesselKernel(double alpha, int n) : alpha_(alpha), n_(n) {
        require_dim(n);
        require(alpha > 0.0 && alpha < n, "bessel kernel requires 0 < alpha < n");
        build();
    }

    double alpha() const { return alpha_; }
    int dim() const { return n_; }

    double operator()(double r) const {
        require(r > 0.0, "bessel kernel needs r > 0");
        if (r >= r_hi_) return 0.0;
        if (r <= r_lo_)
            return std::exp(logg_.front() + (alpha_ - n_) * (std::log(r) - logr_.front()));
        double t = (std::log(r) - logr_.front()) / step_;
        int i = static_cast<int>(t);
        if (i >= nodes - 1) return std::exp(logg_.back());
        double frac = t - i;
        return std::exp(logg_[i] * (1.0 - frac) + logg_[i + 1] * frac);
    }

    // int_{B_rho} G(|y|) dy
    double ball_integral(double rho) const {
        require(rho > 0.0, "ball_integral needs rho > 0");
        if (rho <= r_lo_) {
            // pure power regime
            double g_lo = std::exp(logg_.front());
            return sphere_area(n_) * g_lo * std::pow(rho / r_lo_, alpha_ - n_)
                   * std::pow(rho, static_cast<double>(n_)) / alpha_;
        }
        double t = (std::log(rho) - logr_.front()) / step_;
        int i = std::min(static_cast<int>(t), nodes - 1);
        double base = head_ + (i > 0 ? cum_shell_[i] : 0.0);
        if (i < nodes - 1) {
            double frac = t - i;
            base += frac * (cum_shell_[i + 1] - cum_shell_[i]);
        }
        return base;
    }

    // int_{|y| > R} G(|y|) dy
    double integral_beyond(double R) const {
        double tot = head_ + cum_shell_.back();
        return std::max(0.0, tot - ball_integral(R));
    }

private:
    static constexpr int nodes = 8192;

    double subordination(double r) const {
        double gam = 0.5 * (alpha_ - n_);
        double q = 0.25 * r * r;
        double u_lo = std::min(std::log(q) , std::log(0.5 * r)) - 6.0;
        double u_hi = std::log(60.0 + 2.0 * r);
        auto f = [&](double u) {
            double t = std::exp(u);
            return std::exp(-t - q / t + gam * u);
        };
        double val = integrate_simpson(f, u_lo, u_hi, 2000);
        return std::pow(4.0 * pi, -0.5 * n_) / std::tgamma(0.5 * alpha_) * val;
    }

    void build() {
        r_lo_ = 1e-9;
        r_hi_ = 95.0;
        logr_.resize(nodes);
        logg_.resize(nodes);
        double la = std::log(r_lo_), lb = std::log(r_hi_);
        step_ = (lb - la) / (nodes - 1);
        for (int i = 0; i < nodes; ++i) {
            logr_[i] = la + step_ * i;
            logg_[i] = std::log(subordination(std::exp(logr_[i])));
        }
        // cumulative shell integral A int_{r_lo}^{r} G s^{n-1} ds (trapezoid
        // in log-abscissa) plus the closed-form power head below r_lo
        cum_shell_.assign(nodes, 0.0);
        double A = sphere_area(n_);
        KahanSum acc;
        for (int i = 1; i < nodes; ++i) {
            double r0 = std::exp(logr_[i - 1]), r1 = std::exp(logr_[i]);
            double f0 = std::exp(logg_[i - 1]) * std::pow(r0, static_cast<double>(n_));
            double f1 = std::exp(logg_[i]) * std::pow(r1, static_cast<double>(n_));
            acc.add(0.5 * (f0 + f1) * step_);
            cum_shell_[i] = A * acc.value();
        }
        head_ = A * std::exp(logg_.front()) * std::pow(r_lo_, static_cast<double>(n_)) / alpha_;
    }

    double alpha_;
    int n_;
    double r_lo_ = 0, r_hi_ = 0, step_ = 0, head_ = 0;
    std::vector<double> logr_, logg_, cum_shell_;
};

// process-wide cache; kernels are immutable once built
inline const BesselKernel& bessel_kernel(double alpha, int n) {
    static std::map<std::pair<double, int>, std::unique_ptr<BesselKernel>> cache;
    static std::mutex guard;
    std::lock_guard<std::mutex> lock(guard);
    auto key = std::make_pair(alpha, n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<BesselKernel>(alpha, n)).first;
    return *it->second;
}

} // namespace nlpot
