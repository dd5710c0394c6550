#pragma once

// Shared oracles and helpers for the unit and acceptance tests.  Everything
// here is deliberately written independently of the library internals it
// checks: integration by adaptive Simpson instead of closed forms, statistics
// by direct loops, and so on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rcsclass/densities.hpp"
#include "rcsclass/signatures.hpp"

namespace testsup {

// --- generic adaptive quadrature ---------------------------------------------

namespace detail {

template <class F>
double simpson(F& f, double a, double fa, double b, double fb, double m,
               double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F& f, double a, double fa, double b, double fb, double m,
                double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson integral of f over [a, b].
template <class F>
double integrate(F f, double a, double b, double tol = 1e-10, int depth = 60) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

// Integral of a density over [0, inf) via the substitution sigma = e^t, which
// turns power-law endpoints into exponential ones.  The bracket is found by
// scanning outward from t0 until the transformed integrand is negligible.
template <class Pdf>
double integral_over_positive_axis(Pdf pdf, double t0, double tol = 1e-9) {
    auto g = [&](double t) { return pdf(std::exp(t)) * std::exp(t); };
    double t_lo = t0, t_hi = t0;
    for (int i = 0; i < 4000 && g(t_lo) > 1e-18; ++i) t_lo -= 1.0;
    for (int i = 0; i < 4000 && g(t_hi) > 1e-18; ++i) t_hi += 1.0;
    t_lo -= 2.0;
    t_hi += 2.0;
    return integrate(g, t_lo, t_hi, tol);
}

inline double normalization(const rcs::ChiSquareParams& p) {
    return integral_over_positive_axis(
        [&](double s) { return rcs::pdf(p, s); }, std::log(p.mean_rcs));
}

inline double normalization(const rcs::GammaParams& p) {
    return integral_over_positive_axis(
        [&](double s) { return rcs::pdf(p, s); }, std::log(p.shape / p.rate));
}

// Heavy tail handled analytically: the mass above T is (1 + T/lambda)^-alpha.
inline double normalization(const rcs::GpdParams& p) {
    const double T = p.scale * (std::pow(10.0, 14.0 / p.shape) - 1.0);
    auto g = [&](double t) { return rcs::pdf(p, std::exp(t)) * std::exp(t); };
    double t_lo = std::log(p.scale);
    for (int i = 0; i < 4000 && g(t_lo) > 1e-18; ++i) t_lo -= 1.0;
    const double head = integrate(g, t_lo - 2.0, std::log(T), 1e-9);
    return head + std::pow(1.0 + T / p.scale, -p.shape);
}

// --- naive statistics oracles --------------------------------------------------

inline double naive_peak(std::span<const double> v) {
    double m = v.front();
    for (double x : v) m = std::max(m, x);
    return m;
}

inline double naive_min(std::span<const double> v) {
    double m = v.front();
    for (double x : v) m = std::min(m, x);
    return m;
}

inline double naive_mean(std::span<const double> v) {
    long double s = 0.0L;
    for (double x : v) s += x;
    return static_cast<double>(s / v.size());
}

inline double naive_rms(std::span<const double> v) {
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x) * x;
    return std::sqrt(static_cast<double>(s / v.size()));
}

inline double naive_variance_n(std::span<const double> v) {
    const double mu = naive_mean(v);
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x - mu) * (x - mu);
    return static_cast<double>(s / v.size());
}

inline double naive_std_n1(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double mu = naive_mean(v);
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x - mu) * (x - mu);
    return std::sqrt(static_cast<double>(s / (v.size() - 1)));
}

inline double naive_median(std::span<const double> v) {
    std::vector<double> c(v.begin(), v.end());
    std::sort(c.begin(), c.end());
    const std::size_t n = c.size();
    return n % 2 == 1 ? c[n / 2] : 0.5 * (c[n / 2 - 1] + c[n / 2]);
}

// Independent re-implementation of the documented mode rule: quantize the
// decibel image of every sample into 0.1 dB bins, pick the fullest bin
// (lowest bin on ties), report the smallest sample of that bin on the output
// scale.
inline double naive_mode(std::span<const double> db, std::span<const double> out) {
    std::map<long long, std::pair<int, double>> bins;  // bin -> (count, lowest)
    for (std::size_t i = 0; i < db.size(); ++i) {
        const long long key = std::llround(db[i] * 10.0);
        auto it = bins.find(key);
        if (it == bins.end())
            bins.emplace(key, std::make_pair(1, out[i]));
        else {
            it->second.first += 1;
            it->second.second = std::min(it->second.second, out[i]);
        }
    }
    int best = 0;
    double mode = 0.0;
    for (const auto& [key, cb] : bins)
        if (cb.first > best) {
            best = cb.first;
            mode = cb.second;
        }
    return mode;
}

// --- misc ---------------------------------------------------------------------

inline bool close_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

inline bool close_abs(double a, double b, double abs) {
    return std::fabs(a - b) <= abs;
}

// A positive random signature on the default grid, for property tests.
inline rcs::RcsSignature random_signature(std::uint64_t seed,
                                          std::size_t n = 180,
                                          double lo = 1e-4, double hi = 50.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    rcs::RcsSignature sig;
    sig.target_id = "rand";
    sig.frequency_ghz = 15.0;
    for (std::size_t i = 0; i < n; ++i) {
        sig.angles_deg.push_back(static_cast<double>(i) * 360.0 / n);
        sig.rcs_m2.push_back(std::exp(u(eng)));
    }
    return sig;
}

}  // namespace testsup
