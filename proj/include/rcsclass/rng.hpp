#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "rcsclass/errors.hpp"

namespace rcs {

// splitmix64 finalizer.  Used to spread user seeds and to derive independent
// stream seeds from a root seed, so that e.g. per-class and per-sample
// generators never share state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Combine a root seed with a path of indices (subsystem, class, run, ...).
inline std::uint64_t derive_seed(std::uint64_t root) { return mix64(root); }

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t head, Rest... rest) {
    return derive_seed(mix64(root ^ mix64(head)), rest...);
}

// Deterministic random source.  All stochastic code in the library draws from
// this class only, so a fixed root seed reproduces every byte of output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    // Independent substream; derived from the original seed, not the current
    // engine state, so forks are order-insensitive.
    Rng fork(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer on [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) throw NumericError("Rng::index: empty range");
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

    // Independent standard normal pair (Box-Muller).  The pair form matches
    // the circular complex noise draw, which needs both quadratures.
    std::pair<double, double> normal_pair() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    double normal() { return normal_pair().first; }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    double exponential(double mean) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -mean * std::log(u);
    }

    // Gamma(shape, rate) via Marsaglia-Tsang squeeze; shape < 1 handled by the
    // boost gamma(a+1) * U^(1/a).
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw NumericError("Rng::gamma: shape and rate must be positive");
        if (shape < 1.0) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v / rate;
        }
    }

    // Heavy-tailed Lomax draw by inverse CDF: sigma = lambda * (U^(-1/alpha) - 1).
    double lomax(double alpha, double lambda) {
        if (!(alpha > 0.0) || !(lambda > 0.0))
            throw NumericError("Rng::lomax: alpha and lambda must be positive");
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return lambda * (std::pow(u, -1.0 / alpha) - 1.0);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace rcs
