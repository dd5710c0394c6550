#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcsclass/errors.hpp"
#include "rcsclass/rng.hpp"

namespace rcs {

struct GmmComponent {
    double weight = 1.0;
    double mean = 0.0;
    double variance = 1.0;
};

struct GmmParams {
    std::vector<GmmComponent> components;

    std::size_t size() const { return components.size(); }
    void validate() const;  // weights positive and summing to ~1, variances > 0
};

double gmm_log_pdf(const GmmParams& p, double x);
double gmm_pdf(const GmmParams& p, double x);
double gmm_log_likelihood(const GmmParams& p, std::span<const double> data);
double sample(const GmmParams& p, Rng& rng);

struct EmOptions {
    double epsilon = 1e-5;        // parameter-change convergence threshold
    int max_iterations = 500;
    int restarts = 5;             // independent seeded initialisations
    double variance_floor_factor = 1e-8;  // times the overall data variance
};

struct EmTrace {
    std::vector<double> loglik_history;  // one entry per completed iteration
    int iterations = 0;
    bool converged = false;
    double epsilon = 0.0;  // the threshold the fit ran with
};

// Posterior responsibilities, row-major n x K.
std::vector<double> e_step(const GmmParams& p, std::span<const double> data);

// Weighted-moment updates; variances are floored at 1e-8 times the overall
// data variance.  Throws EstimationError when a component's total
// responsibility collapses (below 1e-10).
GmmParams m_step(std::span<const double> responsibilities,
                 std::span<const double> data);

// Full EM fit: k-means++-style seeding, best of `restarts` runs by final
// log-likelihood.  Convergence is the L2 norm of the stacked parameter change
// (weights, means, sqrt variances) dropping below epsilon.  A drop in
// log-likelihood beyond 1e-9 (possible only through the variance floor)
// reverts to the previous parameters and stops that run.
std::pair<GmmParams, EmTrace> fit_em(std::span<const double> data, int k,
                                     std::uint64_t seed, const EmOptions& = {});

enum class AicMode {
    free_params,  // penalty 2 * (3K - 1), the identifiable parameter count
    k_only,       // penalty 2 * K
};

double aic_score(const GmmParams& p, std::span<const double> data,
                 AicMode mode = AicMode::free_params);

struct KSelection {
    int best_k = 0;
    std::vector<std::pair<int, double>> scores;          // (K, AIC) successes
    std::vector<std::pair<int, std::string>> failures;   // (K, reason)
};

// Fit K = 1..k_max and keep the AIC minimiser; ties pick the smaller K.
KSelection select_k(std::span<const double> data, int k_max, std::uint64_t seed,
                    AicMode mode = AicMode::free_params, const EmOptions& = {});

}  // namespace rcs
