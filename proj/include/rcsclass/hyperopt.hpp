#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rcsclass/errors.hpp"
#include "rcsclass/ml_classifiers.hpp"

namespace rcs {

enum class DimKind { real, log_real, integer, categorical };

struct Dim {
    std::string name;
    DimKind kind = DimKind::real;
    double lo = 0.0, hi = 0.0;        // numeric kinds; log_real needs lo > 0
    std::vector<std::string> levels;  // categorical kind

    double clamp_round(double v) const;  // snap a raw value into the dim's domain
};

struct SearchSpace {
    std::vector<Dim> dims;

    void validate() const;
};

// A point lives in "user space": one entry per dim; categorical entries hold
// the level index as a double.
using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;

struct Trial {
    Point point;
    double objective = 0.0;  // +inf marks a failed evaluation
};

struct SurrogateSnapshot {
    std::vector<Point> points;
    std::vector<double> mean;      // posterior mean of the loss
    std::vector<double> variance;  // posterior variance
};

struct OptResult {
    Point best_point;
    double best_objective = 0.0;
    std::vector<Trial> trace;                  // evaluation order
    std::vector<SurrogateSnapshot> snapshots;  // filled when requested
};

struct OptOptions {
    int budget = 30;
    std::uint64_t seed = 0;
    int snapshot_grid = 0;  // > 0: record a final surrogate grid that size per axis
};

// Gaussian-process surrogate over the embedded unit cube (squared-exponential
// ARD kernel, observation-noise floor 1e-6), exposed for testing.
struct GpModel {
    std::vector<std::vector<double>> x;  // embedded training inputs
    std::vector<double> y_normalized;
    std::vector<double> length_scales;  // per embedded dim
    double signal_variance = 1.0;
    double noise_variance = 1e-6;
    double y_mean = 0.0, y_scale = 1.0;
    std::vector<double> alpha;  // K^-1 y, cached by gp_fit
};

// Kernel hyperparameters by marginal-likelihood gradient ascent in
// log-parameters.
GpModel gp_fit(const std::vector<std::vector<double>>& x,
               const std::vector<double>& y, int ascent_iterations = 60);

// Posterior (mean, variance) in the original y units.
std::pair<double, double> gp_predict(const GpModel& gp,
                                     const std::vector<double>& x);

// Bayesian optimization: Latin-hypercube start of min(5, budget) points, then
// expected improvement maximized over 1024 random candidates per iteration.
// Failed objective evaluations are recorded as +inf and excluded from the GP.
OptResult optimize(const Objective& objective, const SearchSpace& space,
                   const OptOptions& options);

// Exhaustive fallback: numeric dims take `points_per_dim` evenly spaced
// values (integers deduplicated after rounding), categorical dims enumerate
// every level; returns the exact grid minimum (first hit on ties).
OptResult grid_search(const Objective& objective, const SearchSpace& space,
                      int points_per_dim);

// --- classifier integration --------------------------------------------------

// The per-family tuning space (at most three dims, mirroring the tuned set:
// kNN neighbors+metric, tree leaf size, DA delta+gamma, NB mode+width, SVM
// C+scale, ensemble cycles+leaf size).
SearchSpace default_search_space(MlFamily family, std::size_t train_rows);

// Materialize hyperparameters from a point of `space`, starting from `base`.
MlHyperparams hyperparams_at(MlFamily family, const MlHyperparams& base,
                             const SearchSpace& space, const Point& point);

// Stratified train/holdout split closure: trains `family` at each evaluated
// point on the train part and returns the holdout misclassification rate.
// The split is fixed by `seed` across all evaluations.  Points are
// interpreted against default_search_space(family, data.rows()), so drive it
// with that exact space.
Objective holdout_objective(const LabeledFeatures& data, MlFamily family,
                            double split_fraction, std::uint64_t seed,
                            const MlHyperparams& base);

// CSV writers: iteration, one column per dim (categoricals by level name),
// loss; and the optional surrogate grid.
void write_trace_csv(const std::string& path, const SearchSpace& space,
                     const OptResult& result);
void write_surrogate_csv(const std::string& path, const SearchSpace& space,
                         const OptResult& result);

}  // namespace rcs
