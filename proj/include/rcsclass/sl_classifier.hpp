#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rcsclass/densities.hpp"
#include "rcsclass/gmm.hpp"
#include "rcsclass/signatures.hpp"

namespace rcs {

// Parametric families available to the per-class density classifier.
enum class SlFamily {
    swerling12,  // chi-square, duty m = 1 (exponential)
    swerling34,  // chi-square, duty m = 2
    gamma_mle,
    gpd_mle,
    gmm,  // Gaussian mixture on the decibel axis, component count by AIC
};

std::string to_string(SlFamily f);
SlFamily sl_family_from_string(const std::string& s);

// One class-conditional density.
struct DensityModel {
    std::variant<ChiSquareParams, GammaParams, GpdParams, GmmParams> params;

    double log_pdf_at(double x) const;
};

struct SlOptions {
    int gmm_k_max = 5;
    AicMode aic_mode = AicMode::free_params;
    EmOptions em;
    std::uint64_t seed = 0;
};

// Maximum a posteriori classifier over pooled per-class RCS samples.  All
// families except `gmm` model the linear RCS; the mixture models the decibel
// transform, where multimodal shapes are pronounced.
struct SlModel {
    SlFamily family = SlFamily::swerling12;
    std::vector<std::string> classes;        // sorted
    std::vector<DensityModel> densities;     // parallel to classes
    std::vector<double> priors;              // parallel, sum to 1
    std::vector<std::vector<double>> training_pools;  // linear samples per class
    SlOptions options;

    void validate() const;
};

// Pool every signature of each class and fit the family per class.  Each
// class needs at least 10 samples.  Class priors are uniform.
SlModel train_sl(const Dataset& data, SlFamily family, const SlOptions& = {});

// Refit the per-class densities from the stored pools (used to time the
// fit-per-decision variant); returns the refreshed model.
SlModel refit_sl(const SlModel& model);

struct SlPrediction {
    int class_index = -1;
    std::string label;
    std::vector<double> log_posteriors;  // unnormalised, parallel to classes
};

// Sum of per-sample log densities plus the log prior; the argmax wins and
// ties resolve to the lexicographically smallest class.
SlPrediction classify_sl(const SlModel& model, const RcsSignature& sig);

}  // namespace rcs
