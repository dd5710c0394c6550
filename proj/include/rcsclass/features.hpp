#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rcsclass/signatures.hpp"

namespace rcs {

enum class FeatureScale { linear, dbsm };

std::string to_string(FeatureScale s);
FeatureScale feature_scale_from_string(const std::string& s);

// Summary statistics of one signature's RCS samples.  `peak` is the maximum,
// `rms` the quadratic mean sqrt(sum sigma^2 / N), `std_dev` the sample
// standard deviation (N-1 denominator), `variance` the population variance
// (N denominator), and `mode` the most frequent value after quantisation to
// 0.1 dB bins (lowest bin centre on ties).  `minimum` is only populated when
// requested; the standard seven-feature vector excludes it.
struct FeatureVector {
    double peak = 0.0;
    double rms = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
    double variance = 0.0;
    double median = 0.0;
    double mode = 0.0;
    std::optional<double> minimum;

    static const std::array<const char*, 8>& names();  // minimum last
    std::vector<double> values() const;  // 7 or 8 entries
};

// Compute features on the requested scale.  On the dbsm scale samples are
// converted to decibels first; the mode's 0.1 dB quantisation happens in the
// decibel domain on either scale and is mapped back for linear output.
FeatureVector extract_features(const RcsSignature& sig,
                               FeatureScale scale = FeatureScale::dbsm,
                               bool include_minimum = false);

// CSV export: header target_id,peak,rms,mean,std,variance,median,mode
// (plus `minimum` when any row carries it), values with %.6f.
void save_features_csv(const std::vector<std::pair<std::string, FeatureVector>>& rows,
                       const std::string& path);

}  // namespace rcs
