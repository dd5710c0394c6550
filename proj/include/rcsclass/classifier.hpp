#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rcsclass/ml_classifiers.hpp"
#include "rcsclass/sl_classifier.hpp"

namespace rcs {

// A trained classifier of either kind plus the feature-extraction settings
// needed to run it on raw signatures.  This is the persistence unit: the JSON
// schema is versioned and documented in the README.
struct AnyClassifier {
    std::string name;  // display identifier, e.g. "tree" or "sl-gamma"
    std::variant<SlModel, TrainedClassifier> model;
    FeatureScale scale = FeatureScale::dbsm;  // ML feature scale
    bool include_minimum = false;             // optional eighth feature

    bool is_sl() const { return std::holds_alternative<SlModel>(model); }
    const std::vector<std::string>& classes() const;

    // End-to-end prediction: SL consumes the raw samples, ML families consume
    // the extracted feature vector.  `scores` (optional) receives the
    // per-class scores parallel to classes().
    std::string classify(const RcsSignature& sig,
                         std::vector<double>* scores = nullptr) const;
};

std::string classifier_to_json_string(const AnyClassifier& clf);
AnyClassifier classifier_from_json_string(const std::string& text);

void save_classifier(const AnyClassifier& clf, const std::string& path);
AnyClassifier load_classifier(const std::string& path);

}  // namespace rcs
