#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rcsclass/errors.hpp"
#include "rcsclass/features.hpp"
#include "rcsclass/signatures.hpp"

namespace rcs {

enum class MlFamily { knn, naive_bayes, tree, discriminant, svm, ensemble };

std::string to_string(MlFamily f);
MlFamily ml_family_from_string(const std::string& s);

enum class KnnMetric { euclidean, chebyshev, cityblock };
std::string to_string(KnnMetric m);
KnnMetric knn_metric_from_string(const std::string& s);

enum class NbMode { gaussian, kernel };
std::string to_string(NbMode m);
NbMode nb_mode_from_string(const std::string& s);

struct KnnParams {
    int num_neighbors = 1;
    KnnMetric metric = KnnMetric::euclidean;
};

struct TreeParams {
    int min_leaf_size = 1;
};

struct DaParams {
    double delta = 0.0;  // linear-coefficient threshold, >= 0
    double gamma = 0.0;  // covariance shrinkage toward its diagonal, in [0,1]
};

struct NbParams {
    NbMode mode = NbMode::gaussian;
    double kernel_width = 1.0;  // Gaussian KDE bandwidth (kernel mode)
};

struct SvmParams {
    double box_constraint = 1.0;  // C > 0
    double kernel_scale = 1.0;    // s in exp(-||(x-y)/s||^2)
};

struct EnsembleParams {
    int num_learning_cycles = 30;
    int min_leaf_size = 1;
    bool bootstrap = true;  // off: every tree sees the full sample
};

struct MlHyperparams {
    KnnParams knn;
    TreeParams tree;
    DaParams da;
    NbParams nb;
    SvmParams svm;
    EnsembleParams ensemble;

    void validate() const;
};

// Hyperparameter presets tuned on 25 GHz HH-polarized signatures; other
// (frequency, polarization) pairs currently map to the same preset, with the
// arguments kept so retuned presets can be added without an interface break.
MlHyperparams default_hyperparams(double frequency_ghz = 25.0,
                                  Polarization pol = Polarization::hh);

// Feature matrix with integer class labels into `classes`.
struct LabeledFeatures {
    std::vector<std::vector<double>> x;  // n rows, d columns
    std::vector<int> y;                  // n labels, each in [0, classes.size())
    std::vector<std::string> classes;    // sorted

    std::size_t rows() const { return x.size(); }
    std::size_t cols() const { return x.empty() ? 0 : x.front().size(); }
    void validate() const;
};

// --- learned state per family ------------------------------------------------

struct KnnState {
    std::vector<std::vector<double>> points;  // standardized training rows
    std::vector<int> labels;
};

struct NbState {
    // Gaussian mode: per-class per-feature moments.
    std::vector<std::vector<double>> means;      // [class][feature]
    std::vector<std::vector<double>> variances;  // [class][feature]
    // Kernel mode: per-class training rows as KDE centers.
    std::vector<std::vector<std::vector<double>>> centers;  // [class][row][feature]
    std::vector<double> log_priors;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> probs;  // class distribution of training samples here
    int count = 0;              // training samples reaching this node
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct DaState {
    std::vector<std::vector<double>> coef;  // [class][feature], delta-thresholded
    std::vector<double> bias;               // [class]
};

struct SvmMachine {
    std::vector<std::vector<double>> support;  // support vectors (standardized)
    std::vector<double> dual;                  // alpha_i * y_i per support vector
    double bias = 0.0;
};

struct SvmState {
    std::vector<SvmMachine> machines;  // one-vs-all, one per class
};

struct EnsembleState {
    std::vector<TreeModel> trees;
};

struct TrainedClassifier {
    MlFamily family = MlFamily::knn;
    MlHyperparams hp;
    std::vector<std::string> classes;
    bool standardized = true;
    std::vector<double> feat_mean;   // per-feature training mean
    std::vector<double> feat_scale;  // per-feature training std (1 where zero)
    std::variant<KnnState, NbState, TreeModel, DaState, SvmState, EnsembleState> state;
};

// Train one family.  Standardization parameters are always recorded; when
// `standardize` is false the transform is the identity.
TrainedClassifier train_ml(MlFamily family, const LabeledFeatures& data,
                           const MlHyperparams& hp, std::uint64_t seed,
                           bool standardize = true);

struct MlPrediction {
    int class_index = -1;
    std::string label;
    std::vector<double> scores;  // family-specific, parallel to classes
};

// Deterministic argmax of the family score; ties resolve to the
// lexicographically smallest class (lowest index of the sorted class list).
MlPrediction predict_ml(const TrainedClassifier& clf, std::span<const double> fv);

// --- internals shared with tests and the ensemble ---------------------------

// Grow a CART tree with Gini impurity on (already standardized) rows.  Every
// leaf keeps at least min_leaf_size of the supplied rows.
TreeModel grow_tree(const std::vector<std::vector<double>>& x,
                    const std::vector<int>& y, int num_classes,
                    int min_leaf_size);

// Class-probability vector at the leaf reached by fv.
const TreeNode& tree_leaf(const TreeModel& tree,
                          std::span<const double> fv);

double knn_distance(KnnMetric metric, std::span<const double> a,
                    std::span<const double> b);

}  // namespace rcs
