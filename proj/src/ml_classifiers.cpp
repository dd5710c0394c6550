#include "rcsclass/ml_classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rcsclass/rng.hpp"

// Family dispatch plus the kNN and naive-Bayes learners; the tree, DA, and
// SVM learners live in their own translation units.

namespace rcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
}

std::string to_string(MlFamily f) {
    switch (f) {
        case MlFamily::knn: return "knn";
        case MlFamily::naive_bayes: return "naive_bayes";
        case MlFamily::tree: return "tree";
        case MlFamily::discriminant: return "discriminant";
        case MlFamily::svm: return "svm";
        case MlFamily::ensemble: return "ensemble";
    }
    throw ValidationError("bad ML family");
}

MlFamily ml_family_from_string(const std::string& s) {
    if (s == "knn") return MlFamily::knn;
    if (s == "naive_bayes" || s == "nb") return MlFamily::naive_bayes;
    if (s == "tree") return MlFamily::tree;
    if (s == "discriminant" || s == "da") return MlFamily::discriminant;
    if (s == "svm") return MlFamily::svm;
    if (s == "ensemble" || s == "bag") return MlFamily::ensemble;
    throw ValidationError("unknown ML family '" + s + "'");
}

std::string to_string(KnnMetric m) {
    switch (m) {
        case KnnMetric::euclidean: return "euclidean";
        case KnnMetric::chebyshev: return "chebyshev";
        case KnnMetric::cityblock: return "cityblock";
    }
    throw ValidationError("bad kNN metric");
}

KnnMetric knn_metric_from_string(const std::string& s) {
    if (s == "euclidean") return KnnMetric::euclidean;
    if (s == "chebyshev") return KnnMetric::chebyshev;
    if (s == "cityblock" || s == "manhattan") return KnnMetric::cityblock;
    throw ValidationError("unknown kNN metric '" + s + "'");
}

std::string to_string(NbMode m) {
    return m == NbMode::gaussian ? "gaussian" : "kernel";
}

NbMode nb_mode_from_string(const std::string& s) {
    if (s == "gaussian" || s == "normal") return NbMode::gaussian;
    if (s == "kernel") return NbMode::kernel;
    throw ValidationError("unknown naive-Bayes mode '" + s + "'");
}

void MlHyperparams::validate() const {
    if (knn.num_neighbors < 1) throw ValidationError("kNN needs num_neighbors >= 1");
    if (tree.min_leaf_size < 1) throw ValidationError("tree needs min_leaf_size >= 1");
    if (!(da.delta >= 0.0)) throw ValidationError("DA delta must be >= 0");
    if (!(da.gamma >= 0.0 && da.gamma <= 1.0))
        throw ValidationError("DA gamma must lie in [0, 1]");
    if (!(nb.kernel_width > 0.0))
        throw ValidationError("naive-Bayes kernel width must be positive");
    if (!(svm.box_constraint > 0.0))
        throw ValidationError("SVM box constraint must be positive");
    if (!(svm.kernel_scale > 0.0))
        throw ValidationError("SVM kernel scale must be positive");
    if (ensemble.num_learning_cycles < 1)
        throw ValidationError("ensemble needs num_learning_cycles >= 1");
    if (ensemble.min_leaf_size < 1)
        throw ValidationError("ensemble needs min_leaf_size >= 1");
}

MlHyperparams default_hyperparams(double frequency_ghz, Polarization pol) {
    (void)frequency_ghz;
    (void)pol;
    MlHyperparams hp;
    hp.knn = {1, KnnMetric::chebyshev};
    hp.tree = {26};
    hp.da = {7.9588e-5, 0.2689};
    hp.nb = {NbMode::kernel, 0.15096};
    hp.svm = {473.16, 0.0014583};
    hp.ensemble = {67, 86, true};
    return hp;
}

void LabeledFeatures::validate() const {
    if (classes.size() < 2) throw ValidationError("need at least two classes");
    if (!std::is_sorted(classes.begin(), classes.end()))
        throw ValidationError("class names must be sorted");
    if (x.size() != y.size() || x.empty())
        throw ValidationError("feature matrix and labels disagree");
    const std::size_t d = x.front().size();
    if (d == 0) throw ValidationError("feature rows are empty");
    for (const auto& row : x) {
        if (row.size() != d) throw ValidationError("ragged feature matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
    }
    for (int label : y)
        if (label < 0 || label >= static_cast<int>(classes.size()))
            throw ValidationError("label out of range");
}

double knn_distance(KnnMetric metric, std::span<const double> a,
                    std::span<const double> b) {
    double acc = 0.0;
    switch (metric) {
        case KnnMetric::euclidean:
            for (std::size_t j = 0; j < a.size(); ++j) {
                const double d = a[j] - b[j];
                acc += d * d;
            }
            return std::sqrt(acc);
        case KnnMetric::chebyshev:
            for (std::size_t j = 0; j < a.size(); ++j)
                acc = std::max(acc, std::fabs(a[j] - b[j]));
            return acc;
        case KnnMetric::cityblock:
            for (std::size_t j = 0; j < a.size(); ++j) acc += std::fabs(a[j] - b[j]);
            return acc;
    }
    throw ValidationError("bad kNN metric");
}

namespace {

std::vector<std::size_t> class_counts(const LabeledFeatures& data) {
    std::vector<std::size_t> counts(data.classes.size(), 0);
    for (int label : data.y) counts[label] += 1;
    return counts;
}

NbState train_nb(const LabeledFeatures& data,
                 const std::vector<std::vector<double>>& xs, const NbParams& p) {
    const std::size_t M = data.classes.size(), d = data.cols();
    NbState nb;
    const auto counts = class_counts(data);
    nb.log_priors.resize(M);
    for (std::size_t c = 0; c < M; ++c)
        nb.log_priors[c] =
            std::log(static_cast<double>(counts[c]) / static_cast<double>(data.rows()));
    if (p.mode == NbMode::gaussian) {
        nb.means.assign(M, std::vector<double>(d, 0.0));
        nb.variances.assign(M, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) nb.means[data.y[i]][j] += xs[i][j];
        for (std::size_t c = 0; c < M; ++c)
            for (std::size_t j = 0; j < d; ++j) nb.means[c][j] /= counts[c];
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double dev = xs[i][j] - nb.means[data.y[i]][j];
                nb.variances[data.y[i]][j] += dev * dev;
            }
        for (std::size_t c = 0; c < M; ++c) {
            if (counts[c] < 2)
                throw ValidationError("naive Bayes needs >= 2 samples per class");
            for (std::size_t j = 0; j < d; ++j) {
                nb.variances[c][j] /= (counts[c] - 1);
                if (!(nb.variances[c][j] > 0.0))
                    nb.variances[c][j] = 1e-12;  // constant feature within a class
            }
        }
    } else {
        nb.centers.assign(M, {});
        for (std::size_t i = 0; i < xs.size(); ++i)
            nb.centers[data.y[i]].push_back(xs[i]);
    }
    return nb;
}

double nb_feature_log_pdf(const NbState& nb, const NbParams& p, std::size_t c,
                          std::size_t j, double v) {
    if (p.mode == NbMode::gaussian) {
        const double var = nb.variances[c][j];
        const double dev = v - nb.means[c][j];
        return -0.5 * (kLog2Pi + std::log(var) + dev * dev / var);
    }
    // Gaussian-kernel density over the class's training values (log-sum-exp).
    const auto& rows = nb.centers[c];
    const double w = p.kernel_width;
    double hi = -kInf;
    std::vector<double> terms(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double dev = (v - rows[i][j]) / w;
        terms[i] = -0.5 * dev * dev;
        hi = std::max(hi, terms[i]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - hi);
    return hi + std::log(acc) - std::log(static_cast<double>(rows.size())) -
           0.5 * kLog2Pi - std::log(w);
}

}  // namespace

// Implemented in ml_tree.cpp / ml_da.cpp / ml_svm.cpp.
DaState train_da(const LabeledFeatures& data,
                 const std::vector<std::vector<double>>& xs, const DaParams& p);
SvmState train_svm(const LabeledFeatures& data,
                   const std::vector<std::vector<double>>& xs, const SvmParams& p,
                   std::uint64_t seed);
EnsembleState train_ensemble(const LabeledFeatures& data,
                             const std::vector<std::vector<double>>& xs,
                             const EnsembleParams& p, std::uint64_t seed);

TrainedClassifier train_ml(MlFamily family, const LabeledFeatures& data,
                           const MlHyperparams& hp, std::uint64_t seed,
                           bool standardize) {
    data.validate();
    hp.validate();
    const auto counts = class_counts(data);
    std::size_t needed = 1;
    if (family == MlFamily::knn) needed = hp.knn.num_neighbors;
    if (family == MlFamily::tree) needed = hp.tree.min_leaf_size;
    if (family == MlFamily::ensemble) needed = hp.ensemble.min_leaf_size;
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] < needed)
            throw ValidationError("class '" + data.classes[c] +
                                  "' has too few samples for this family");

    TrainedClassifier clf;
    clf.family = family;
    clf.hp = hp;
    clf.classes = data.classes;
    clf.standardized = standardize;

    const std::size_t n = data.rows(), d = data.cols();
    clf.feat_mean.assign(d, 0.0);
    clf.feat_scale.assign(d, 1.0);
    if (standardize) {
        for (const auto& row : data.x)
            for (std::size_t j = 0; j < d; ++j) clf.feat_mean[j] += row[j];
        for (std::size_t j = 0; j < d; ++j) clf.feat_mean[j] /= n;
        std::vector<double> var(d, 0.0);
        for (const auto& row : data.x)
            for (std::size_t j = 0; j < d; ++j) {
                const double dev = row[j] - clf.feat_mean[j];
                var[j] += dev * dev;
            }
        for (std::size_t j = 0; j < d; ++j) {
            const double sd = n > 1 ? std::sqrt(var[j] / (n - 1)) : 0.0;
            clf.feat_scale[j] = sd > 0.0 ? sd : 1.0;
        }
    }
    std::vector<std::vector<double>> xs = data.x;
    for (auto& row : xs)
        for (std::size_t j = 0; j < d; ++j)
            row[j] = (row[j] - clf.feat_mean[j]) / clf.feat_scale[j];

    switch (family) {
        case MlFamily::knn:
            clf.state = KnnState{xs, data.y};
            break;
        case MlFamily::naive_bayes:
            clf.state = train_nb(data, xs, hp.nb);
            break;
        case MlFamily::tree:
            clf.state = grow_tree(xs, data.y, static_cast<int>(data.classes.size()),
                                  hp.tree.min_leaf_size);
            break;
        case MlFamily::discriminant:
            clf.state = train_da(data, xs, hp.da);
            break;
        case MlFamily::svm:
            clf.state = train_svm(data, xs, hp.svm, derive_seed(seed, 0x53564dULL));
            break;
        case MlFamily::ensemble:
            clf.state =
                train_ensemble(data, xs, hp.ensemble, derive_seed(seed, 0x424147ULL));
            break;
    }
    return clf;
}

MlPrediction predict_ml(const TrainedClassifier& clf, std::span<const double> fv) {
    if (clf.classes.size() < 2) throw ValidationError("classifier has no classes");
    if (fv.size() != clf.feat_mean.size())
        throw ValidationError("feature vector length mismatch");
    for (double v : fv)
        if (!std::isfinite(v)) throw ValidationError("non-finite feature value");

    std::vector<double> z(fv.size());
    for (std::size_t j = 0; j < fv.size(); ++j)
        z[j] = (fv[j] - clf.feat_mean[j]) / clf.feat_scale[j];

    const std::size_t M = clf.classes.size();
    MlPrediction pred;
    pred.scores.assign(M, 0.0);

    switch (clf.family) {
        case MlFamily::knn: {
            const auto& st = std::get<KnnState>(clf.state);
            const std::size_t k =
                std::min<std::size_t>(clf.hp.knn.num_neighbors, st.points.size());
            // (distance, index) pairs; index tie-break keeps this deterministic.
            std::vector<std::pair<double, std::size_t>> order(st.points.size());
            for (std::size_t i = 0; i < st.points.size(); ++i)
                order[i] = {knn_distance(clf.hp.knn.metric, z, st.points[i]), i};
            std::partial_sort(order.begin(), order.begin() + k, order.end());
            for (std::size_t i = 0; i < k; ++i)
                pred.scores[st.labels[order[i].second]] += 1.0 / k;
            break;
        }
        case MlFamily::naive_bayes: {
            const auto& st = std::get<NbState>(clf.state);
            for (std::size_t c = 0; c < M; ++c) {
                double acc = st.log_priors[c];
                for (std::size_t j = 0; j < z.size(); ++j)
                    acc += nb_feature_log_pdf(st, clf.hp.nb, c, j, z[j]);
                pred.scores[c] = acc;
            }
            break;
        }
        case MlFamily::tree: {
            const auto& leaf = tree_leaf(std::get<TreeModel>(clf.state), z);
            pred.scores = leaf.probs;
            break;
        }
        case MlFamily::discriminant: {
            const auto& st = std::get<DaState>(clf.state);
            for (std::size_t c = 0; c < M; ++c) {
                double acc = st.bias[c];
                for (std::size_t j = 0; j < z.size(); ++j)
                    acc += st.coef[c][j] * z[j];
                pred.scores[c] = acc;
            }
            break;
        }
        case MlFamily::svm: {
            const auto& st = std::get<SvmState>(clf.state);
            const double s = clf.hp.svm.kernel_scale;
            for (std::size_t c = 0; c < M; ++c) {
                const auto& m = st.machines[c];
                double acc = m.bias;
                for (std::size_t i = 0; i < m.support.size(); ++i) {
                    double d2 = 0.0;
                    for (std::size_t j = 0; j < z.size(); ++j) {
                        const double dv = (z[j] - m.support[i][j]) / s;
                        d2 += dv * dv;
                    }
                    acc += m.dual[i] * std::exp(-d2);
                }
                pred.scores[c] = acc;
            }
            break;
        }
        case MlFamily::ensemble: {
            const auto& st = std::get<EnsembleState>(clf.state);
            for (const auto& tree : st.trees) {
                const auto& leaf = tree_leaf(tree, z);
                // Hard vote per tree; leaf tie goes to the smallest class.
                std::size_t vote = 0;
                for (std::size_t c = 1; c < M; ++c)
                    if (leaf.probs[c] > leaf.probs[vote]) vote = c;
                pred.scores[vote] += 1.0 / st.trees.size();
            }
            break;
        }
    }

    pred.class_index = 0;
    for (std::size_t c = 1; c < M; ++c)
        if (pred.scores[c] > pred.scores[pred.class_index])
            pred.class_index = static_cast<int>(c);
    pred.label = clf.classes[pred.class_index];
    return pred;
}

}  // namespace rcs
