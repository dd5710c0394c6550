#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcsclass/classifier.hpp"
#include "rcsclass/errors.hpp"
#include "rcsclass/ml_classifiers.hpp"
#include "rcsclass/signatures.hpp"
#include "rcsclass/sl_classifier.hpp"

namespace rcs {

// One classifier configuration inside an experiment.
struct ClassifierSpec {
    std::string name;  // unique report label; also used in CSV file names
    bool is_sl = false;

    // Statistical-learning engine settings (is_sl == true).
    SlFamily sl_family = SlFamily::swerling12;
    SlOptions sl_options;

    // Feature-based machine-learning engine settings (is_sl == false).
    MlFamily ml_family = MlFamily::knn;
    MlHyperparams ml_hyperparams;
    FeatureScale feature_scale = FeatureScale::dbsm;
    bool include_minimum = false;
    bool standardize = true;

    // Train on noise-augmented copies of the clean signatures at this SNR
    // instead of the clean data itself.  `train_copies` noisy copies are made
    // of every clean signature (feature-based engines need multiple rows per
    // class, so this is their usual mode).
    std::optional<double> train_snr_db;
    int train_copies = 100;

    // Benchmarks only: refit the per-class densities before every decision
    // (the fit-per-decision variant of the statistical engine).
    bool refit_timing = false;

    void validate() const;
};

struct AzimuthWindow {
    double center_deg = 0.0;
    double half_width_deg = 60.0;
};

struct ExperimentSpec {
    std::vector<ClassifierSpec> classifiers;
    std::vector<double> snr_grid_db = {-5.0, -3.0, 0.0, 3.0, 5.0, 8.0, 10.0};
    int runs = 10;
    int tests_per_class = 50;
    // When set, test signatures are restricted to this azimuth window after
    // noise injection; training always sees the full data.
    std::optional<AzimuthWindow> azimuth_window;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

// Quantile of a sorted sample by linear interpolation at p*(n-1) (the
// inclusive method).  Exposed for testing.
double quantile_inclusive(std::span<const double> sorted_values, double p);

// Five-number summary with 1.5*IQR outlier fences: `outliers` lists values
// beyond the fences, and minimum/maximum are the whisker ends (extremes of
// the non-outlier values).
struct BoxplotStats {
    double minimum = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double maximum = 0.0;
    std::vector<double> outliers;
};

BoxplotStats boxplot_stats(std::vector<double> values);  // pre: >= 1 value

struct TimingStats {
    double mean_ms = 0.0;
    double std_ms = 0.0;
    double median_ms = 0.0;
};

// Result of one (classifier, SNR) cell.
struct CellResult {
    double snr_db = 0.0;
    // confusion[true][predicted]; rows sum to runs * tests_per_class.
    std::vector<std::vector<std::int64_t>> confusion;
    std::vector<double> run_accuracies;  // per Monte Carlo run
    double accuracy_mean = 0.0;          // equals trace/total of `confusion`
    double accuracy_std = 0.0;           // sample std over runs (0 for 1 run)
    BoxplotStats accuracy_box;
    bool failed = false;  // a training or classification error hit this cell
    std::string failure;
};

struct ClassifierResult {
    std::string name;
    std::vector<CellResult> cells;  // parallel to snr_grid_db
    // Wall-clock per classification accumulated during the experiment.
    TimingStats classify_timing;
};

struct EvalReport {
    std::vector<std::string> class_names;
    std::vector<double> snr_grid_db;
    int runs = 0;
    int tests_per_class = 0;
    bool azimuth_limited = false;
    std::vector<ClassifierResult> per_classifier;

    void validate() const;
};

// Replace each signature with `copies` seeded noisy copies at the given SNR.
Dataset augment_with_noise(const Dataset& data, double snr_db, int copies,
                           std::uint64_t seed);

// Feature matrix of a labeled dataset (row order follows data.signatures).
LabeledFeatures features_of(const Dataset& data, FeatureScale scale,
                            bool include_minimum);

// Train one classifier configuration on `data` (after optional noise
// augmentation).  `seed` drives both the augmentation and the learner.
AnyClassifier train_classifier(const Dataset& data, const ClassifierSpec& spec,
                               std::uint64_t seed);

// Full Monte Carlo experiment: train each classifier once, then for every
// (run, SNR, class, test index) synthesize a seeded noisy test signature,
// classify it with every classifier, and accumulate confusion counts,
// per-run accuracies, and per-classification timing.  Outcomes (not timings)
// are deterministic for a fixed spec; every classifier sees the identical
// test set.  A classifier whose training or prediction throws has its cells
// marked failed while the experiment continues.
EvalReport run_experiment(const Dataset& data, const ExperimentSpec& spec);

// --- timing benchmarks -------------------------------------------------------

struct BenchTarget {
    AnyClassifier classifier;
    bool refit = false;  // statistical engine: refit densities per decision
};

struct BenchmarkRow {
    std::string name;
    TimingStats total;    // per-signature end-to-end milliseconds
    TimingStats extract;  // feature-extraction share (zero for SL engines)
    TimingStats predict;  // prediction share (includes per-decision refit)
};

// Warm up once, then measure per-signature classification wall-clock over
// `repetitions` passes (single-threaded).  Preconditions: repetitions >= 3,
// at least one target and one test signature.
std::vector<BenchmarkRow> benchmark_timing(const std::vector<BenchTarget>& targets,
                                           const std::vector<RcsSignature>& tests,
                                           int repetitions);

// --- persistence -------------------------------------------------------------

// JSON round-trip is lossless: parsing the serialized report reproduces every
// field bit-for-bit.
std::string report_to_json_string(const EvalReport& report);
EvalReport report_from_json_string(const std::string& text);
void save_report(const EvalReport& report, const std::string& path);
EvalReport load_report(const std::string& path);

// CSV outputs under `dir`: accuracy_vs_snr.csv, boxplot.csv, timing.csv, and
// one confusion_<classifier>_<snr>.csv per non-failed cell.
void write_report_csvs(const std::string& dir, const EvalReport& report);

// Benchmark table as timing.csv-style CSV at `path`.
void write_benchmark_csv(const std::string& path,
                         const std::vector<BenchmarkRow>& rows);

}  // namespace rcs
