// Command-line front end: data generation, training, classification,
// Monte Carlo sweeps, timing benchmarks, scalogram export, and
// hyperparameter search, all reproducible from one root seed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcsclass/classifier.hpp"
#include "rcsclass/cwt.hpp"
#include "rcsclass/errors.hpp"
#include "rcsclass/eval.hpp"
#include "rcsclass/hyperopt.hpp"
#include "rcsclass/ml_classifiers.hpp"
#include "rcsclass/rng.hpp"
#include "rcsclass/signatures.hpp"
#include "rcsclass/sl_classifier.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out = "out";
    int threads = 1;
};

void attach_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "Root seed for all randomness")
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker thread cap")
        ->capture_default_str();
}

// Create the output directory and echo the effective configuration (defaults
// merged with config file and flags) into it.
void prepare_out(const CLI::App& root, const CommonOpts& c) {
    fs::create_directories(c.out);
    std::ofstream echo(fs::path(c.out) / "effective_config.toml",
                       std::ios::binary);
    if (!echo)
        throw rcs::ValidationError("cannot write effective config into '" +
                                   c.out + "'");
    echo << root.config_to_str(true, true);
}

// A classifier token is a family name; the engine kind is inferred from it.
rcs::ClassifierSpec spec_for_token(const std::string& token, bool paper_aic,
                                   bool use_preset, rcs::FeatureScale scale,
                                   bool include_minimum,
                                   std::optional<double> ml_train_snr_db,
                                   int train_copies, bool sl_trains_noisy) {
    rcs::ClassifierSpec cs;
    cs.name = token;
    try {
        cs.sl_family = rcs::sl_family_from_string(token);
        cs.is_sl = true;
    } catch (const rcs::ValidationError&) {
        cs.ml_family = rcs::ml_family_from_string(token);
        cs.is_sl = false;
    }
    if (cs.is_sl) {
        cs.sl_options.aic_mode =
            paper_aic ? rcs::AicMode::k_only : rcs::AicMode::free_params;
        if (sl_trains_noisy && ml_train_snr_db) {
            cs.train_snr_db = ml_train_snr_db;
            cs.train_copies = train_copies;
        }
        return cs;
    }
    if (use_preset) cs.ml_hyperparams = rcs::default_hyperparams();
    cs.feature_scale = scale;
    cs.include_minimum = include_minimum;
    if (ml_train_snr_db) {
        cs.train_snr_db = ml_train_snr_db;
        cs.train_copies = train_copies;
    }
    return cs;
}

std::string format_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Radar cross-section target classification toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file (TOML-like key/value; flags override it)");

    // ---- gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand(
        "gen", "Generate a synthetic multi-class signature fleet CSV");
    CommonOpts gen_c;
    attach_common(gen, gen_c);
    rcs::FleetSpec fleet;
    std::string gen_pol = "vv";
    gen->add_option("--classes", fleet.num_classes, "Number of target classes")
        ->capture_default_str();
    gen->add_option("--centers", fleet.centers_per_class,
                    "Scattering centers per class")
        ->capture_default_str();
    gen->add_option("--separation-db", fleet.separation_db,
                    "Mean separation between consecutive classes (dB)")
        ->capture_default_str();
    gen->add_option("--base-sigma", fleet.base_sigma_m2,
                    "Mean RCS of the first class (m^2)")
        ->capture_default_str();
    gen->add_option("--freq", fleet.frequency_ghz, "Radar frequency (GHz)")
        ->capture_default_str();
    gen->add_option("--pol", gen_pol, "Polarization (vv|hh)")
        ->capture_default_str();
    gen->add_option("--step", fleet.grid_step_deg, "Azimuth grid step (deg)")
        ->capture_default_str();

    // ---- train --------------------------------------------------------------
    auto* train = app.add_subcommand(
        "train", "Train one classifier and persist it as model JSON");
    CommonOpts train_c;
    attach_common(train, train_c);
    std::string train_data, train_family = "swerling12", train_name;
    std::string train_scale = "dbsm", train_metric, train_nb_mode;
    bool train_paper_aic = false, train_include_min = false;
    bool train_no_standardize = false, train_no_bootstrap = false;
    bool train_preset = false;
    int train_gmm_kmax = 5, train_copies = 100;
    std::optional<double> train_snr;
    std::optional<int> opt_neighbors, opt_min_leaf, opt_cycles;
    std::optional<double> opt_delta, opt_da_gamma, opt_nb_width, opt_box,
        opt_kernel_scale;
    train->add_option("--data", train_data, "Training signature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--family", train_family,
                      "Classifier family (swerling12|swerling34|gamma|gpd|gmm|"
                      "knn|naive_bayes|tree|discriminant|svm|ensemble)")
        ->capture_default_str();
    train->add_option("--name", train_name,
                      "Model display name (default: family)");
    train->add_flag("--paper-aic", train_paper_aic,
                    "Mixture selection penalty 2K instead of 2(3K-1)");
    train->add_option("--gmm-kmax", train_gmm_kmax,
                      "Largest mixture size tried by selection")
        ->capture_default_str();
    train->add_option("--scale", train_scale, "Feature scale (linear|dbsm)")
        ->capture_default_str();
    train->add_flag("--include-minimum", train_include_min,
                    "Add the minimum as an eighth feature");
    train->add_flag("--no-standardize", train_no_standardize,
                    "Skip feature standardization");
    train->add_flag("--preset", train_preset,
                    "Start from the tuned hyperparameter presets");
    train->add_option("--train-snr", train_snr,
                      "Train on noisy copies at this SNR (dB)");
    train->add_option("--train-copies", train_copies,
                      "Noisy training copies per signature")
        ->capture_default_str();
    train->add_option("--neighbors", opt_neighbors, "kNN neighbor count");
    train->add_option("--metric", train_metric,
                      "kNN metric (euclidean|chebyshev|cityblock)");
    train->add_option("--min-leaf", opt_min_leaf,
                      "Tree/ensemble minimum leaf size");
    train->add_option("--delta", opt_delta,
                      "Discriminant linear-coefficient threshold");
    train->add_option("--da-gamma", opt_da_gamma,
                      "Discriminant covariance regularization in [0,1]");
    train->add_option("--nb-mode", train_nb_mode,
                      "Naive Bayes density (gaussian|kernel)");
    train->add_option("--nb-width", opt_nb_width, "Naive Bayes kernel width");
    train->add_option("--box-constraint", opt_box, "SVM box constraint C");
    train->add_option("--kernel-scale", opt_kernel_scale, "SVM kernel scale");
    train->add_option("--cycles", opt_cycles, "Ensemble learning cycles");
    train->add_flag("--no-bootstrap", train_no_bootstrap,
                    "Ensemble trees see the full sample");

    // ---- classify -----------------------------------------------------------
    auto* classify = app.add_subcommand(
        "classify", "Classify signatures with a persisted model");
    CommonOpts classify_c;
    attach_common(classify, classify_c);
    std::string classify_model, classify_data;
    classify->add_option("--model", classify_model, "Model JSON path")
        ->required();
    classify->add_option("--data", classify_data, "Signature CSV to classify")
        ->required();

    // ---- sweep --------------------------------------------------------------
    auto* sweep = app.add_subcommand(
        "sweep", "Monte Carlo accuracy-vs-SNR experiment with CSV reports");
    CommonOpts sweep_c;
    attach_common(sweep, sweep_c);
    std::string sweep_data, sweep_scale = "dbsm";
    std::vector<std::string> sweep_tokens = {
        "swerling12", "swerling34", "gamma",        "gpd",
        "gmm",        "knn",        "naive_bayes",  "tree",
        "discriminant", "svm",      "ensemble"};
    std::vector<double> sweep_snr = {-5.0, -3.0, 0.0, 3.0, 5.0, 8.0, 10.0};
    int sweep_runs = 10, sweep_tests = 50, sweep_copies = 100;
    double sweep_train_snr = 10.0, sweep_az_center = 0.0;
    std::optional<double> sweep_az_halfwidth;
    bool sweep_paper_aic = false, sweep_include_min = false;
    bool sweep_sl_noisy = false, sweep_preset = false;
    sweep->add_option("--data", sweep_data, "Training signature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--classifiers", sweep_tokens,
                      "Families to evaluate (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--snr", sweep_snr, "SNR grid in dB (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--runs", sweep_runs, "Monte Carlo repetitions")
        ->capture_default_str();
    sweep->add_option("--tests", sweep_tests, "Test signatures per class per run")
        ->capture_default_str();
    sweep->add_option("--train-snr", sweep_train_snr,
                      "Training-copy SNR for feature-based families (dB)")
        ->capture_default_str();
    sweep->add_option("--train-copies", sweep_copies,
                      "Noisy training copies per signature")
        ->capture_default_str();
    sweep->add_flag("--train-sl-noisy", sweep_sl_noisy,
                    "Statistical families also train on the noisy copies");
    sweep->add_option("--azimuth-center", sweep_az_center,
                      "Azimuth window center (deg)")
        ->capture_default_str();
    sweep->add_option("--azimuth-halfwidth", sweep_az_halfwidth,
                      "Restrict tests to +/- this azimuth half-width (deg)");
    sweep->add_flag("--paper-aic", sweep_paper_aic,
                    "Mixture selection penalty 2K instead of 2(3K-1)");
    sweep->add_flag("--preset", sweep_preset,
                    "Use the 25 GHz HH-tuned hyperparameter presets");
    sweep->add_option("--scale", sweep_scale, "Feature scale (linear|dbsm)")
        ->capture_default_str();
    sweep->add_flag("--include-minimum", sweep_include_min,
                    "Add the minimum as an eighth feature");

    // ---- bench --------------------------------------------------------------
    auto* bench = app.add_subcommand(
        "bench", "Per-signature classification timing benchmark");
    CommonOpts bench_c;
    attach_common(bench, bench_c);
    std::string bench_data;
    std::vector<std::string> bench_tokens = {"swerling12", "tree"};
    int bench_reps = 5, bench_copies = 100, bench_test_copies = 5;
    double bench_train_snr = 10.0, bench_test_snr = 10.0;
    bool bench_refit = false, bench_paper_aic = false, bench_sl_noisy = false;
    bool bench_preset = false;
    bench->add_option("--data", bench_data, "Training signature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    bench->add_option("--classifiers", bench_tokens,
                      "Families to time (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--reps", bench_reps, "Measured repetitions (>= 3)")
        ->capture_default_str();
    bench->add_option("--train-snr", bench_train_snr,
                      "Training-copy SNR for feature-based families (dB)")
        ->capture_default_str();
    bench->add_option("--train-copies", bench_copies,
                      "Noisy training copies per signature")
        ->capture_default_str();
    bench->add_flag("--train-sl-noisy", bench_sl_noisy,
                    "Statistical families also train on the noisy copies");
    bench->add_option("--test-snr", bench_test_snr, "Test signature SNR (dB)")
        ->capture_default_str();
    bench->add_option("--test-copies", bench_test_copies,
                      "Noisy test copies per signature")
        ->capture_default_str();
    bench->add_flag("--refit-timing", bench_refit,
                    "Refit statistical densities before every decision");
    bench->add_flag("--paper-aic", bench_paper_aic,
                    "Mixture selection penalty 2K instead of 2(3K-1)");
    bench->add_flag("--preset", bench_preset,
                    "Use the 25 GHz HH-tuned hyperparameter presets");

    // ---- scalogram ----------------------------------------------------------
    auto* scalogram = app.add_subcommand(
        "scalogram", "Export wavelet scalogram images of each signature");
    CommonOpts scalogram_c;
    attach_common(scalogram, scalogram_c);
    std::string scal_data, scal_scale = "dbsm";
    int scal_size = 227, scal_scales = 64, scal_levels = 128;
    bool scal_csv = false;
    scalogram->add_option("--data", scal_data, "Signature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    scalogram->add_option("--size", scal_size, "Output image size in pixels")
        ->check(CLI::IsMember({224, 227}))
        ->capture_default_str();
    scalogram->add_option("--scales", scal_scales, "Number of wavelet scales")
        ->capture_default_str();
    scalogram->add_option("--levels", scal_levels, "Colormap levels (<= 128)")
        ->capture_default_str();
    scalogram
        ->add_option("--scale", scal_scale,
                     "Sample scale fed to the transform (linear|dbsm)")
        ->capture_default_str();
    scalogram->add_flag("--write-csv", scal_csv,
                        "Also write the raw magnitude matrix CSV");

    // ---- hyperopt -----------------------------------------------------------
    auto* hyperopt = app.add_subcommand(
        "hyperopt", "Surrogate-based hyperparameter search for one family");
    CommonOpts hyperopt_c;
    attach_common(hyperopt, hyperopt_c);
    std::string hopt_data, hopt_family, hopt_scale = "dbsm";
    int hopt_budget = 30, hopt_grid = 0, hopt_snapshot = 0, hopt_copies = 20;
    double hopt_split = 0.7, hopt_train_snr = 10.0;
    bool hopt_include_min = false;
    hyperopt->add_option("--data", hopt_data, "Training signature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    hyperopt
        ->add_option("--family", hopt_family,
                     "Family to tune (knn|naive_bayes|tree|discriminant|svm|"
                     "ensemble)")
        ->required();
    hyperopt->add_option("--budget", hopt_budget, "Objective evaluations (>= 5)")
        ->capture_default_str();
    hyperopt->add_option("--split", hopt_split, "Training fraction of the split")
        ->capture_default_str();
    hyperopt->add_option("--grid", hopt_grid,
                         "Exhaustive grid with this many points per dimension "
                         "instead of the surrogate loop");
    hyperopt->add_option("--snapshot-grid", hopt_snapshot,
                         "Surrogate grid resolution to export (0 = off)");
    hyperopt->add_option("--train-snr", hopt_train_snr,
                         "Training-copy SNR (dB)")
        ->capture_default_str();
    hyperopt->add_option("--train-copies", hopt_copies,
                         "Noisy training copies per signature")
        ->capture_default_str();
    hyperopt->add_option("--scale", hopt_scale, "Feature scale (linear|dbsm)")
        ->capture_default_str();
    hyperopt->add_flag("--include-minimum", hopt_include_min,
                       "Add the minimum as an eighth feature");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version: print and exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage hint
        return 2;
    }

    // ---- dispatch -----------------------------------------------------------
    if (gen->parsed()) {
        if (fleet.num_classes < 2)
            throw rcs::ValidationError(
                "--classes must be >= 2 (classification needs two classes)");
        fleet.polarization = rcs::polarization_from_string(gen_pol);
        fleet.seed = gen_c.seed;
        prepare_out(app, gen_c);
        const rcs::Dataset data = rcs::generate_fleet(fleet);
        const std::string path = (fs::path(gen_c.out) / "fleet.csv").string();
        rcs::save_csv(data, path);
        std::cout << "wrote " << path << " (" << data.class_names.size()
                  << " classes, " << data.signatures.size() << " signatures)\n";
        return 0;
    }

    if (train->parsed()) {
        prepare_out(app, train_c);
        rcs::ClassifierSpec cs = spec_for_token(
            train_family, train_paper_aic, train_preset,
            rcs::feature_scale_from_string(train_scale), train_include_min,
            train_snr, train_copies, true);
        if (!train_name.empty()) cs.name = train_name;
        cs.standardize = !train_no_standardize;
        cs.sl_options.gmm_k_max = train_gmm_kmax;
        if (!cs.is_sl) {
            auto& hp = cs.ml_hyperparams;
            if (opt_neighbors) hp.knn.num_neighbors = *opt_neighbors;
            if (!train_metric.empty())
                hp.knn.metric = rcs::knn_metric_from_string(train_metric);
            if (opt_min_leaf) {
                hp.tree.min_leaf_size = *opt_min_leaf;
                hp.ensemble.min_leaf_size = *opt_min_leaf;
            }
            if (opt_delta) hp.da.delta = *opt_delta;
            if (opt_da_gamma) hp.da.gamma = *opt_da_gamma;
            if (!train_nb_mode.empty())
                hp.nb.mode = rcs::nb_mode_from_string(train_nb_mode);
            if (opt_nb_width) hp.nb.kernel_width = *opt_nb_width;
            if (opt_box) hp.svm.box_constraint = *opt_box;
            if (opt_kernel_scale) hp.svm.kernel_scale = *opt_kernel_scale;
            if (opt_cycles) hp.ensemble.num_learning_cycles = *opt_cycles;
            if (train_no_bootstrap) hp.ensemble.bootstrap = false;
        }
        const rcs::Dataset data = rcs::load_csv(train_data);
        const rcs::AnyClassifier model =
            rcs::train_classifier(data, cs, train_c.seed);
        const std::string path = (fs::path(train_c.out) / "model.json").string();
        rcs::save_classifier(model, path);
        std::cout << "wrote " << path << " (" << cs.name << ", "
                  << model.classes().size() << " classes)\n";
        return 0;
    }

    if (classify->parsed()) {
        prepare_out(app, classify_c);
        const rcs::AnyClassifier model = rcs::load_classifier(classify_model);
        const rcs::Dataset data = rcs::load_csv(classify_data);
        for (const auto& sig : data.signatures) {
            std::vector<double> scores;
            const std::string label = model.classify(sig, &scores);
            std::cout << sig.target_id << " -> " << label;
            const auto& classes = model.classes();
            for (std::size_t i = 0; i < classes.size(); ++i)
                std::cout << (i ? " " : "  [") << classes[i] << "="
                          << format_num(scores[i]);
            std::cout << "]\n";
        }
        return 0;
    }

    if (sweep->parsed()) {
        prepare_out(app, sweep_c);
        rcs::ExperimentSpec es;
        for (const auto& token : sweep_tokens)
            es.classifiers.push_back(spec_for_token(
                token, sweep_paper_aic, sweep_preset,
                rcs::feature_scale_from_string(sweep_scale), sweep_include_min,
                sweep_train_snr, sweep_copies, sweep_sl_noisy));
        es.snr_grid_db = sweep_snr;
        es.runs = sweep_runs;
        es.tests_per_class = sweep_tests;
        es.seed = sweep_c.seed;
        es.threads = sweep_c.threads;
        if (sweep_az_halfwidth)
            es.azimuth_window =
                rcs::AzimuthWindow{sweep_az_center, *sweep_az_halfwidth};
        const rcs::Dataset data = rcs::load_csv(sweep_data);
        const rcs::EvalReport report = rcs::run_experiment(data, es);
        rcs::save_report(report, (fs::path(sweep_c.out) / "report.json").string());
        rcs::write_report_csvs(sweep_c.out, report);
        std::cout << "classifier";
        for (double snr : report.snr_grid_db)
            std::cout << "  " << format_num(snr) << "dB";
        std::cout << "\n";
        for (const auto& res : report.per_classifier) {
            std::cout << res.name;
            for (const auto& cell : res.cells)
                std::cout << "  "
                          << (cell.failed ? std::string("failed")
                                          : format_num(cell.accuracy_mean));
            std::cout << "\n";
        }
        std::cout << "wrote report.json and CSV reports into " << sweep_c.out
                  << "\n";
        return 0;
    }

    if (bench->parsed()) {
        prepare_out(app, bench_c);
        const rcs::Dataset data = rcs::load_csv(bench_data);
        std::vector<rcs::BenchTarget> targets;
        for (const auto& token : bench_tokens) {
            const rcs::ClassifierSpec cs = spec_for_token(
                token, bench_paper_aic, bench_preset, rcs::FeatureScale::dbsm,
                false, bench_train_snr, bench_copies, bench_sl_noisy);
            rcs::BenchTarget t;
            t.classifier = rcs::train_classifier(data, cs, bench_c.seed);
            t.refit = bench_refit && cs.is_sl;
            targets.push_back(std::move(t));
        }
        const rcs::Dataset tests = rcs::augment_with_noise(
            data, bench_test_snr, bench_test_copies,
            rcs::derive_seed(bench_c.seed, 0x62656e63ULL));
        const auto rows =
            rcs::benchmark_timing(targets, tests.signatures, bench_reps);
        const std::string path = (fs::path(bench_c.out) / "timing.csv").string();
        rcs::write_benchmark_csv(path, rows);
        for (const auto& row : rows)
            std::cout << row.name << ": " << format_num(row.total.mean_ms)
                      << " ms/signature (extract "
                      << format_num(row.extract.mean_ms) << ", predict "
                      << format_num(row.predict.mean_ms) << ")\n";
        std::cout << "wrote " << path << "\n";
        return 0;
    }

    if (scalogram->parsed()) {
        prepare_out(app, scalogram_c);
        const rcs::Dataset data = rcs::load_csv(scal_data);
        const rcs::FeatureScale scale =
            rcs::feature_scale_from_string(scal_scale);
        std::map<std::string, int> seen;
        for (const auto& sig : data.signatures) {
            std::vector<double> sequence = sig.rcs_m2;
            if (scale == rcs::FeatureScale::dbsm)
                for (double& v : sequence) v = rcs::m2_to_dbsm(v);
            const rcs::Scalogram sc = rcs::cwt_transform(sequence, scal_scales);
            const rcs::Image img =
                rcs::process_scalogram(sc, scal_size, scal_levels);
            std::string base = sig.target_id + "_" +
                               format_num(sig.frequency_ghz) + "_" +
                               rcs::to_string(sig.polarization);
            const int n = ++seen[base];
            if (n > 1) base += "_" + std::to_string(n);
            const std::string png =
                (fs::path(scalogram_c.out) / (base + ".png")).string();
            rcs::write_png(png, img);
            if (img.degenerate)
                std::cerr << "warning: degenerate (flat) magnitudes for " << base
                          << "; wrote a uniform mid-colormap image\n";
            if (scal_csv)
                rcs::write_matrix_csv(
                    (fs::path(scalogram_c.out) / (base + ".csv")).string(), sc);
            std::cout << "wrote " << png << "\n";
        }
        return 0;
    }

    if (hyperopt->parsed()) {
        prepare_out(app, hyperopt_c);
        const rcs::MlFamily family = rcs::ml_family_from_string(hopt_family);
        const rcs::Dataset data = rcs::load_csv(hopt_data);
        const rcs::Dataset augmented = rcs::augment_with_noise(
            data, hopt_train_snr, hopt_copies,
            rcs::derive_seed(hyperopt_c.seed, 0x686f7074ULL));
        const rcs::LabeledFeatures lf = rcs::features_of(
            augmented, rcs::feature_scale_from_string(hopt_scale),
            hopt_include_min);
        const rcs::SearchSpace space =
            rcs::default_search_space(family, lf.rows());
        const rcs::MlHyperparams base;
        const rcs::Objective objective = rcs::holdout_objective(
            lf, family, hopt_split, hyperopt_c.seed, base);
        rcs::OptResult result;
        if (hopt_grid > 0) {
            result = rcs::grid_search(objective, space, hopt_grid);
        } else {
            rcs::OptOptions oo;
            oo.budget = hopt_budget;
            oo.seed = hyperopt_c.seed;
            oo.snapshot_grid = hopt_snapshot;
            result = rcs::optimize(objective, space, oo);
        }
        rcs::write_trace_csv(
            (fs::path(hyperopt_c.out) / "optimization_trace.csv").string(),
            space, result);
        if (!result.snapshots.empty())
            rcs::write_surrogate_csv(
                (fs::path(hyperopt_c.out) / "surrogate_grid.csv").string(),
                space, result);
        json best;
        best["schema"] = "rcsclass-hyperopt";
        best["version"] = 1;
        best["family"] = rcs::to_string(family);
        best["best_objective"] = result.best_objective;
        best["trials"] = result.trace.size();
        json point = json::object();
        for (std::size_t i = 0; i < space.dims.size(); ++i) {
            const auto& d = space.dims[i];
            if (d.kind == rcs::DimKind::categorical)
                point[d.name] =
                    d.levels.at(static_cast<std::size_t>(result.best_point[i]));
            else
                point[d.name] = result.best_point[i];
        }
        best["best_point"] = std::move(point);
        const std::string best_path =
            (fs::path(hyperopt_c.out) / "best.json").string();
        std::ofstream out(best_path, std::ios::binary);
        if (!out)
            throw rcs::ValidationError("cannot open '" + best_path +
                                       "' for writing");
        out << best.dump(2) << "\n";
        std::cout << "best holdout loss " << format_num(result.best_objective)
                  << "; wrote " << best_path << " and optimization_trace.csv\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rcs::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rcs::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const rcs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
