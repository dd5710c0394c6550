#include "rcsclass/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "rcsclass/features.hpp"
#include "rcsclass/noise.hpp"
#include "rcsclass/rng.hpp"
#include "rcsclass/threading.hpp"

namespace rcs {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

TimingStats timing_from_samples(std::vector<double> ms) {
    TimingStats t;
    if (ms.empty()) return t;
    t.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
    if (ms.size() > 1) {
        double acc = 0.0;
        for (double v : ms) acc += (v - t.mean_ms) * (v - t.mean_ms);
        t.std_ms = std::sqrt(acc / (ms.size() - 1));
    }
    std::sort(ms.begin(), ms.end());
    t.median_ms = quantile_inclusive(ms, 0.5);
    return t;
}

int class_index_of(const std::vector<std::string>& classes,
                   const std::string& label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
        throw NumericError("predicted label '" + label + "' is not a known class");
    return static_cast<int>(it - classes.begin());
}

std::string sanitize_for_filename(const std::string& s) {
    std::string out;
    for (char c : s)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                              c == '_'
                          ? c
                          : '_');
    return out;
}

std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void ClassifierSpec::validate() const {
    if (name.empty()) throw ValidationError("classifier config needs a name");
    if (train_snr_db && train_copies < 1)
        throw ValidationError("train_copies must be >= 1");
    if (!is_sl) ml_hyperparams.validate();
}

void ExperimentSpec::validate() const {
    if (classifiers.empty())
        throw ValidationError("experiment needs at least one classifier");
    for (const auto& c : classifiers) c.validate();
    for (std::size_t i = 0; i < classifiers.size(); ++i)
        for (std::size_t j = i + 1; j < classifiers.size(); ++j)
            if (classifiers[i].name == classifiers[j].name)
                throw ValidationError("duplicate classifier name '" +
                                      classifiers[i].name + "'");
    if (runs < 1) throw ValidationError("runs must be >= 1");
    if (tests_per_class < 1)
        throw ValidationError("tests_per_class must be >= 1");
    if (snr_grid_db.empty()) throw ValidationError("SNR grid must be non-empty");
    if (azimuth_window && !(azimuth_window->half_width_deg > 0.0))
        throw ValidationError("azimuth half-width must be positive");
}

void EvalReport::validate() const {
    const auto total = static_cast<std::int64_t>(runs) * tests_per_class;
    for (const auto& clf : per_classifier) {
        if (clf.cells.size() != snr_grid_db.size())
            throw ValidationError("report cells do not match the SNR grid");
        for (const auto& cell : clf.cells) {
            if (cell.failed) continue;
            if (cell.confusion.size() != class_names.size())
                throw ValidationError("confusion matrix is not M x M");
            for (const auto& row : cell.confusion) {
                if (row.size() != class_names.size())
                    throw ValidationError("confusion matrix is not M x M");
                const auto sum =
                    std::accumulate(row.begin(), row.end(), std::int64_t{0});
                if (sum != total)
                    throw ValidationError(
                        "confusion row does not sum to runs * tests_per_class");
            }
            if (!(cell.accuracy_mean >= 0.0 && cell.accuracy_mean <= 1.0))
                throw ValidationError("accuracy outside [0, 1]");
            std::int64_t trace = 0, all = 0;
            for (std::size_t i = 0; i < cell.confusion.size(); ++i) {
                trace += cell.confusion[i][i];
                all += std::accumulate(cell.confusion[i].begin(),
                                       cell.confusion[i].end(), std::int64_t{0});
            }
            const double acc = static_cast<double>(trace) / all;
            if (std::abs(acc - cell.accuracy_mean) > 1e-12)
                throw ValidationError(
                    "accuracy_mean disagrees with the confusion trace");
        }
    }
}

double quantile_inclusive(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty())
        throw ValidationError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("quantile level must lie in [0, 1]");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double t = h - static_cast<double>(lo);
    return sorted_values[lo] + t * (sorted_values[hi] - sorted_values[lo]);
}

BoxplotStats boxplot_stats(std::vector<double> values) {
    if (values.empty()) throw ValidationError("boxplot of an empty sample");
    std::sort(values.begin(), values.end());
    BoxplotStats b;
    b.q1 = quantile_inclusive(values, 0.25);
    b.median = quantile_inclusive(values, 0.5);
    b.q3 = quantile_inclusive(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo = b.q1 - 1.5 * iqr;
    const double hi = b.q3 + 1.5 * iqr;
    bool any_inside = false;
    for (double v : values) {
        if (v < lo || v > hi) {
            b.outliers.push_back(v);
            continue;
        }
        if (!any_inside) {
            b.minimum = b.maximum = v;
            any_inside = true;
        } else {
            b.minimum = std::min(b.minimum, v);
            b.maximum = std::max(b.maximum, v);
        }
    }
    if (!any_inside) {  // unreachable for finite data, but stay defined
        b.minimum = values.front();
        b.maximum = values.back();
    }
    return b;
}

Dataset augment_with_noise(const Dataset& data, double snr_db, int copies,
                           std::uint64_t seed) {
    data.validate();
    if (copies < 1) throw ValidationError("noise copies must be >= 1");
    std::vector<RcsSignature> noisy;
    noisy.reserve(data.signatures.size() * static_cast<std::size_t>(copies));
    for (std::size_t si = 0; si < data.signatures.size(); ++si) {
        for (int k = 0; k < copies; ++k) {
            NoiseSpec ns;
            ns.snr_db = snr_db;
            ns.seed = derive_seed(seed, 0x6175676dULL, si,
                                  static_cast<std::uint64_t>(k));
            noisy.push_back(add_noise(data.signatures[si], ns));
        }
    }
    return Dataset::from_signatures(std::move(noisy));
}

LabeledFeatures features_of(const Dataset& data, FeatureScale scale,
                            bool include_minimum) {
    data.validate();
    LabeledFeatures lf;
    lf.classes = data.class_names;
    lf.x.reserve(data.signatures.size());
    lf.y.reserve(data.signatures.size());
    for (const auto& sig : data.signatures) {
        lf.x.push_back(extract_features(sig, scale, include_minimum).values());
        lf.y.push_back(class_index_of(lf.classes, sig.target_id));
    }
    return lf;
}

AnyClassifier train_classifier(const Dataset& data, const ClassifierSpec& spec,
                               std::uint64_t seed) {
    spec.validate();
    data.validate();

    Dataset train = data;
    if (spec.train_snr_db)
        train = augment_with_noise(data, *spec.train_snr_db, spec.train_copies,
                                   seed);

    AnyClassifier out;
    out.name = spec.name;
    out.scale = spec.feature_scale;
    out.include_minimum = spec.include_minimum;
    if (spec.is_sl) {
        SlOptions opt = spec.sl_options;
        opt.seed = derive_seed(seed, 0x736cULL);
        out.model = train_sl(train, spec.sl_family, opt);
        return out;
    }
    out.model = train_ml(
        spec.ml_family, features_of(train, spec.feature_scale, spec.include_minimum),
        spec.ml_hyperparams, derive_seed(seed, 0x6d6cULL), spec.standardize);
    return out;
}

EvalReport run_experiment(const Dataset& data, const ExperimentSpec& spec) {
    spec.validate();
    data.validate();
    if (data.signatures.empty())
        throw ValidationError("experiment dataset is empty");

    const std::size_t num_classes = data.class_names.size();
    const std::size_t num_clf = spec.classifiers.size();
    const std::size_t num_snr = spec.snr_grid_db.size();
    const std::size_t runs = static_cast<std::size_t>(spec.runs);
    const std::size_t tests = static_cast<std::size_t>(spec.tests_per_class);

    // Signature indices per class (class_names is sorted and every signature
    // belongs to one of them).
    std::vector<std::vector<std::size_t>> members(num_classes);
    for (std::size_t i = 0; i < data.signatures.size(); ++i)
        members[static_cast<std::size_t>(class_index_of(
                    data.class_names, data.signatures[i].target_id))]
            .push_back(i);

    // Train every classifier once.
    struct Engine {
        AnyClassifier clf;
        bool ok = false;
        std::string err;
    };
    std::vector<Engine> engines(num_clf);
    for (std::size_t k = 0; k < num_clf; ++k) {
        try {
            engines[k].clf = train_classifier(
                data, spec.classifiers[k],
                derive_seed(spec.seed, 0x747261696eULL,
                            fnv1a64(spec.classifiers[k].name)));
            engines[k].ok = true;
        } catch (const Error& e) {
            engines[k].err = e.what();
        }
    }

    // One task per (run, SNR) cell; each task owns its slab of the confusion
    // and timing stores, so results are independent of the thread count.
    const std::size_t num_tasks = runs * num_snr;
    const std::size_t mm = num_classes * num_classes;
    std::vector<std::int64_t> counts(num_clf * num_tasks * mm, 0);
    std::vector<std::vector<std::vector<double>>> times(
        num_tasks, std::vector<std::vector<double>>(num_clf));
    std::vector<std::vector<std::string>> errors(
        num_tasks, std::vector<std::string>(num_clf));

    parallel_for(num_tasks, spec.threads, [&](std::size_t task) {
        const std::size_t r = task / num_snr;
        const std::size_t s = task % num_snr;
        const double snr = spec.snr_grid_db[s];
        for (std::size_t c = 0; c < num_classes; ++c) {
            for (std::size_t i = 0; i < tests; ++i) {
                const auto& clean =
                    data.signatures[members[c][i % members[c].size()]];
                NoiseSpec ns;
                ns.snr_db = snr;
                ns.seed = derive_seed(spec.seed, 0x74657374ULL, r, s, c, i);
                RcsSignature test = add_noise(clean, ns);
                if (spec.azimuth_window)
                    test = restrict_azimuth(test, spec.azimuth_window->center_deg,
                                            spec.azimuth_window->half_width_deg);
                for (std::size_t k = 0; k < num_clf; ++k) {
                    if (!engines[k].ok || !errors[task][k].empty()) continue;
                    try {
                        const auto t0 = Clock::now();
                        const std::string label = engines[k].clf.classify(test);
                        const auto t1 = Clock::now();
                        const auto pred = static_cast<std::size_t>(
                            class_index_of(data.class_names, label));
                        counts[(k * num_tasks + task) * mm + c * num_classes +
                               pred] += 1;
                        times[task][k].push_back(ms_between(t0, t1));
                    } catch (const Error& e) {
                        errors[task][k] = e.what();
                    }
                }
            }
        }
    });

    EvalReport report;
    report.class_names = data.class_names;
    report.snr_grid_db = spec.snr_grid_db;
    report.runs = spec.runs;
    report.tests_per_class = spec.tests_per_class;
    report.azimuth_limited = spec.azimuth_window.has_value();
    report.per_classifier.resize(num_clf);
    const double per_run_total = static_cast<double>(num_classes * tests);

    for (std::size_t k = 0; k < num_clf; ++k) {
        ClassifierResult& res = report.per_classifier[k];
        res.name = spec.classifiers[k].name;
        std::vector<double> all_times;
        for (std::size_t task = 0; task < num_tasks; ++task)
            all_times.insert(all_times.end(), times[task][k].begin(),
                             times[task][k].end());
        res.classify_timing = timing_from_samples(std::move(all_times));

        res.cells.resize(num_snr);
        for (std::size_t s = 0; s < num_snr; ++s) {
            CellResult& cell = res.cells[s];
            cell.snr_db = spec.snr_grid_db[s];
            cell.confusion.assign(num_classes,
                                  std::vector<std::int64_t>(num_classes, 0));
            if (!engines[k].ok) {
                cell.failed = true;
                cell.failure = engines[k].err;
                continue;
            }
            cell.run_accuracies.resize(runs);
            for (std::size_t r = 0; r < runs; ++r) {
                const std::size_t task = r * num_snr + s;
                if (!errors[task][k].empty() && !cell.failed) {
                    cell.failed = true;
                    cell.failure = errors[task][k];
                }
                std::int64_t trace = 0;
                for (std::size_t a = 0; a < num_classes; ++a)
                    for (std::size_t b = 0; b < num_classes; ++b) {
                        const std::int64_t v =
                            counts[(k * num_tasks + task) * mm +
                                   a * num_classes + b];
                        cell.confusion[a][b] += v;
                        if (a == b) trace += v;
                    }
                cell.run_accuracies[r] =
                    static_cast<double>(trace) / per_run_total;
            }
            cell.accuracy_mean =
                std::accumulate(cell.run_accuracies.begin(),
                                cell.run_accuracies.end(), 0.0) /
                runs;
            if (runs > 1) {
                double acc = 0.0;
                for (double v : cell.run_accuracies)
                    acc += (v - cell.accuracy_mean) * (v - cell.accuracy_mean);
                cell.accuracy_std = std::sqrt(acc / (runs - 1));
            }
            cell.accuracy_box = boxplot_stats(cell.run_accuracies);
        }
    }
    return report;
}

std::vector<BenchmarkRow> benchmark_timing(const std::vector<BenchTarget>& targets,
                                           const std::vector<RcsSignature>& tests,
                                           int repetitions) {
    if (repetitions < 3)
        throw ValidationError("benchmark repetitions must be >= 3");
    if (targets.empty()) throw ValidationError("benchmark needs a classifier");
    if (tests.empty()) throw ValidationError("benchmark needs test signatures");

    std::vector<BenchmarkRow> rows;
    rows.reserve(targets.size());
    for (const auto& target : targets) {
        const AnyClassifier& any = target.classifier;
        BenchmarkRow row;
        row.name = any.name;
        std::vector<double> total_ms, extract_ms, predict_ms;

        auto one_pass = [&](bool measured) {
            double ext = 0.0, prd = 0.0;
            for (const auto& sig : tests) {
                if (any.is_sl()) {
                    const auto& model = std::get<SlModel>(any.model);
                    const auto t0 = Clock::now();
                    if (target.refit) {
                        const SlModel fresh = refit_sl(model);
                        (void)classify_sl(fresh, sig);
                    } else {
                        (void)classify_sl(model, sig);
                    }
                    prd += ms_between(t0, Clock::now());
                } else {
                    const auto& clf = std::get<TrainedClassifier>(any.model);
                    const auto t0 = Clock::now();
                    const FeatureVector fv =
                        extract_features(sig, any.scale, any.include_minimum);
                    const auto t1 = Clock::now();
                    (void)predict_ml(clf, fv.values());
                    const auto t2 = Clock::now();
                    ext += ms_between(t0, t1);
                    prd += ms_between(t1, t2);
                }
            }
            if (measured) {
                const double n = static_cast<double>(tests.size());
                extract_ms.push_back(ext / n);
                predict_ms.push_back(prd / n);
                total_ms.push_back((ext + prd) / n);
            }
        };

        one_pass(false);  // warm-up
        for (int rep = 0; rep < repetitions; ++rep) one_pass(true);
        row.total = timing_from_samples(total_ms);
        row.extract = timing_from_samples(extract_ms);
        row.predict = timing_from_samples(predict_ms);
        rows.push_back(std::move(row));
    }
    return rows;
}

// --- persistence -------------------------------------------------------------

namespace {

using nlohmann::json;

json box_to_json(const BoxplotStats& b) {
    return json{{"minimum", b.minimum}, {"q1", b.q1},
                {"median", b.median},   {"q3", b.q3},
                {"maximum", b.maximum}, {"outliers", b.outliers}};
}

BoxplotStats box_from_json(const json& j) {
    BoxplotStats b;
    b.minimum = j.at("minimum").get<double>();
    b.q1 = j.at("q1").get<double>();
    b.median = j.at("median").get<double>();
    b.q3 = j.at("q3").get<double>();
    b.maximum = j.at("maximum").get<double>();
    b.outliers = j.at("outliers").get<std::vector<double>>();
    return b;
}

json timing_to_json(const TimingStats& t) {
    return json{{"mean_ms", t.mean_ms},
                {"std_ms", t.std_ms},
                {"median_ms", t.median_ms}};
}

TimingStats timing_from_json(const json& j) {
    TimingStats t;
    t.mean_ms = j.at("mean_ms").get<double>();
    t.std_ms = j.at("std_ms").get<double>();
    t.median_ms = j.at("median_ms").get<double>();
    return t;
}

}  // namespace

std::string report_to_json_string(const EvalReport& report) {
    json j;
    j["schema"] = "rcsclass-report";
    j["version"] = 1;
    j["class_names"] = report.class_names;
    j["snr_grid_db"] = report.snr_grid_db;
    j["runs"] = report.runs;
    j["tests_per_class"] = report.tests_per_class;
    j["azimuth_limited"] = report.azimuth_limited;
    json clfs = json::array();
    for (const auto& res : report.per_classifier) {
        json cells = json::array();
        for (const auto& cell : res.cells) {
            cells.push_back(json{{"snr_db", cell.snr_db},
                                 {"confusion", cell.confusion},
                                 {"run_accuracies", cell.run_accuracies},
                                 {"accuracy_mean", cell.accuracy_mean},
                                 {"accuracy_std", cell.accuracy_std},
                                 {"accuracy_box", box_to_json(cell.accuracy_box)},
                                 {"failed", cell.failed},
                                 {"failure", cell.failure}});
        }
        clfs.push_back(json{{"name", res.name},
                            {"classify_timing", timing_to_json(res.classify_timing)},
                            {"cells", std::move(cells)}});
    }
    j["per_classifier"] = std::move(clfs);
    return j.dump(2);
}

EvalReport report_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what(), 0);
    }
    try {
        if (j.at("schema").get<std::string>() != "rcsclass-report")
            throw ValidationError("not a report file");
        if (j.at("version").get<int>() != 1)
            throw ValidationError("unsupported report version");
        EvalReport report;
        report.class_names = j.at("class_names").get<std::vector<std::string>>();
        report.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
        report.runs = j.at("runs").get<int>();
        report.tests_per_class = j.at("tests_per_class").get<int>();
        report.azimuth_limited = j.at("azimuth_limited").get<bool>();
        for (const auto& jc : j.at("per_classifier")) {
            ClassifierResult res;
            res.name = jc.at("name").get<std::string>();
            res.classify_timing = timing_from_json(jc.at("classify_timing"));
            for (const auto& jcell : jc.at("cells")) {
                CellResult cell;
                cell.snr_db = jcell.at("snr_db").get<double>();
                cell.confusion =
                    jcell.at("confusion")
                        .get<std::vector<std::vector<std::int64_t>>>();
                cell.run_accuracies =
                    jcell.at("run_accuracies").get<std::vector<double>>();
                cell.accuracy_mean = jcell.at("accuracy_mean").get<double>();
                cell.accuracy_std = jcell.at("accuracy_std").get<double>();
                cell.accuracy_box = box_from_json(jcell.at("accuracy_box"));
                cell.failed = jcell.at("failed").get<bool>();
                cell.failure = jcell.at("failure").get<std::string>();
                res.cells.push_back(std::move(cell));
            }
            report.per_classifier.push_back(std::move(res));
        }
        return report;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report JSON: ") + e.what());
    }
}

void save_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << report_to_json_string(report) << "\n";
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

EvalReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return report_from_json_string(buf.str());
}

void write_report_csvs(const std::string& dir, const EvalReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out)
            throw ValidationError("cannot open '" + name + "' for writing");
        return out;
    };

    {
        auto out = open("accuracy_vs_snr.csv");
        out << "classifier,snr_db,accuracy_mean,accuracy_std,failed\n";
        for (const auto& res : report.per_classifier)
            for (const auto& cell : res.cells)
                out << res.name << "," << format_g(cell.snr_db) << ","
                    << format_g(cell.accuracy_mean) << ","
                    << format_g(cell.accuracy_std) << ","
                    << (cell.failed ? 1 : 0) << "\n";
    }
    {
        auto out = open("boxplot.csv");
        out << "classifier,snr_db,min,q1,median,q3,max,outliers\n";
        for (const auto& res : report.per_classifier)
            for (const auto& cell : res.cells) {
                out << res.name << "," << format_g(cell.snr_db) << ","
                    << format_g(cell.accuracy_box.minimum) << ","
                    << format_g(cell.accuracy_box.q1) << ","
                    << format_g(cell.accuracy_box.median) << ","
                    << format_g(cell.accuracy_box.q3) << ","
                    << format_g(cell.accuracy_box.maximum) << ",";
                for (std::size_t i = 0; i < cell.accuracy_box.outliers.size(); ++i)
                    out << (i ? ";" : "")
                        << format_g(cell.accuracy_box.outliers[i]);
                out << "\n";
            }
    }
    {
        auto out = open("timing.csv");
        out << "classifier,mean_ms,std_ms,median_ms\n";
        for (const auto& res : report.per_classifier)
            out << res.name << "," << format_g(res.classify_timing.mean_ms)
                << "," << format_g(res.classify_timing.std_ms) << ","
                << format_g(res.classify_timing.median_ms) << "\n";
    }
    char snr_buf[32];
    for (const auto& res : report.per_classifier)
        for (const auto& cell : res.cells) {
            if (cell.failed) continue;
            std::snprintf(snr_buf, sizeof(snr_buf), "%g", cell.snr_db);
            auto out = open("confusion_" + sanitize_for_filename(res.name) +
                            "_" + snr_buf + ".csv");
            out << "true_class";
            for (const auto& name : report.class_names) out << "," << name;
            out << "\n";
            for (std::size_t r = 0; r < cell.confusion.size(); ++r) {
                out << report.class_names[r];
                for (const auto v : cell.confusion[r]) out << "," << v;
                out << "\n";
            }
        }
}

void write_benchmark_csv(const std::string& path,
                         const std::vector<BenchmarkRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "classifier,total_mean_ms,total_std_ms,total_median_ms,"
           "extract_mean_ms,extract_std_ms,extract_median_ms,"
           "predict_mean_ms,predict_std_ms,predict_median_ms\n";
    for (const auto& row : rows)
        out << row.name << "," << format_g(row.total.mean_ms) << ","
            << format_g(row.total.std_ms) << "," << format_g(row.total.median_ms)
            << "," << format_g(row.extract.mean_ms) << ","
            << format_g(row.extract.std_ms) << ","
            << format_g(row.extract.median_ms) << ","
            << format_g(row.predict.mean_ms) << ","
            << format_g(row.predict.std_ms) << ","
            << format_g(row.predict.median_ms) << "\n";
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace rcs
