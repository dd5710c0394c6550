// Python bindings: a thin operations-first surface over the C++ core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rcsclass/classifier.hpp"
#include "rcsclass/cwt.hpp"
#include "rcsclass/densities.hpp"
#include "rcsclass/errors.hpp"
#include "rcsclass/eval.hpp"
#include "rcsclass/features.hpp"
#include "rcsclass/noise.hpp"
#include "rcsclass/rng.hpp"
#include "rcsclass/signatures.hpp"

namespace py = pybind11;
using namespace rcs;

namespace {

py::dict features_as_dict(const FeatureVector& fv) {
    py::dict d;
    d["peak"] = fv.peak;
    d["rms"] = fv.rms;
    d["mean"] = fv.mean;
    d["std"] = fv.std_dev;
    d["variance"] = fv.variance;
    d["median"] = fv.median;
    d["mode"] = fv.mode;
    if (fv.minimum) d["minimum"] = *fv.minimum;
    return d;
}

ClassifierSpec make_spec(const std::string& family, const std::string& name,
                         bool paper_aic, std::optional<double> train_snr_db,
                         int train_copies, const std::string& scale,
                         bool include_minimum, bool standardize) {
    ClassifierSpec cs;
    cs.name = name.empty() ? family : name;
    try {
        cs.sl_family = sl_family_from_string(family);
        cs.is_sl = true;
    } catch (const ValidationError&) {
        cs.ml_family = ml_family_from_string(family);
        cs.is_sl = false;
        cs.ml_hyperparams = default_hyperparams();
    }
    cs.sl_options.aic_mode = paper_aic ? AicMode::k_only : AicMode::free_params;
    cs.feature_scale = feature_scale_from_string(scale);
    cs.include_minimum = include_minimum;
    cs.standardize = standardize;
    cs.train_snr_db = train_snr_db;
    if (train_snr_db) cs.train_copies = train_copies;
    return cs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radar cross-section target classification toolkit";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<RcsSignature>(m, "Signature")
        .def_readonly("target_id", &RcsSignature::target_id)
        .def_readonly("frequency_ghz", &RcsSignature::frequency_ghz)
        .def_property_readonly(
            "polarization",
            [](const RcsSignature& s) { return to_string(s.polarization); })
        .def_readonly("angles_deg", &RcsSignature::angles_deg)
        .def_readonly("samples_m2", &RcsSignature::rcs_m2)
        .def("samples_dbsm",
             [](const RcsSignature& s) {
                 std::vector<double> out;
                 out.reserve(s.rcs_m2.size());
                 for (double v : s.rcs_m2) out.push_back(m2_to_dbsm(v));
                 return out;
             })
        .def("__repr__", [](const RcsSignature& s) {
            return "<Signature " + s.target_id + " " +
                   std::to_string(s.rcs_m2.size()) + " samples>";
        });

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("signatures", &Dataset::signatures)
        .def_readonly("class_names", &Dataset::class_names)
        .def("save_csv",
             [](const Dataset& d, const std::string& path) { save_csv(d, path); })
        .def_static("load_csv", &load_csv)
        .def("__len__", [](const Dataset& d) { return d.signatures.size(); });

    m.def(
        "generate_fleet",
        [](int num_classes, int centers_per_class, double separation_db,
           double base_sigma_m2, double frequency_ghz,
           const std::string& polarization, double grid_step_deg,
           std::uint64_t seed) {
            FleetSpec spec;
            spec.num_classes = num_classes;
            spec.centers_per_class = centers_per_class;
            spec.separation_db = separation_db;
            spec.base_sigma_m2 = base_sigma_m2;
            spec.frequency_ghz = frequency_ghz;
            spec.polarization = polarization_from_string(polarization);
            spec.grid_step_deg = grid_step_deg;
            spec.seed = seed;
            return generate_fleet(spec);
        },
        py::arg("num_classes") = 6, py::arg("centers_per_class") = 8,
        py::arg("separation_db") = 6.0, py::arg("base_sigma_m2") = 1.0,
        py::arg("frequency_ghz") = 15.0, py::arg("polarization") = "vv",
        py::arg("grid_step_deg") = 2.0, py::arg("seed") = 0,
        "Synthesize a labeled multi-class signature fleet");

    m.def(
        "add_noise",
        [](const RcsSignature& sig, double snr_db, std::uint64_t seed) {
            NoiseSpec ns;
            ns.snr_db = snr_db;
            ns.seed = seed;
            return add_noise(sig, ns);
        },
        py::arg("signature"), py::arg("snr_db") = 10.0, py::arg("seed") = 0,
        "Inject complex-amplitude Gaussian noise at the given SNR");

    m.def("restrict_azimuth", &restrict_azimuth, py::arg("signature"),
          py::arg("center_deg"), py::arg("half_width_deg"),
          "Keep only samples inside the azimuth window");

    m.def(
        "extract_features",
        [](const RcsSignature& sig, const std::string& scale,
           bool include_minimum) {
            return features_as_dict(extract_features(
                sig, feature_scale_from_string(scale), include_minimum));
        },
        py::arg("signature"), py::arg("scale") = "dbsm",
        py::arg("include_minimum") = false,
        "Summary-statistic feature vector of one signature");

    py::class_<AnyClassifier>(m, "Classifier")
        .def_readonly("name", &AnyClassifier::name)
        .def_property_readonly("classes", &AnyClassifier::classes)
        .def(
            "classify",
            [](const AnyClassifier& clf, const RcsSignature& sig) {
                std::vector<double> scores;
                const std::string label = clf.classify(sig, &scores);
                py::dict d;
                const auto& classes = clf.classes();
                for (std::size_t i = 0; i < classes.size(); ++i)
                    d[py::str(classes[i])] = scores[i];
                return py::make_tuple(label, d);
            },
            py::arg("signature"),
            "Predict the class of one signature; returns (label, scores)")
        .def("save", [](const AnyClassifier& clf,
                        const std::string& path) { save_classifier(clf, path); })
        .def("to_json", &classifier_to_json_string);

    m.def(
        "train_classifier",
        [](const Dataset& data, const std::string& family, std::uint64_t seed,
           const std::string& name, bool paper_aic,
           std::optional<double> train_snr_db, int train_copies,
           const std::string& scale, bool include_minimum, bool standardize) {
            return train_classifier(
                data,
                make_spec(family, name, paper_aic, train_snr_db, train_copies,
                          scale, include_minimum, standardize),
                seed);
        },
        py::arg("dataset"), py::arg("family"), py::arg("seed") = 0,
        py::arg("name") = "", py::arg("paper_aic") = false,
        py::arg("train_snr_db") = std::nullopt, py::arg("train_copies") = 100,
        py::arg("scale") = "dbsm", py::arg("include_minimum") = false,
        py::arg("standardize") = true,
        "Train one classifier family on a labeled dataset");

    m.def("load_classifier", &load_classifier, py::arg("path"));

    m.def(
        "run_sweep",
        [](const Dataset& data, const std::vector<std::string>& families,
           const std::vector<double>& snr_grid_db, int runs, int tests_per_class,
           std::uint64_t seed, int threads,
           std::optional<double> azimuth_halfwidth, double azimuth_center,
           std::optional<double> train_snr_db, int train_copies,
           bool paper_aic, bool sl_trains_noisy) {
            ExperimentSpec es;
            for (const auto& family : families) {
                ClassifierSpec cs =
                    make_spec(family, family, paper_aic,
                              sl_trains_noisy ? train_snr_db : std::nullopt,
                              train_copies, "dbsm", false, true);
                if (!cs.is_sl) {
                    cs.train_snr_db = train_snr_db;
                    if (train_snr_db) cs.train_copies = train_copies;
                }
                es.classifiers.push_back(std::move(cs));
            }
            es.snr_grid_db = snr_grid_db;
            es.runs = runs;
            es.tests_per_class = tests_per_class;
            es.seed = seed;
            es.threads = threads;
            if (azimuth_halfwidth)
                es.azimuth_window =
                    AzimuthWindow{azimuth_center, *azimuth_halfwidth};
            return report_to_json_string(run_experiment(data, es));
        },
        py::arg("dataset"), py::arg("families"),
        py::arg("snr_grid_db") = std::vector<double>{-5, -3, 0, 3, 5, 8, 10},
        py::arg("runs") = 10, py::arg("tests_per_class") = 50,
        py::arg("seed") = 0, py::arg("threads") = 1,
        py::arg("azimuth_halfwidth") = std::nullopt,
        py::arg("azimuth_center") = 0.0, py::arg("train_snr_db") = 10.0,
        py::arg("train_copies") = 20, py::arg("paper_aic") = false,
        py::arg("sl_trains_noisy") = false,
        "Monte Carlo accuracy experiment; returns the report as a JSON string");

    m.def(
        "cwt_scalogram",
        [](const std::vector<double>& values, int num_scales) {
            const Scalogram s = cwt_transform(values, num_scales);
            return py::make_tuple(s.magnitudes, s.scales);
        },
        py::arg("values"), py::arg("num_scales") = 64,
        "Continuous wavelet transform; returns (magnitudes, scales)");

    m.def(
        "save_scalogram_png",
        [](const std::vector<double>& values, const std::string& path,
           int num_scales, int size) {
            const Scalogram s = cwt_transform(values, num_scales);
            const Image img = process_scalogram(s, size);
            write_png(path, img);
            return img.degenerate;
        },
        py::arg("values"), py::arg("path"), py::arg("num_scales") = 64,
        py::arg("size") = 227,
        "Render a processed scalogram image; returns the degenerate flag");

    m.def(
        "boxplot",
        [](std::vector<double> values) {
            const BoxplotStats b = boxplot_stats(std::move(values));
            py::dict d;
            d["min"] = b.minimum;
            d["q1"] = b.q1;
            d["median"] = b.median;
            d["q3"] = b.q3;
            d["max"] = b.maximum;
            d["outliers"] = b.outliers;
            return d;
        },
        py::arg("values"), "Five-number summary with 1.5*IQR outlier fences");

    m.def(
        "fit_gamma",
        [](const std::vector<double>& samples) {
            const GammaParams p = fit_gamma_mle(samples);
            py::dict d;
            d["shape"] = p.shape;
            d["rate"] = p.rate;
            return d;
        },
        py::arg("samples"), "Maximum-likelihood gamma fit");

    m.def(
        "fit_gpd",
        [](const std::vector<double>& samples) {
            const GpdParams p = fit_gpd_mle(samples);
            py::dict d;
            d["shape"] = p.shape;
            d["scale"] = p.scale;
            return d;
        },
        py::arg("samples"), "Maximum-likelihood heavy-tail (Lomax) fit");
}
