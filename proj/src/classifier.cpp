#include "rcsclass/classifier.hpp"

#include <fstream>

#include "json.hpp"

namespace rcs {

using nlohmann::json;

namespace {

json to_json(const ChiSquareParams& p) {
    return {{"type", "chi_square"}, {"degrees", p.degrees}, {"mean_rcs", p.mean_rcs}};
}
json to_json(const GammaParams& p) {
    return {{"type", "gamma"}, {"shape", p.shape}, {"rate", p.rate}};
}
json to_json(const GpdParams& p) {
    return {{"type", "gpd"}, {"shape", p.shape}, {"scale", p.scale}};
}
json to_json(const GmmParams& p) {
    json comps = json::array();
    for (const auto& c : p.components)
        comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
    return {{"type", "gmm"}, {"components", comps}};
}

DensityModel density_from_json(const json& j) {
    DensityModel d;
    const std::string type = j.at("type");
    if (type == "chi_square") {
        d.params = ChiSquareParams{j.at("degrees"), j.at("mean_rcs")};
    } else if (type == "gamma") {
        d.params = GammaParams{j.at("shape"), j.at("rate")};
    } else if (type == "gpd") {
        d.params = GpdParams{j.at("shape"), j.at("scale")};
    } else if (type == "gmm") {
        GmmParams g;
        for (const auto& c : j.at("components"))
            g.components.push_back({c.at("weight"), c.at("mean"), c.at("variance")});
        d.params = std::move(g);
    } else {
        throw ValidationError("unknown density type '" + type + "' in model file");
    }
    return d;
}

json sl_to_json(const SlModel& m) {
    json dens = json::array();
    for (const auto& d : m.densities)
        dens.push_back(std::visit([](const auto& p) { return to_json(p); }, d.params));
    return {
        {"family", to_string(m.family)},
        {"classes", m.classes},
        {"priors", m.priors},
        {"densities", dens},
        {"training_pools", m.training_pools},
        {"options",
         {{"gmm_k_max", m.options.gmm_k_max},
          {"aic_mode", m.options.aic_mode == AicMode::free_params ? "free_params" : "k_only"},
          {"seed", m.options.seed},
          {"em",
           {{"epsilon", m.options.em.epsilon},
            {"max_iterations", m.options.em.max_iterations},
            {"restarts", m.options.em.restarts},
            {"variance_floor_factor", m.options.em.variance_floor_factor}}}}},
    };
}

SlModel sl_from_json(const json& j) {
    SlModel m;
    m.family = sl_family_from_string(j.at("family"));
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.priors = j.at("priors").get<std::vector<double>>();
    m.training_pools = j.at("training_pools").get<std::vector<std::vector<double>>>();
    for (const auto& d : j.at("densities")) m.densities.push_back(density_from_json(d));
    const auto& o = j.at("options");
    m.options.gmm_k_max = o.at("gmm_k_max");
    m.options.aic_mode = o.at("aic_mode") == "free_params" ? AicMode::free_params
                                                           : AicMode::k_only;
    m.options.seed = o.at("seed");
    const auto& e = o.at("em");
    m.options.em.epsilon = e.at("epsilon");
    m.options.em.max_iterations = e.at("max_iterations");
    m.options.em.restarts = e.at("restarts");
    m.options.em.variance_floor_factor = e.at("variance_floor_factor");
    m.validate();
    return m;
}

json hp_to_json(const MlHyperparams& hp) {
    return {
        {"knn",
         {{"num_neighbors", hp.knn.num_neighbors}, {"metric", to_string(hp.knn.metric)}}},
        {"tree", {{"min_leaf_size", hp.tree.min_leaf_size}}},
        {"da", {{"delta", hp.da.delta}, {"gamma", hp.da.gamma}}},
        {"nb", {{"mode", to_string(hp.nb.mode)}, {"kernel_width", hp.nb.kernel_width}}},
        {"svm",
         {{"box_constraint", hp.svm.box_constraint},
          {"kernel_scale", hp.svm.kernel_scale}}},
        {"ensemble",
         {{"num_learning_cycles", hp.ensemble.num_learning_cycles},
          {"min_leaf_size", hp.ensemble.min_leaf_size},
          {"bootstrap", hp.ensemble.bootstrap}}},
    };
}

MlHyperparams hp_from_json(const json& j) {
    MlHyperparams hp;
    hp.knn.num_neighbors = j.at("knn").at("num_neighbors");
    hp.knn.metric = knn_metric_from_string(j.at("knn").at("metric"));
    hp.tree.min_leaf_size = j.at("tree").at("min_leaf_size");
    hp.da.delta = j.at("da").at("delta");
    hp.da.gamma = j.at("da").at("gamma");
    hp.nb.mode = nb_mode_from_string(j.at("nb").at("mode"));
    hp.nb.kernel_width = j.at("nb").at("kernel_width");
    hp.svm.box_constraint = j.at("svm").at("box_constraint");
    hp.svm.kernel_scale = j.at("svm").at("kernel_scale");
    hp.ensemble.num_learning_cycles = j.at("ensemble").at("num_learning_cycles");
    hp.ensemble.min_leaf_size = j.at("ensemble").at("min_leaf_size");
    hp.ensemble.bootstrap = j.at("ensemble").at("bootstrap");
    return hp;
}

json tree_to_json(const TreeModel& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"probs", n.probs},
                         {"count", n.count}});
    return {{"nodes", nodes}};
}

TreeModel tree_from_json(const json& j) {
    TreeModel t;
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature");
        node.threshold = n.at("threshold");
        node.left = n.at("left");
        node.right = n.at("right");
        node.probs = n.at("probs").get<std::vector<double>>();
        node.count = n.at("count");
        t.nodes.push_back(std::move(node));
    }
    return t;
}

json ml_state_to_json(const TrainedClassifier& c) {
    json j;
    switch (c.family) {
        case MlFamily::knn: {
            const auto& st = std::get<KnnState>(c.state);
            j = {{"points", st.points}, {"labels", st.labels}};
            break;
        }
        case MlFamily::naive_bayes: {
            const auto& st = std::get<NbState>(c.state);
            j = {{"means", st.means},
                 {"variances", st.variances},
                 {"centers", st.centers},
                 {"log_priors", st.log_priors}};
            break;
        }
        case MlFamily::tree:
            j = tree_to_json(std::get<TreeModel>(c.state));
            break;
        case MlFamily::discriminant: {
            const auto& st = std::get<DaState>(c.state);
            j = {{"coef", st.coef}, {"bias", st.bias}};
            break;
        }
        case MlFamily::svm: {
            const auto& st = std::get<SvmState>(c.state);
            json machines = json::array();
            for (const auto& m : st.machines)
                machines.push_back(
                    {{"support", m.support}, {"dual", m.dual}, {"bias", m.bias}});
            j = {{"machines", machines}};
            break;
        }
        case MlFamily::ensemble: {
            const auto& st = std::get<EnsembleState>(c.state);
            json trees = json::array();
            for (const auto& t : st.trees) trees.push_back(tree_to_json(t));
            j = {{"trees", trees}};
            break;
        }
    }
    return j;
}

void ml_state_from_json(const json& j, TrainedClassifier& c) {
    switch (c.family) {
        case MlFamily::knn: {
            KnnState st;
            st.points = j.at("points").get<std::vector<std::vector<double>>>();
            st.labels = j.at("labels").get<std::vector<int>>();
            c.state = std::move(st);
            break;
        }
        case MlFamily::naive_bayes: {
            NbState st;
            st.means = j.at("means").get<std::vector<std::vector<double>>>();
            st.variances = j.at("variances").get<std::vector<std::vector<double>>>();
            st.centers =
                j.at("centers").get<std::vector<std::vector<std::vector<double>>>>();
            st.log_priors = j.at("log_priors").get<std::vector<double>>();
            c.state = std::move(st);
            break;
        }
        case MlFamily::tree:
            c.state = tree_from_json(j);
            break;
        case MlFamily::discriminant: {
            DaState st;
            st.coef = j.at("coef").get<std::vector<std::vector<double>>>();
            st.bias = j.at("bias").get<std::vector<double>>();
            c.state = std::move(st);
            break;
        }
        case MlFamily::svm: {
            SvmState st;
            for (const auto& m : j.at("machines")) {
                SvmMachine machine;
                machine.support = m.at("support").get<std::vector<std::vector<double>>>();
                machine.dual = m.at("dual").get<std::vector<double>>();
                machine.bias = m.at("bias");
                st.machines.push_back(std::move(machine));
            }
            c.state = std::move(st);
            break;
        }
        case MlFamily::ensemble: {
            EnsembleState st;
            for (const auto& t : j.at("trees")) st.trees.push_back(tree_from_json(t));
            c.state = std::move(st);
            break;
        }
    }
}

json ml_to_json(const TrainedClassifier& c) {
    return {{"family", to_string(c.family)},
            {"classes", c.classes},
            {"standardized", c.standardized},
            {"feat_mean", c.feat_mean},
            {"feat_scale", c.feat_scale},
            {"hyperparams", hp_to_json(c.hp)},
            {"state", ml_state_to_json(c)}};
}

TrainedClassifier ml_from_json(const json& j) {
    TrainedClassifier c;
    c.family = ml_family_from_string(j.at("family"));
    c.classes = j.at("classes").get<std::vector<std::string>>();
    c.standardized = j.at("standardized");
    c.feat_mean = j.at("feat_mean").get<std::vector<double>>();
    c.feat_scale = j.at("feat_scale").get<std::vector<double>>();
    c.hp = hp_from_json(j.at("hyperparams"));
    ml_state_from_json(j.at("state"), c);
    return c;
}

}  // namespace

const std::vector<std::string>& AnyClassifier::classes() const {
    if (is_sl()) return std::get<SlModel>(model).classes;
    return std::get<TrainedClassifier>(model).classes;
}

std::string AnyClassifier::classify(const RcsSignature& sig,
                                    std::vector<double>* scores) const {
    if (is_sl()) {
        const auto pred = classify_sl(std::get<SlModel>(model), sig);
        if (scores) *scores = pred.log_posteriors;
        return pred.label;
    }
    const auto& clf = std::get<TrainedClassifier>(model);
    const auto fv = extract_features(sig, scale, include_minimum);
    const auto pred = predict_ml(clf, fv.values());
    if (scores) *scores = pred.scores;
    return pred.label;
}

std::string classifier_to_json_string(const AnyClassifier& clf) {
    json j = {{"format", "rcsclass-model"},
              {"version", 1},
              {"name", clf.name},
              {"kind", clf.is_sl() ? "sl" : "ml"},
              {"feature_scale", to_string(clf.scale)},
              {"include_minimum", clf.include_minimum}};
    if (clf.is_sl())
        j["sl"] = sl_to_json(std::get<SlModel>(clf.model));
    else
        j["ml"] = ml_to_json(std::get<TrainedClassifier>(clf.model));
    return j.dump(2);
}

AnyClassifier classifier_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model JSON parse failure: ") + e.what());
    }
    try {
        if (j.at("format") != "rcsclass-model")
            throw ValidationError("not a classifier model file");
        if (j.at("version") != 1)
            throw ValidationError("unsupported model file version");
        AnyClassifier clf;
        clf.name = j.at("name");
        clf.scale = feature_scale_from_string(j.at("feature_scale"));
        clf.include_minimum = j.at("include_minimum");
        if (j.at("kind") == "sl")
            clf.model = sl_from_json(j.at("sl"));
        else
            clf.model = ml_from_json(j.at("ml"));
        return clf;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model JSON missing field: ") + e.what());
    }
}

void save_classifier(const AnyClassifier& clf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << classifier_to_json_string(clf) << "\n";
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

AnyClassifier load_classifier(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return classifier_from_json_string(text);
}

}  // namespace rcs
