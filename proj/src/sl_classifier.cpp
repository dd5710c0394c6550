#include "rcsclass/sl_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(SlFamily f) {
    switch (f) {
        case SlFamily::swerling12: return "swerling12";
        case SlFamily::swerling34: return "swerling34";
        case SlFamily::gamma_mle: return "gamma";
        case SlFamily::gpd_mle: return "gpd";
        case SlFamily::gmm: return "gmm";
    }
    throw ValidationError("bad SL family");
}

SlFamily sl_family_from_string(const std::string& s) {
    if (s == "swerling12" || s == "sw12") return SlFamily::swerling12;
    if (s == "swerling34" || s == "sw34") return SlFamily::swerling34;
    if (s == "gamma") return SlFamily::gamma_mle;
    if (s == "gpd" || s == "lomax") return SlFamily::gpd_mle;
    if (s == "gmm") return SlFamily::gmm;
    throw ValidationError("unknown SL family '" + s + "'");
}

double DensityModel::log_pdf_at(double x) const {
    return std::visit(
        [&](const auto& p) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GmmParams>)
                return gmm_log_pdf(p, x);
            else
                return log_pdf(p, x);
        },
        params);
}

void SlModel::validate() const {
    if (classes.empty()) throw ValidationError("SL model has no classes");
    if (densities.size() != classes.size() || priors.size() != classes.size() ||
        training_pools.size() != classes.size())
        throw ValidationError("SL model arrays are inconsistent");
    if (!std::is_sorted(classes.begin(), classes.end()))
        throw ValidationError("SL model classes must be sorted");
    double acc = 0.0;
    for (double p : priors) {
        if (!(p > 0.0)) throw ValidationError("SL priors must be positive");
        acc += p;
    }
    if (std::fabs(acc - 1.0) > 1e-9)
        throw ValidationError("SL priors must sum to one");
}

namespace {

DensityModel fit_family(SlFamily family, const std::vector<double>& pool,
                        const SlOptions& opt, std::uint64_t class_seed) {
    DensityModel d;
    switch (family) {
        case SlFamily::swerling12:
            d.params = fit_chi_square(pool, 1.0);
            break;
        case SlFamily::swerling34:
            d.params = fit_chi_square(pool, 2.0);
            break;
        case SlFamily::gamma_mle:
            d.params = fit_gamma_mle(pool);
            break;
        case SlFamily::gpd_mle:
            d.params = fit_gpd_mle(pool);
            break;
        case SlFamily::gmm: {
            std::vector<double> db(pool.size());
            std::transform(pool.begin(), pool.end(), db.begin(), m2_to_dbsm);
            auto sel = select_k(db, opt.gmm_k_max, class_seed, opt.aic_mode, opt.em);
            auto [params, trace] =
                fit_em(db, sel.best_k, derive_seed(class_seed, sel.best_k), opt.em);
            d.params = std::move(params);
            break;
        }
    }
    return d;
}

}  // namespace

SlModel train_sl(const Dataset& data, SlFamily family, const SlOptions& opt) {
    data.validate();
    if (opt.gmm_k_max < 1) throw ValidationError("gmm_k_max must be >= 1");

    std::map<std::string, std::vector<double>> pools;
    for (const auto& sig : data.signatures) {
        auto& pool = pools[sig.target_id];
        pool.insert(pool.end(), sig.rcs_m2.begin(), sig.rcs_m2.end());
    }
    SlModel model;
    model.family = family;
    model.options = opt;
    for (auto& [name, pool] : pools) {
        if (pool.size() < 10)
            throw ValidationError("class '" + name + "' has fewer than 10 samples");
        model.classes.push_back(name);
        model.training_pools.push_back(std::move(pool));
    }
    for (std::size_t c = 0; c < model.classes.size(); ++c)
        model.densities.push_back(fit_family(family, model.training_pools[c], opt,
                                             derive_seed(opt.seed, 0x534cULL, c)));
    model.priors.assign(model.classes.size(), 1.0 / model.classes.size());
    model.validate();
    return model;
}

SlModel refit_sl(const SlModel& model) {
    model.validate();
    SlModel out = model;
    for (std::size_t c = 0; c < out.classes.size(); ++c)
        out.densities[c] = fit_family(out.family, out.training_pools[c], out.options,
                                      derive_seed(out.options.seed, 0x534cULL, c));
    return out;
}

SlPrediction classify_sl(const SlModel& model, const RcsSignature& sig) {
    model.validate();
    sig.validate();
    const bool decibel_domain = model.family == SlFamily::gmm;
    std::vector<double> x(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        x[i] = decibel_domain ? m2_to_dbsm(sig.rcs_m2[i]) : sig.rcs_m2[i];

    SlPrediction pred;
    pred.log_posteriors.resize(model.classes.size());
    double best = -kInf;
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        long double acc = std::log(model.priors[c]);
        for (double v : x) {
            const double l = model.densities[c].log_pdf_at(v);
            if (l == -kInf) {
                acc = -kInf;
                break;
            }
            acc += l;
        }
        pred.log_posteriors[c] = static_cast<double>(acc);
        // Strict > keeps the first (lexicographically smallest) class on ties.
        if (pred.log_posteriors[c] > best) {
            best = pred.log_posteriors[c];
            pred.class_index = static_cast<int>(c);
        }
    }
    if (pred.class_index < 0)
        throw NumericError("classify_sl: every class scored -inf (indeterminate)");
    pred.label = model.classes[pred.class_index];
    return pred;
}

}  // namespace rcs
