#include "rcsclass/hyperopt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "rcsclass/rng.hpp"

namespace rcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNoiseFloor = 1e-6;
}

double Dim::clamp_round(double v) const {
    switch (kind) {
        case DimKind::real:
        case DimKind::log_real:
            return std::clamp(v, lo, hi);
        case DimKind::integer:
            return std::clamp(std::round(v), lo, hi);
        case DimKind::categorical: {
            const double idx = std::round(v);
            return std::clamp(idx, 0.0, static_cast<double>(levels.size() - 1));
        }
    }
    throw ValidationError("bad dimension kind");
}

void SearchSpace::validate() const {
    if (dims.empty()) throw ValidationError("search space has no dimensions");
    for (const auto& d : dims) {
        if (d.name.empty()) throw ValidationError("dimension without a name");
        if (d.kind == DimKind::categorical) {
            if (d.levels.empty())
                throw ValidationError("categorical dimension '" + d.name +
                                      "' has no levels");
            continue;
        }
        if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
            throw ValidationError("dimension '" + d.name + "' has bad bounds");
        if (d.kind == DimKind::log_real && !(d.lo > 0.0))
            throw ValidationError("log dimension '" + d.name +
                                  "' needs positive bounds");
    }
}

namespace {

// Embedded width of one dim: numeric dims occupy one unit coordinate,
// categoricals take one coordinate per level (one-hot).
std::size_t embed_width(const Dim& d) {
    return d.kind == DimKind::categorical ? d.levels.size() : 1;
}

std::size_t embed_total(const SearchSpace& space) {
    std::size_t w = 0;
    for (const auto& d : space.dims) w += embed_width(d);
    return w;
}

// Unit-cube coordinate of a user-space value.
double to_unit(const Dim& d, double v) {
    switch (d.kind) {
        case DimKind::real:
        case DimKind::integer:
            return (v - d.lo) / (d.hi - d.lo);
        case DimKind::log_real:
            return (std::log(v) - std::log(d.lo)) / (std::log(d.hi) - std::log(d.lo));
        case DimKind::categorical:
            return v;  // handled by one-hot embedding
    }
    throw ValidationError("bad dimension kind");
}

double from_unit(const Dim& d, double u) {
    switch (d.kind) {
        case DimKind::real:
            return d.lo + u * (d.hi - d.lo);
        case DimKind::integer:
            return std::round(d.lo + u * (d.hi - d.lo));
        case DimKind::log_real:
            return std::exp(std::log(d.lo) + u * (std::log(d.hi) - std::log(d.lo)));
        case DimKind::categorical:
            return u;
    }
    throw ValidationError("bad dimension kind");
}

std::vector<double> embed_point(const SearchSpace& space, const Point& p) {
    std::vector<double> e;
    e.reserve(embed_total(space));
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const Dim& d = space.dims[i];
        if (d.kind == DimKind::categorical) {
            for (std::size_t l = 0; l < d.levels.size(); ++l)
                e.push_back(l == static_cast<std::size_t>(p[i]) ? 1.0 : 0.0);
        } else {
            e.push_back(to_unit(d, p[i]));
        }
    }
    return e;
}

Point random_point(const SearchSpace& space, Rng& rng) {
    Point p(space.dims.size());
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const Dim& d = space.dims[i];
        if (d.kind == DimKind::categorical)
            p[i] = static_cast<double>(rng.index(d.levels.size()));
        else
            p[i] = d.clamp_round(from_unit(d, rng.uniform()));
    }
    return p;
}

// Latin hypercube over the numeric dims (stratified, permuted); categorical
// dims are sampled uniformly.
std::vector<Point> latin_hypercube(const SearchSpace& space, int count, Rng& rng) {
    std::vector<Point> points(count, Point(space.dims.size(), 0.0));
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const Dim& d = space.dims[i];
        if (d.kind == DimKind::categorical) {
            for (int k = 0; k < count; ++k)
                points[k][i] = static_cast<double>(rng.index(d.levels.size()));
            continue;
        }
        std::vector<int> strata(count);
        std::iota(strata.begin(), strata.end(), 0);
        for (int k = count - 1; k > 0; --k)
            std::swap(strata[k], strata[rng.index(k + 1)]);
        for (int k = 0; k < count; ++k) {
            const double u = (strata[k] + rng.uniform()) / count;
            points[k][i] = d.clamp_round(from_unit(d, u));
        }
    }
    return points;
}

double sq_exp_kernel(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& ls, double signal_var) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double r = (a[d] - b[d]) / ls[d];
        acc += r * r;
    }
    return signal_var * std::exp(-0.5 * acc);
}

Eigen::MatrixXd gram_matrix(const std::vector<std::vector<double>>& x,
                            const std::vector<double>& ls, double signal_var,
                            double noise_var) {
    const std::size_t n = x.size();
    Eigen::MatrixXd k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            k(i, j) = k(j, i) = sq_exp_kernel(x[i], x[j], ls, signal_var);
        }
        k(i, i) += noise_var;
    }
    return k;
}

// Log marginal likelihood and its gradient wrt (log ls..., log signal_sd).
double log_marginal(const std::vector<std::vector<double>>& x,
                    const Eigen::VectorXd& y, const std::vector<double>& ls,
                    double signal_var, double noise_var,
                    Eigen::VectorXd* grad = nullptr) {
    const std::size_t n = x.size(), d = ls.size();
    const Eigen::MatrixXd k = gram_matrix(x, ls, signal_var, noise_var);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) return -kInf;
    const Eigen::VectorXd alpha = llt.solve(y);
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
    const double lml = -0.5 * y.dot(alpha) - logdet -
                       0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
    if (grad) {
        grad->resize(d + 1);
        const Eigen::MatrixXd kinv =
            llt.solve(Eigen::MatrixXd::Identity(n, n));
        const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;
        // dK/d(log ls_m) entries: K_ij * r_m^2 with r_m = (x_im - x_jm)/ls_m.
        for (std::size_t m = 0; m < d; ++m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double r = (x[i][m] - x[j][m]) / ls[m];
                    const double kij =
                        sq_exp_kernel(x[i], x[j], ls, signal_var);
                    acc += w(i, j) * kij * r * r;
                }
            (*grad)(m) = 0.5 * acc;
        }
        // dK/d(log signal_sd) = 2 * (K - noise I).
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                acc += w(i, j) * 2.0 *
                       sq_exp_kernel(x[i], x[j], ls, signal_var);
        (*grad)(d) = 0.5 * acc;
    }
    return lml;
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

}  // namespace

GpModel gp_fit(const std::vector<std::vector<double>>& x,
               const std::vector<double>& y, int ascent_iterations) {
    if (x.empty() || x.size() != y.size())
        throw ValidationError("gp_fit: inputs and targets disagree");
    const std::size_t d = x.front().size();
    GpModel gp;
    gp.x = x;
    gp.y_mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double var = 0.0;
    for (double v : y) var += (v - gp.y_mean) * (v - gp.y_mean);
    var /= y.size();
    gp.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    gp.y_normalized.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        gp.y_normalized[i] = (y[i] - gp.y_mean) / gp.y_scale;
    gp.length_scales.assign(d, 0.5);
    gp.signal_variance = 1.0;
    gp.noise_variance = kNoiseFloor;

    Eigen::VectorXd yn =
        Eigen::Map<const Eigen::VectorXd>(gp.y_normalized.data(), y.size());

    // Gradient ascent in theta = (log ls..., log signal_sd) with backtracking.
    Eigen::VectorXd theta(d + 1);
    for (std::size_t m = 0; m < d; ++m) theta(m) = std::log(gp.length_scales[m]);
    theta(d) = 0.5 * std::log(gp.signal_variance);
    auto unpack = [&](const Eigen::VectorXd& t, std::vector<double>& ls,
                      double& sv) {
        ls.resize(d);
        for (std::size_t m = 0; m < d; ++m)
            ls[m] = std::exp(std::clamp(t(m), std::log(0.01), std::log(10.0)));
        sv = std::exp(2.0 * std::clamp(t(d), std::log(0.05), std::log(10.0)));
    };
    std::vector<double> ls;
    double sv;
    unpack(theta, ls, sv);
    Eigen::VectorXd grad;
    double best = log_marginal(x, yn, ls, sv, gp.noise_variance, &grad);
    double step = 0.1;
    for (int it = 0; it < ascent_iterations && step > 1e-6; ++it) {
        Eigen::VectorXd cand_theta = theta + step * grad;
        std::vector<double> cand_ls;
        double cand_sv;
        unpack(cand_theta, cand_ls, cand_sv);
        Eigen::VectorXd cand_grad;
        const double cand =
            log_marginal(x, yn, cand_ls, cand_sv, gp.noise_variance, &cand_grad);
        if (cand > best) {
            theta = cand_theta;
            best = cand;
            grad = cand_grad;
            step *= 1.2;
        } else {
            step *= 0.5;
        }
    }
    unpack(theta, gp.length_scales, gp.signal_variance);

    const Eigen::MatrixXd k =
        gram_matrix(x, gp.length_scales, gp.signal_variance, gp.noise_variance);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success)
        throw NumericError("gp_fit: kernel matrix not positive definite");
    const Eigen::VectorXd alpha = llt.solve(yn);
    gp.alpha.assign(alpha.data(), alpha.data() + alpha.size());
    return gp;
}

std::pair<double, double> gp_predict(const GpModel& gp,
                                     const std::vector<double>& x) {
    const std::size_t n = gp.x.size();
    if (x.size() != gp.x.front().size())
        throw ValidationError("gp_predict: dimension mismatch");
    Eigen::VectorXd kstar(n);
    for (std::size_t i = 0; i < n; ++i)
        kstar(i) =
            sq_exp_kernel(x, gp.x[i], gp.length_scales, gp.signal_variance);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += kstar(i) * gp.alpha[i];

    // Variance needs K^-1 k*; rebuild the factorization (n is tiny here).
    const Eigen::MatrixXd k =
        gram_matrix(gp.x, gp.length_scales, gp.signal_variance, gp.noise_variance);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    const Eigen::VectorXd v = llt.solve(kstar);
    double var = gp.signal_variance + gp.noise_variance - kstar.dot(v);
    var = std::max(var, 0.0);
    return {mean * gp.y_scale + gp.y_mean, var * gp.y_scale * gp.y_scale};
}

OptResult optimize(const Objective& objective, const SearchSpace& space,
                   const OptOptions& options) {
    space.validate();
    if (options.budget < 5) throw ValidationError("optimize: budget must be >= 5");
    Rng root(derive_seed(options.seed, 0x686f7074ULL));

    OptResult result;
    result.best_objective = kInf;
    auto evaluate = [&](const Point& p) {
        double loss;
        try {
            loss = objective(p);
            if (std::isnan(loss)) loss = kInf;
        } catch (const std::exception&) {
            loss = kInf;
        }
        result.trace.push_back({p, loss});
        if (loss < result.best_objective) {
            result.best_objective = loss;
            result.best_point = p;
        }
    };

    Rng lhs_rng = root.fork(1);
    const int init = std::min(5, options.budget);
    for (const auto& p : latin_hypercube(space, init, lhs_rng)) evaluate(p);

    Rng cand_rng = root.fork(2);
    GpModel gp;
    bool gp_ready = false;
    for (int it = init; it < options.budget; ++it) {
        // Refit the surrogate on the finite-loss observations.
        std::vector<std::vector<double>> gx;
        std::vector<double> gy;
        for (const auto& t : result.trace) {
            if (std::isfinite(t.objective)) {
                gx.push_back(embed_point(space, t.point));
                gy.push_back(t.objective);
            }
        }
        gp_ready = false;
        if (gx.size() >= 2) {
            try {
                gp = gp_fit(gx, gy);
                gp_ready = true;
            } catch (const Error&) {
                gp_ready = false;
            }
        }
        if (!gp_ready) {
            evaluate(random_point(space, cand_rng));
            continue;
        }
        // Expected improvement over 1024 random candidates (normalized units).
        const double y_best = (result.best_objective - gp.y_mean) / gp.y_scale;
        Point best_cand;
        double best_ei = -1.0;
        for (int c = 0; c < 1024; ++c) {
            const Point p = random_point(space, cand_rng);
            const auto e = embed_point(space, p);
            Eigen::VectorXd kstar(gp.x.size());
            double mean_n = 0.0;
            for (std::size_t i = 0; i < gp.x.size(); ++i) {
                kstar(i) = sq_exp_kernel(e, gp.x[i], gp.length_scales,
                                         gp.signal_variance);
                mean_n += kstar(i) * gp.alpha[i];
            }
            // Cheap variance bound: prior variance minus explained part at
            // the nearest observation would need the full solve; use the
            // exact solve (small n keeps this cheap).
            const auto [mu, var] = gp_predict(gp, e);
            const double mu_n = (mu - gp.y_mean) / gp.y_scale;
            const double sd_n = std::sqrt(var) / gp.y_scale;
            double ei = 0.0;
            if (sd_n > 1e-12) {
                const double z = (y_best - mu_n) / sd_n;
                ei = (y_best - mu_n) * norm_cdf(z) + sd_n * norm_pdf(z);
            }
            if (ei > best_ei) {
                best_ei = ei;
                best_cand = p;
            }
            (void)mean_n;
        }
        evaluate(best_cand);
    }

    if (options.snapshot_grid > 0 && gp_ready) {
        // Grid over the first (up to two) numeric dims, other coordinates
        // pinned to the incumbent.
        std::vector<std::size_t> axes;
        for (std::size_t i = 0; i < space.dims.size() && axes.size() < 2; ++i)
            if (space.dims[i].kind != DimKind::categorical) axes.push_back(i);
        SurrogateSnapshot snap;
        const int g = options.snapshot_grid;
        std::vector<int> idx(axes.size(), 0);
        const std::size_t total =
            axes.empty() ? 0
                         : static_cast<std::size_t>(std::pow(g, axes.size()));
        for (std::size_t flat = 0; flat < total; ++flat) {
            Point p = result.best_point;
            std::size_t rem = flat;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const int cell = static_cast<int>(rem % g);
                rem /= g;
                const Dim& d = space.dims[axes[a]];
                p[axes[a]] =
                    d.clamp_round(from_unit(d, (cell + 0.5) / g));
            }
            const auto [mu, var] = gp_predict(gp, embed_point(space, p));
            snap.points.push_back(p);
            snap.mean.push_back(mu);
            snap.variance.push_back(var);
        }
        (void)idx;
        result.snapshots.push_back(std::move(snap));
    }
    return result;
}

OptResult grid_search(const Objective& objective, const SearchSpace& space,
                      int points_per_dim) {
    space.validate();
    if (points_per_dim < 1)
        throw ValidationError("grid_search: points_per_dim must be >= 1");

    // Per-dim value lists.
    std::vector<std::vector<double>> values(space.dims.size());
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const Dim& d = space.dims[i];
        if (d.kind == DimKind::categorical) {
            for (std::size_t l = 0; l < d.levels.size(); ++l)
                values[i].push_back(static_cast<double>(l));
            continue;
        }
        for (int k = 0; k < points_per_dim; ++k) {
            const double u =
                points_per_dim == 1 ? 0.5
                                    : static_cast<double>(k) / (points_per_dim - 1);
            const double v = d.clamp_round(from_unit(d, u));
            if (values[i].empty() || values[i].back() != v) values[i].push_back(v);
        }
    }

    OptResult result;
    result.best_objective = kInf;
    Point p(space.dims.size());
    std::vector<std::size_t> idx(space.dims.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < space.dims.size(); ++i) p[i] = values[i][idx[i]];
        double loss;
        try {
            loss = objective(p);
            if (std::isnan(loss)) loss = kInf;
        } catch (const std::exception&) {
            loss = kInf;
        }
        result.trace.push_back({p, loss});
        if (loss < result.best_objective) {
            result.best_objective = loss;
            result.best_point = p;
        }
        // Odometer increment.
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < values[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return result;
}

SearchSpace default_search_space(MlFamily family, std::size_t train_rows) {
    const double half = std::max(2.0, std::floor(train_rows / 2.0));
    SearchSpace s;
    switch (family) {
        case MlFamily::knn:
            s.dims = {{"num_neighbors", DimKind::integer, 1.0,
                       std::min(50.0, half), {}},
                      {"metric", DimKind::categorical, 0, 0,
                       {"euclidean", "chebyshev", "cityblock"}}};
            break;
        case MlFamily::naive_bayes:
            s.dims = {{"mode", DimKind::categorical, 0, 0, {"gaussian", "kernel"}},
                      {"kernel_width", DimKind::log_real, 1e-3, 10.0, {}}};
            break;
        case MlFamily::tree:
            s.dims = {{"min_leaf_size", DimKind::integer, 1.0, half, {}}};
            break;
        case MlFamily::discriminant:
            s.dims = {{"delta", DimKind::log_real, 1e-6, 1e3, {}},
                      {"gamma", DimKind::real, 0.0, 1.0, {}}};
            break;
        case MlFamily::svm:
            s.dims = {{"box_constraint", DimKind::log_real, 1e-3, 1e3, {}},
                      {"kernel_scale", DimKind::log_real, 1e-3, 1e3, {}}};
            break;
        case MlFamily::ensemble:
            s.dims = {{"num_learning_cycles", DimKind::integer, 10.0, 100.0, {}},
                      {"min_leaf_size", DimKind::integer, 1.0, half, {}}};
            break;
    }
    return s;
}

MlHyperparams hyperparams_at(MlFamily family, const MlHyperparams& base,
                             const SearchSpace& space, const Point& point) {
    if (point.size() != space.dims.size())
        throw ValidationError("hyperparams_at: point/space size mismatch");
    MlHyperparams hp = base;
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const std::string& name = space.dims[i].name;
        const double v = point[i];
        if (name == "num_neighbors")
            hp.knn.num_neighbors = static_cast<int>(v);
        else if (name == "metric")
            hp.knn.metric = knn_metric_from_string(
                space.dims[i].levels.at(static_cast<std::size_t>(v)));
        else if (name == "mode")
            hp.nb.mode = nb_mode_from_string(
                space.dims[i].levels.at(static_cast<std::size_t>(v)));
        else if (name == "kernel_width")
            hp.nb.kernel_width = v;
        else if (name == "min_leaf_size" && family == MlFamily::ensemble)
            hp.ensemble.min_leaf_size = static_cast<int>(v);
        else if (name == "min_leaf_size")
            hp.tree.min_leaf_size = static_cast<int>(v);
        else if (name == "delta")
            hp.da.delta = v;
        else if (name == "gamma")
            hp.da.gamma = v;
        else if (name == "box_constraint")
            hp.svm.box_constraint = v;
        else if (name == "kernel_scale")
            hp.svm.kernel_scale = v;
        else if (name == "num_learning_cycles")
            hp.ensemble.num_learning_cycles = static_cast<int>(v);
        else
            throw ValidationError("unknown hyperparameter dimension '" + name + "'");
    }
    return hp;
}

Objective holdout_objective(const LabeledFeatures& data, MlFamily family,
                            double split_fraction, std::uint64_t seed,
                            const MlHyperparams& base) {
    data.validate();
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw ValidationError("split fraction must lie in (0, 1)");

    // Stratified, seeded split: the same partition for every evaluation.
    std::vector<std::size_t> train_idx, hold_idx;
    Rng rng(derive_seed(seed, 0x73706c69ULL));
    for (std::size_t c = 0; c < data.classes.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.rows(); ++i)
            if (data.y[i] == static_cast<int>(c)) members.push_back(i);
        for (std::size_t k = members.size(); k > 1; --k)
            std::swap(members[k - 1], members[rng.index(k)]);
        const std::size_t n_train =
            static_cast<std::size_t>(std::round(split_fraction * members.size()));
        if (n_train == 0 || n_train == members.size())
            throw ValidationError("split leaves a class empty on one side");
        for (std::size_t k = 0; k < members.size(); ++k)
            (k < n_train ? train_idx : hold_idx).push_back(members[k]);
    }

    LabeledFeatures train;
    train.classes = data.classes;
    for (std::size_t i : train_idx) {
        train.x.push_back(data.x[i]);
        train.y.push_back(data.y[i]);
    }
    std::vector<std::vector<double>> hold_x;
    std::vector<int> hold_y;
    for (std::size_t i : hold_idx) {
        hold_x.push_back(data.x[i]);
        hold_y.push_back(data.y[i]);
    }

    // Points are interpreted against the space derived from the FULL data
    // row count, so callers can build the identical space independently.
    const auto space = default_search_space(family, data.rows());
    const std::uint64_t train_seed = derive_seed(seed, 0x747261696eULL);
    return [train = std::move(train), hold_x = std::move(hold_x),
            hold_y = std::move(hold_y), family, base, space,
            train_seed](const Point& point) -> double {
        const MlHyperparams hp = hyperparams_at(family, base, space, point);
        const TrainedClassifier clf = train_ml(family, train, hp, train_seed);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < hold_x.size(); ++i)
            if (predict_ml(clf, hold_x[i]).class_index != hold_y[i]) wrong += 1;
        return static_cast<double>(wrong) / hold_x.size();
    };
}

void write_trace_csv(const std::string& path, const SearchSpace& space,
                     const OptResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "iteration";
    for (const auto& d : space.dims) out << "," << d.name;
    out << ",loss\n";
    char buf[64];
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        out << (i + 1);
        const auto& t = result.trace[i];
        for (std::size_t k = 0; k < space.dims.size(); ++k) {
            const Dim& d = space.dims[k];
            if (d.kind == DimKind::categorical) {
                out << "," << d.levels.at(static_cast<std::size_t>(t.point[k]));
            } else {
                std::snprintf(buf, sizeof(buf), ",%.9g", t.point[k]);
                out << buf;
            }
        }
        if (std::isfinite(t.objective)) {
            std::snprintf(buf, sizeof(buf), ",%.9g", t.objective);
            out << buf;
        } else {
            out << ",inf";
        }
        out << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

void write_surrogate_csv(const std::string& path, const SearchSpace& space,
                         const OptResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "snapshot";
    for (const auto& d : space.dims) out << "," << d.name;
    out << ",mean,variance\n";
    char buf[64];
    for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
        const auto& snap = result.snapshots[s];
        for (std::size_t i = 0; i < snap.points.size(); ++i) {
            out << (s + 1);
            for (std::size_t k = 0; k < space.dims.size(); ++k) {
                const Dim& d = space.dims[k];
                if (d.kind == DimKind::categorical) {
                    out << ","
                        << d.levels.at(static_cast<std::size_t>(snap.points[i][k]));
                } else {
                    std::snprintf(buf, sizeof(buf), ",%.9g", snap.points[i][k]);
                    out << buf;
                }
            }
            std::snprintf(buf, sizeof(buf), ",%.9g,%.9g", snap.mean[i],
                          snap.variance[i]);
            out << buf << "\n";
        }
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace rcs
