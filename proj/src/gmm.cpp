#include "rcsclass/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kCollapseTol = 1e-10;

double data_variance(std::span<const double> data, double* mean_out = nullptr) {
    long double m = 0.0L;
    for (double v : data) m += v;
    const double mean = static_cast<double>(m / data.size());
    long double acc = 0.0L;
    for (double v : data) {
        const double d = v - mean;
        acc += static_cast<long double>(d) * d;
    }
    if (mean_out) *mean_out = mean;
    return static_cast<double>(acc / data.size());
}

double log_normal_pdf(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}
}  // namespace

void GmmParams::validate() const {
    if (components.empty()) throw ValidationError("mixture has no components");
    double wsum = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw ValidationError("mixture weights must be positive");
        if (!std::isfinite(c.mean)) throw ValidationError("mixture mean must be finite");
        if (!(c.variance > 0.0) || !std::isfinite(c.variance))
            throw ValidationError("mixture variances must be positive");
        wsum += c.weight;
    }
    if (std::fabs(wsum - 1.0) > 1e-6)
        throw ValidationError("mixture weights must sum to one");
}

double gmm_log_pdf(const GmmParams& p, double x) {
    // log-sum-exp over components.
    double hi = -kInf;
    std::vector<double> terms(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const auto& c = p.components[k];
        terms[k] = std::log(c.weight) + log_normal_pdf(x, c.mean, c.variance);
        hi = std::max(hi, terms[k]);
    }
    if (hi == -kInf) return -kInf;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - hi);
    return hi + std::log(acc);
}

double gmm_pdf(const GmmParams& p, double x) { return std::exp(gmm_log_pdf(p, x)); }

double gmm_log_likelihood(const GmmParams& p, std::span<const double> data) {
    p.validate();
    long double acc = 0.0L;
    for (double x : data) {
        const double l = gmm_log_pdf(p, x);
        if (l == -kInf) return -kInf;
        acc += l;
    }
    return static_cast<double>(acc);
}

double sample(const GmmParams& p, Rng& rng) {
    p.validate();
    double u = rng.uniform();
    std::size_t k = 0;
    for (; k + 1 < p.size(); ++k) {
        if (u < p.components[k].weight) break;
        u -= p.components[k].weight;
    }
    const auto& c = p.components[k];
    return c.mean + std::sqrt(c.variance) * rng.normal();
}

std::vector<double> e_step(const GmmParams& p, std::span<const double> data) {
    p.validate();
    if (data.empty()) throw ValidationError("e_step: empty sample");
    const std::size_t n = data.size(), K = p.size();
    std::vector<double> resp(n * K);
    std::vector<double> terms(K);
    for (std::size_t i = 0; i < n; ++i) {
        double hi = -kInf;
        for (std::size_t k = 0; k < K; ++k) {
            const auto& c = p.components[k];
            terms[k] = std::log(c.weight) + log_normal_pdf(data[i], c.mean, c.variance);
            hi = std::max(hi, terms[k]);
        }
        double z = 0.0;
        for (std::size_t k = 0; k < K; ++k) z += std::exp(terms[k] - hi);
        for (std::size_t k = 0; k < K; ++k)
            resp[i * K + k] = std::exp(terms[k] - hi) / z;
    }
    return resp;
}

namespace {
// Non-throwing M-step core; returns false on responsibility collapse.
bool m_step_core(std::span<const double> resp, std::span<const double> data,
                 double variance_floor, GmmParams& out) {
    const std::size_t n = data.size();
    const std::size_t K = resp.size() / n;
    out.components.assign(K, {});
    for (std::size_t k = 0; k < K; ++k) {
        long double wsum = 0.0L, xsum = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            wsum += resp[i * K + k];
            xsum += resp[i * K + k] * data[i];
        }
        if (static_cast<double>(wsum) < kCollapseTol) return false;
        const double mean = static_cast<double>(xsum / wsum);
        long double vsum = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = data[i] - mean;
            vsum += resp[i * K + k] * d * d;
        }
        auto& c = out.components[k];
        c.weight = static_cast<double>(wsum) / static_cast<double>(n);
        c.mean = mean;
        c.variance = std::max(static_cast<double>(vsum / wsum), variance_floor);
    }
    return true;
}
}  // namespace

GmmParams m_step(std::span<const double> responsibilities,
                 std::span<const double> data) {
    if (data.empty()) throw ValidationError("m_step: empty sample");
    if (responsibilities.size() % data.size() != 0 || responsibilities.empty())
        throw ValidationError("m_step: responsibility matrix shape mismatch");
    const double floor = 1e-8 * data_variance(data);
    GmmParams out;
    if (!m_step_core(responsibilities, data, std::max(floor, 1e-300), out))
        throw EstimationError("m_step: component responsibility collapsed");
    return out;
}

namespace {

// k-means++-style seeding: centers drawn from the data, each weighted by
// squared distance to the nearest already-chosen center.
GmmParams init_params(std::span<const double> data, int K, double var, Rng& rng) {
    std::vector<double> centers;
    centers.push_back(data[rng.index(data.size())]);
    std::vector<double> d2(data.size());
    while (static_cast<int>(centers.size()) < K) {
        double total = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            double best = kInf;
            for (double c : centers) best = std::min(best, (data[i] - c) * (data[i] - c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.index(data.size());
        } else {
            double u = rng.uniform() * total;
            pick = data.size() - 1;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (u < d2[i]) {
                    pick = i;
                    break;
                }
                u -= d2[i];
            }
        }
        centers.push_back(data[pick]);
    }
    GmmParams p;
    for (double c : centers)
        p.components.push_back({1.0 / K, c, std::max(var, 1e-12)});
    return p;
}

// L2 norm of the stacked parameter change over (weights, means, sqrt vars).
double param_delta(const GmmParams& a, const GmmParams& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto &x = a.components[k], &y = b.components[k];
        const double dw = x.weight - y.weight;
        const double dm = x.mean - y.mean;
        const double ds = std::sqrt(x.variance) - std::sqrt(y.variance);
        acc += dw * dw + dm * dm + ds * ds;
    }
    return std::sqrt(acc);
}

}  // namespace

std::pair<GmmParams, EmTrace> fit_em(std::span<const double> data, int k,
                                     std::uint64_t seed, const EmOptions& opt) {
    if (k < 1) throw ValidationError("fit_em: need at least one component");
    if (data.size() < 2 * static_cast<std::size_t>(k))
        throw ValidationError("fit_em: need at least 2K samples");
    for (double v : data)
        if (!std::isfinite(v)) throw ValidationError("fit_em: samples must be finite");
    if (opt.restarts < 1 || opt.max_iterations < 1 || !(opt.epsilon > 0.0))
        throw ValidationError("fit_em: bad options");

    const double var = data_variance(data);
    if (!(var > 0.0))
        throw EstimationError("fit_em: data has zero variance");
    const double floor = opt.variance_floor_factor * var;

    Rng root(seed);
    GmmParams best_params;
    EmTrace best_trace;
    double best_final = -kInf;
    bool any_success = false;

    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = root.fork(static_cast<std::uint64_t>(r));
        GmmParams params = init_params(data, k, var, rng);
        EmTrace trace;
        trace.epsilon = opt.epsilon;
        double prev_ll = gmm_log_likelihood(params, data);
        bool collapsed = false;
        for (int it = 0; it < opt.max_iterations; ++it) {
            const auto resp = e_step(params, data);
            GmmParams next;
            if (!m_step_core(resp, data, floor, next)) {
                collapsed = true;
                break;
            }
            const double ll = gmm_log_likelihood(next, data);
            // EM is monotone in exact arithmetic; the variance floor is the
            // only mechanism that can break it.  Back out rather than accept
            // a worse model.
            if (ll < prev_ll - 1e-9) {
                trace.converged = true;
                break;
            }
            const double delta = param_delta(params, next);
            params = std::move(next);
            trace.loglik_history.push_back(ll);
            trace.iterations = it + 1;
            prev_ll = ll;
            if (delta < opt.epsilon) {
                trace.converged = true;
                break;
            }
        }
        if (collapsed) continue;
        any_success = true;
        if (prev_ll > best_final) {
            best_final = prev_ll;
            best_params = params;
            best_trace = trace;
        }
    }
    if (!any_success)
        throw EstimationError("fit_em: every restart collapsed",
                              "k=" + std::to_string(k));
    return {best_params, best_trace};
}

double aic_score(const GmmParams& p, std::span<const double> data, AicMode mode) {
    const double ll = gmm_log_likelihood(p, data);
    const double K = static_cast<double>(p.size());
    const double penalty = mode == AicMode::free_params ? 2.0 * (3.0 * K - 1.0)
                                                        : 2.0 * K;
    return -2.0 * ll + penalty;
}

KSelection select_k(std::span<const double> data, int k_max, std::uint64_t seed,
                    AicMode mode, const EmOptions& opt) {
    if (k_max < 1) throw ValidationError("select_k: k_max must be >= 1");
    KSelection sel;
    double best_aic = kInf;
    for (int k = 1; k <= k_max; ++k) {
        try {
            auto [params, trace] = fit_em(data, k, derive_seed(seed, k), opt);
            const double aic = aic_score(params, data, mode);
            sel.scores.emplace_back(k, aic);
            if (aic < best_aic) {  // strict: ties keep the smaller K
                best_aic = aic;
                sel.best_k = k;
            }
        } catch (const Error& e) {
            sel.failures.emplace_back(k, e.what());
        }
    }
    if (sel.best_k == 0)
        throw EstimationError("select_k: no component count could be fitted");
    return sel;
}

}  // namespace rcs
