#include "rcsclass/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_data(std::span<const double> data, const char* who) {
    if (data.empty()) throw ValidationError(std::string(who) + ": empty sample");
    for (double v : data)
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError(std::string(who) + ": samples must be finite and >= 0");
}

double sample_mean(std::span<const double> data) {
    long double acc = 0.0L;
    for (double v : data) acc += v;
    return static_cast<double>(acc / data.size());
}
}  // namespace

double digamma(double x) {
    if (!(x > 0.0)) throw NumericError("digamma: argument must be positive");
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series with Bernoulli coefficients.
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = std::log(x) - 0.5 * inv;
    s -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
         inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return acc + s;
}

double trigamma(double x) {
    if (!(x > 0.0)) throw NumericError("trigamma: argument must be positive");
    double acc = 0.0;
    while (x < 6.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = inv * (1.0 + 0.5 * inv);
    s += inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 -
         inv2 * (1.0 / 30.0))));
    return acc + s;
}

void ChiSquareParams::validate() const {
    if (!(degrees > 0.0) || !std::isfinite(degrees))
        throw ValidationError("chi-square duty parameter must be positive");
    if (!(mean_rcs > 0.0) || !std::isfinite(mean_rcs))
        throw ValidationError("chi-square mean RCS must be positive");
}

void GammaParams::validate() const {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw ValidationError("gamma shape must be positive");
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ValidationError("gamma rate must be positive");
}

void GpdParams::validate() const {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw ValidationError("Pareto shape must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ValidationError("Pareto scale must be positive");
}

double log_pdf(const ChiSquareParams& p, double sigma) {
    p.validate();
    if (sigma < 0.0) return -kInf;
    const double m = p.degrees, mean = p.mean_rcs;
    if (sigma == 0.0) {
        if (m == 1.0) return -std::log(mean);
        return m > 1.0 ? -kInf : kInf;
    }
    return std::log(m) - std::lgamma(m) - std::log(mean) +
           (m - 1.0) * std::log(m * sigma / mean) - m * sigma / mean;
}

double log_pdf(const GammaParams& p, double sigma) {
    p.validate();
    if (sigma < 0.0) return -kInf;
    const double a = p.shape, b = p.rate;
    if (sigma == 0.0) {
        if (a == 1.0) return std::log(b);
        return a > 1.0 ? -kInf : kInf;
    }
    return a * std::log(b) + (a - 1.0) * std::log(sigma) - b * sigma - std::lgamma(a);
}

double log_pdf(const GpdParams& p, double sigma) {
    p.validate();
    if (sigma < 0.0) return -kInf;
    return std::log(p.shape) - std::log(p.scale) -
           (p.shape + 1.0) * std::log1p(sigma / p.scale);
}

double pdf(const ChiSquareParams& p, double sigma) { return std::exp(log_pdf(p, sigma)); }
double pdf(const GammaParams& p, double sigma) { return std::exp(log_pdf(p, sigma)); }
double pdf(const GpdParams& p, double sigma) { return std::exp(log_pdf(p, sigma)); }

namespace {
template <class P>
double loglik_impl(const P& p, std::span<const double> data) {
    long double acc = 0.0L;
    for (double v : data) {
        const double l = log_pdf(p, v);
        if (l == -kInf) return -kInf;
        acc += l;
    }
    return static_cast<double>(acc);
}
}  // namespace

double log_likelihood(const ChiSquareParams& p, std::span<const double> data) {
    return loglik_impl(p, data);
}
double log_likelihood(const GammaParams& p, std::span<const double> data) {
    return loglik_impl(p, data);
}
double log_likelihood(const GpdParams& p, std::span<const double> data) {
    return loglik_impl(p, data);
}

ChiSquareParams fit_chi_square(std::span<const double> data, double degrees) {
    check_data(data, "fit_chi_square");
    if (degrees != 1.0 && degrees != 2.0)
        throw ValidationError("fit_chi_square: duty parameter must be 1 or 2");
    const double mean = sample_mean(data);
    if (!(mean > 0.0)) throw EstimationError("fit_chi_square: sample mean is zero");
    return ChiSquareParams{degrees, mean};
}

GammaParams fit_gamma_mle(std::span<const double> data) {
    check_data(data, "fit_gamma_mle");
    // Zero samples are clamped to 1e-12 m^2: the gamma log-density needs
    // ln(sigma), and exact zeros occur only through dB clamping anyway.
    std::vector<double> x(data.begin(), data.end());
    for (double& v : x)
        if (v < 1e-12) v = 1e-12;
    const double mean = sample_mean(x);
    if (!(mean > 0.0)) throw EstimationError("fit_gamma_mle: sample mean is zero");
    long double log_acc = 0.0L, sq_acc = 0.0L;
    for (double v : x) {
        log_acc += std::log(v);
        const double d = v - mean;
        sq_acc += static_cast<long double>(d) * d;
    }
    data = x;
    const double mean_log = static_cast<double>(log_acc / data.size());
    const double var = static_cast<double>(sq_acc / data.size());
    const double s = std::log(mean) - mean_log;  // >= 0 by Jensen
    if (!(s > 0.0))
        throw EstimationError("fit_gamma_mle: degenerate sample (zero log-spread)");

    // Moment start, then Newton on f(a) = ln(a) - psi(a) - s.
    double alpha = var > 0.0 ? mean * mean / var : 1.0 / (2.0 * s);
    alpha = std::clamp(alpha, 1e-3, 1e6);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(alpha) - digamma(alpha) - s;
        const double fp = 1.0 / alpha - trigamma(alpha);
        double step = f / fp;
        // Keep alpha positive; halve the step rather than jump across zero.
        while (alpha - step <= 0.0) step *= 0.5;
        alpha -= step;
        if (std::fabs(step) < 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "alpha=" << alpha;
        throw EstimationError("fit_gamma_mle: Newton did not converge", os.str());
    }
    GammaParams p{alpha, alpha / mean};
    p.validate();
    return p;
}

namespace {

// sum ln(1 + x_i / lambda) and sum x_i / (lambda + x_i), the two pieces every
// Pareto likelihood expression needs.
struct GpdSums {
    double s = 0.0;  // sum ln(1 + x/lambda)
    double t = 0.0;  // sum x / (lambda + x)
    double u = 0.0;  // sum x^2 / (lambda + x)^2
};

GpdSums gpd_sums(std::span<const double> data, double lambda) {
    long double s = 0.0L, t = 0.0L, u = 0.0L;
    for (double x : data) {
        s += std::log1p(x / lambda);
        const double r = x / (lambda + x);
        t += r;
        u += static_cast<long double>(r) * r;
    }
    return {static_cast<double>(s), static_cast<double>(t), static_cast<double>(u)};
}

double gpd_profile_loglik(std::span<const double> data, double lambda) {
    const double n = static_cast<double>(data.size());
    const double s = gpd_sums(data, lambda).s;
    if (!(s > 0.0)) return -kInf;
    // L(alpha(lambda), lambda) with alpha = n/s.
    return n * std::log(n / s) - n * std::log(lambda) - s - n;
}

}  // namespace

GpdParams fit_gpd_mle(std::span<const double> data) {
    check_data(data, "fit_gpd_mle");
    const double n = static_cast<double>(data.size());
    const double mean = sample_mean(data);
    if (!(mean > 0.0)) throw EstimationError("fit_gpd_mle: sample mean is zero");
    long double sq = 0.0L;
    for (double v : data) {
        const double d = v - mean;
        sq += static_cast<long double>(d) * d;
    }
    const double var = static_cast<double>(sq / data.size());

    // Moment start: cv^2 = alpha/(alpha-2) for alpha > 2.
    const double cv2 = var / (mean * mean);
    double alpha = cv2 > 1.0 ? 2.0 * cv2 / (cv2 - 1.0) : 3.0;
    alpha = std::clamp(alpha, 0.5, 100.0);
    double lambda = std::max(mean * std::max(alpha - 1.0, 0.1), 1e-12);

    // Newton ascent in (ln alpha, ln lambda) with a backtracking line search.
    double la = std::log(alpha), ll = std::log(lambda);
    auto loglik = [&](double a, double l) {
        const double s = gpd_sums(data, l).s;
        return n * std::log(a) - n * std::log(l) - (1.0 + a) * s;
    };
    double best = loglik(alpha, lambda);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const auto sums = gpd_sums(data, lambda);
        // Gradient in log-parameters.
        const double ga = n - alpha * sums.s;               // alpha * dL/dalpha
        const double gl = -n + (1.0 + alpha) * sums.t;      // lambda * dL/dlambda
        if (std::max(std::fabs(ga), std::fabs(gl)) < 1e-8) {
            converged = true;
            break;
        }
        // Hessian in log-parameters: d(ga)/d(ll) = d(gl)/d(la) = alpha*T and
        // lambda * dT/dlambda = -(T - U).
        const double a11 = -alpha * sums.s;
        const double a12 = alpha * sums.t;
        const double a21 = a12;
        const double a22 = -(1.0 + alpha) * (sums.t - sums.u);
        const double det = a11 * a22 - a12 * a21;
        double dla, dll;
        if (std::fabs(det) > 1e-30) {
            dla = (-ga * a22 + gl * a12) / det;
            dll = (-gl * a11 + ga * a21) / det;
        } else {
            dla = ga / n;  // gradient ascent fallback, crudely scaled
            dll = gl / n;
        }
        // Limit the step and backtrack until the likelihood improves.
        const double norm = std::max(std::fabs(dla), std::fabs(dll));
        if (norm > 2.0) {
            dla *= 2.0 / norm;
            dll *= 2.0 / norm;
        }
        double scale = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            const double na = std::exp(la + scale * dla);
            const double nl = std::exp(ll + scale * dll);
            const double cand = loglik(na, nl);
            if (std::isfinite(cand) && cand >= best - 1e-12) {
                la += scale * dla;
                ll += scale * dll;
                alpha = na;
                lambda = nl;
                best = cand;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;
    }

    if (!converged) {
        // Profile-likelihood fallback: alpha(lambda) is exact, so only lambda
        // needs searching.  Golden-section over a wide log bracket; data that
        // is really exponential drives lambda to the upper edge, which is the
        // correct limiting fit, not a failure.
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = std::log(mean) - 18.0, hi = std::log(mean) + 18.0;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = gpd_profile_loglik(data, std::exp(x1));
        double f2 = gpd_profile_loglik(data, std::exp(x2));
        for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = gpd_profile_loglik(data, std::exp(x2));
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = gpd_profile_loglik(data, std::exp(x1));
            }
        }
        lambda = std::exp(0.5 * (lo + hi));
        const double s = gpd_sums(data, lambda).s;
        if (!(s > 0.0))
            throw EstimationError("fit_gpd_mle: degenerate sample");
        alpha = n / s;
    }
    GpdParams p{alpha, lambda};
    p.validate();
    return p;
}

double sample(const ChiSquareParams& p, Rng& rng) {
    p.validate();
    // Chi-square fluctuation with duty m is Gamma(shape=m, rate=m/mean).
    return rng.gamma(p.degrees, p.degrees / p.mean_rcs);
}

double sample(const GammaParams& p, Rng& rng) {
    p.validate();
    return rng.gamma(p.shape, p.rate);
}

double sample(const GpdParams& p, Rng& rng) {
    p.validate();
    return rng.lomax(p.shape, p.scale);
}

}  // namespace rcs
