#pragma once

#include <span>
#include <string>

#include "rcsclass/errors.hpp"
#include "rcsclass/rng.hpp"

namespace rcs {

// psi(x) and psi'(x) for x > 0 (recurrence into the asymptotic regime).
double digamma(double x);
double trigamma(double x);

// --- Chi-square fluctuation family -----------------------------------------
// P(sigma) = m / (Gamma(m) * mean) * (m sigma / mean)^(m-1) * exp(-m sigma / mean)
// m = 1 covers slow/fast scan-to-scan exponential fading, m = 2 the
// dominant-plus-small-scatterers case.
struct ChiSquareParams {
    double degrees = 1.0;   // m, duty parameter; fitting supports m in {1, 2}
    double mean_rcs = 1.0;  // mean RCS, m^2

    void validate() const;
};

// --- Gamma family (shape/rate) ----------------------------------------------
struct GammaParams {
    double shape = 1.0;  // alpha > 0
    double rate = 1.0;   // beta > 0

    void validate() const;
};

// --- Generalized Pareto (Lomax) family --------------------------------------
// P(sigma) = (alpha / lambda) * (1 + sigma / lambda)^-(alpha + 1)
struct GpdParams {
    double shape = 1.0;  // alpha > 0
    double scale = 1.0;  // lambda > 0

    void validate() const;
};

double pdf(const ChiSquareParams& p, double sigma);
double pdf(const GammaParams& p, double sigma);
double pdf(const GpdParams& p, double sigma);

double log_pdf(const ChiSquareParams& p, double sigma);
double log_pdf(const GammaParams& p, double sigma);
double log_pdf(const GpdParams& p, double sigma);

// Sum of log densities; -infinity as soon as any datum has zero density.
double log_likelihood(const ChiSquareParams& p, std::span<const double> data);
double log_likelihood(const GammaParams& p, std::span<const double> data);
double log_likelihood(const GpdParams& p, std::span<const double> data);

// Closed form: the mean-RCS estimate is the sample mean for either m.
ChiSquareParams fit_chi_square(std::span<const double> data, double degrees);

// Newton iteration on the profile equation ln(alpha) - psi(alpha) =
// ln(mean) - mean(ln sigma); moment-matched start, |step| < 1e-10 stop,
// at most 100 iterations.  Throws EstimationError on non-convergence.
GammaParams fit_gamma_mle(std::span<const double> data);

// Safeguarded Newton ascent in (ln alpha, ln lambda); if the gradient
// sup-norm does not reach 1e-8, falls back to a golden-section search of the
// profile likelihood over lambda, where alpha(lambda) = n / sum ln(1 +
// sigma_i/lambda) is exact.  Near-exponential data pushes lambda to the
// search boundary; the boundary fit is returned rather than treated as an
// error.
GpdParams fit_gpd_mle(std::span<const double> data);

double sample(const ChiSquareParams& p, Rng& rng);
double sample(const GammaParams& p, Rng& rng);
double sample(const GpdParams& p, Rng& rng);

}  // namespace rcs
