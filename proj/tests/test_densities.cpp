#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rcsclass/densities.hpp"
#include "test_support.hpp"

using namespace rcs;

namespace {

std::vector<double> draw(int n, std::uint64_t seed, auto&& gen) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = gen(rng);
    return v;
}

// Closed-form heavy-tail log-likelihood used as the independent second
// formula: n ln a - n ln l - (1 + a) sum ln(1 + x/l).
double lomax_loglik_closed_form(const GpdParams& p, std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::log1p(v / p.scale);
    const double n = static_cast<double>(x.size());
    return n * std::log(p.shape) - n * std::log(p.scale) - (1.0 + p.shape) * s;
}

}  // namespace

TEST_CASE("pdf closed-form spot values") {
    CHECK(pdf(ChiSquareParams{1.0, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pdf(ChiSquareParams{2.0, 1.0}, 0.5) ==
          doctest::Approx(4.0 * 0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(pdf(GpdParams{1.0, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gamma(1,1) equals the exponential chi-square pointwise") {
    const GammaParams g{1.0, 1.0};
    const ChiSquareParams c{1.0, 1.0};
    for (double x : {0.0, 0.05, 0.3, 1.0, 2.5, 7.0, 20.0})
        CHECK(pdf(g, x) == doctest::Approx(pdf(c, x)).epsilon(1e-12));
}

TEST_CASE("pdf vanishes for negative arguments and is never negative") {
    const ChiSquareParams c{2.0, 3.0};
    const GammaParams g{0.7, 2.0};
    const GpdParams p{2.0, 0.5};
    for (double x : {-5.0, -0.1, -1e-12}) {
        CHECK(pdf(c, x) == 0.0);
        CHECK(pdf(g, x) == 0.0);
        CHECK(pdf(p, x) == 0.0);
    }
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(eng);
        CHECK(pdf(c, x) >= 0.0);
        CHECK(pdf(g, x) >= 0.0);
        CHECK(pdf(p, x) >= 0.0);
    }
}

TEST_CASE("densities integrate to one over the positive axis") {
    std::mt19937_64 eng(19);
    std::uniform_real_distribution<double> logscale(std::log(0.01), std::log(100.0));
    std::uniform_real_distribution<double> shape(0.3, 8.0);
    for (int i = 0; i < 10; ++i) {
        const double sbar = std::exp(logscale(eng));
        CHECK(testsup::normalization(ChiSquareParams{1.0, sbar}) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(testsup::normalization(ChiSquareParams{2.0, sbar}) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(testsup::normalization(GammaParams{shape(eng), std::exp(logscale(eng))}) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(testsup::normalization(GpdParams{shape(eng), std::exp(logscale(eng))}) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("log-likelihood spot values and dual-formula agreement") {
    CHECK(log_likelihood(GpdParams{1.0, 1.0}, std::vector<double>{0.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(log_likelihood(ChiSquareParams{1.0, 1.0}, std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(-2.0).epsilon(1e-12));

    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> u(0.01, 20.0);
    for (int t = 0; t < 20; ++t) {
        const GpdParams p{u(eng) * 0.3 + 0.3, u(eng) * 0.2 + 0.1};
        std::vector<double> data(50);
        for (auto& x : data) x = u(eng);
        const double a = log_likelihood(p, data);
        const double b = lomax_loglik_closed_form(p, data);
        CHECK(testsup::close_rel(a, b, 1e-9));
    }
}

TEST_CASE("log-likelihood is minus infinity when a datum has zero density") {
    // A shape-2 chi-square density is zero at the origin.
    const double ll =
        log_likelihood(ChiSquareParams{2.0, 1.0}, std::vector<double>{0.0, 1.0});
    CHECK(std::isinf(ll));
    CHECK(ll < 0.0);
}

TEST_CASE("chi-square fit is the sample mean with the duty passed through") {
    const auto p = fit_chi_square(std::vector<double>{2.0, 4.0}, 1.0);
    CHECK(p.mean_rcs == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(p.degrees == 1.0);

    const auto q = fit_chi_square(std::vector<double>{2.0, 4.0}, 2.0);
    CHECK(q.degrees == 2.0);

    CHECK_THROWS_AS(fit_chi_square(std::vector<double>{0.0, 0.0}, 1.0), Error);
}

TEST_CASE("chi-square fit recovers the mean from samples") {
    const auto data = draw(100000, 41, [](Rng& r) { return r.exponential(5.0); });
    const auto p = fit_chi_square(data, 1.0);
    CHECK(p.mean_rcs == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("gamma MLE recovers known parameters") {
    const GammaParams truth{2.0, 2.0};
    const auto data =
        draw(100000, 43, [&](Rng& r) { return sample(truth, r); });
    const auto fit = fit_gamma_mle(data);
    CHECK(fit.shape == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gamma MLE rejects constant data") {
    CHECK_THROWS_AS(fit_gamma_mle(std::vector<double>{3.0, 3.0, 3.0}), Error);
}

TEST_CASE("gamma MLE dominates the moment-matched start") {
    std::mt19937_64 eng(47);
    std::uniform_real_distribution<double> u(0.3, 6.0);
    for (int t = 0; t < 10; ++t) {
        const GammaParams truth{u(eng), u(eng)};
        const auto data =
            draw(2000, 100 + t, [&](Rng& r) { return sample(truth, r); });
        const auto fit = fit_gamma_mle(data);
        // Independent moment-matching estimate.
        const double mean = testsup::naive_mean(data);
        const double var = testsup::naive_variance_n(data);
        const GammaParams moments{mean * mean / var, mean / var};
        CHECK(log_likelihood(fit, data) >=
              log_likelihood(moments, data) - 1e-9);
    }
}

TEST_CASE("heavy-tail MLE recovers known parameters") {
    const GpdParams truth{3.0, 2.0};
    const auto data =
        draw(100000, 53, [&](Rng& r) { return sample(truth, r); });
    const auto fit = fit_gpd_mle(data);
    CHECK(fit.shape == doctest::Approx(3.0).epsilon(0.10));
    CHECK(fit.scale == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("heavy-tail MLE satisfies the stationarity identity") {
    const GpdParams truth{2.0, 1.5};
    const auto data =
        draw(20000, 59, [&](Rng& r) { return sample(truth, r); });
    const auto fit = fit_gpd_mle(data);
    double s = 0.0;
    for (double x : data) s += std::log1p(x / fit.scale);
    const double alpha_of_lambda = static_cast<double>(data.size()) / s;
    CHECK(testsup::close_rel(fit.shape, alpha_of_lambda, 1e-6));
}

TEST_CASE("heavy-tail MLE beats a surrounding parameter grid") {
    const GpdParams truth{1.8, 0.7};
    const auto data =
        draw(5000, 61, [&](Rng& r) { return sample(truth, r); });
    const auto fit = fit_gpd_mle(data);
    const double best = log_likelihood(fit, data);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const GpdParams p{fit.shape * std::pow(1.6, (i - 9.5) / 9.5),
                              fit.scale * std::pow(1.6, (j - 9.5) / 9.5)};
            CHECK(log_likelihood(p, data) <= best + 1e-9);
        }
    }
}

TEST_CASE("digamma and trigamma match series values") {
    // psi(1) = -gamma_E, psi(2) = 1 - gamma_E; psi'(1) = pi^2/6.
    const double gamma_e = 0.57721566490153286;
    CHECK(digamma(1.0) == doctest::Approx(-gamma_e).epsilon(1e-10));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - gamma_e).epsilon(1e-10));
    CHECK(trigamma(1.0) ==
          doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-10));
}
