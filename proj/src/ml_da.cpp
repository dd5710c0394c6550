#include <Eigen/Dense>
#include <cmath>

#include "rcsclass/ml_classifiers.hpp"

// Regularized linear discriminant analysis.

namespace rcs {

DaState train_da(const LabeledFeatures& data,
                 const std::vector<std::vector<double>>& xs, const DaParams& p);

DaState train_da(const LabeledFeatures& data,
                 const std::vector<std::vector<double>>& xs, const DaParams& p) {
    const std::size_t n = xs.size(), d = xs.front().size();
    const std::size_t M = data.classes.size();
    if (n <= M)
        throw ValidationError("discriminant analysis needs more samples than classes");

    std::vector<std::size_t> counts(M, 0);
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(M, d);
    for (std::size_t i = 0; i < n; ++i) {
        counts[data.y[i]] += 1;
        for (std::size_t j = 0; j < d; ++j) means(data.y[i], j) += xs[i][j];
    }
    for (std::size_t c = 0; c < M; ++c) {
        if (counts[c] == 0) throw ValidationError("empty class in DA training");
        means.row(c) /= static_cast<double>(counts[c]);
    }

    // Pooled within-class covariance with the unbiased n - M denominator.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd dev(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) dev(j) = xs[i][j] - means(data.y[i], j);
        cov.noalias() += dev * dev.transpose();
    }
    cov /= static_cast<double>(n - M);

    // Shrink toward the diagonal.
    Eigen::MatrixXd reg = (1.0 - p.gamma) * cov;
    reg.diagonal() = cov.diagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() != Eigen::Success) {
        if (p.gamma == 0.0)
            throw NumericError(
                "discriminant analysis: pooled covariance is singular; "
                "set gamma > 0 to regularize");
        throw NumericError("discriminant analysis: regularized covariance is singular");
    }

    DaState st;
    st.coef.assign(M, std::vector<double>(d, 0.0));
    st.bias.assign(M, 0.0);
    for (std::size_t c = 0; c < M; ++c) {
        const Eigen::VectorXd mu = means.row(c).transpose();
        Eigen::VectorXd w = llt.solve(mu);
        // Sparsify: linear coefficients at or below delta are dropped.
        for (std::size_t j = 0; j < d; ++j)
            if (std::fabs(w(j)) <= p.delta) w(j) = 0.0;
        st.bias[c] = -0.5 * mu.dot(w) +
                     std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        for (std::size_t j = 0; j < d; ++j) st.coef[c][j] = w(j);
    }
    return st;
}

}  // namespace rcs
