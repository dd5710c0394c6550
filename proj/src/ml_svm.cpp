#include <algorithm>
#include <cmath>
#include <vector>

#include "rcsclass/ml_classifiers.hpp"
#include "rcsclass/rng.hpp"

// One-vs-all soft-margin SVM with RBF kernel trained by sequential minimal
// optimization (Platt's working-set heuristics, error cache, KKT tolerance
// 1e-3, hard cap of 1e6 pair updates).

namespace rcs {

namespace {

constexpr double kTol = 1e-3;    // KKT violation tolerance
constexpr double kEps = 1e-12;   // minimal meaningful alpha change
constexpr long kMaxSteps = 1000000;

class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, std::vector<double> y,
              double c, double scale, Rng rng)
        : x_(x), y_(std::move(y)), c_(c), inv_s2_(1.0 / (scale * scale)),
          rng_(rng), n_(x.size()) {
        alpha_.assign(n_, 0.0);
        error_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];  // f == 0 initially
        if (n_ <= 2048) {
            gram_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    gram_[i * n_ + j] = gram_[j * n_ + i] = kernel_direct(i, j);
        }
    }

    void solve() {
        bool examine_all = true;
        int num_changed = 0;
        do {
            num_changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) num_changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (is_free(alpha_[i])) num_changed += examine(i);
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
        } while (num_changed > 0 || !examine_all);
    }

    SvmMachine machine() const {
        SvmMachine m;
        m.bias = -b_;  // predictor adds the bias; the solver subtracts it
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > kEps) {
                m.support.push_back(x_[i]);
                m.dual.push_back(alpha_[i] * y_[i]);
            }
        }
        return m;
    }

private:
    bool is_free(double a) const { return a > 0.0 && a < c_; }

    double kernel_direct(std::size_t i, std::size_t j) const {
        double d2 = 0.0;
        const auto &a = x_[i], &b = x_[j];
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            d2 += d * d;
        }
        return std::exp(-d2 * inv_s2_);
    }

    double kernel(std::size_t i, std::size_t j) const {
        return gram_.empty() ? kernel_direct(i, j) : gram_[i * n_ + j];
    }

    int examine(std::size_t i2) {
        const double y2 = y_[i2], alph2 = alpha_[i2], e2 = error_[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -kTol && alph2 < c_) || (r2 > kTol && alph2 > 0.0))) return 0;

        // Second-choice heuristic: the free point with the largest |E1 - E2|.
        std::ptrdiff_t best = -1;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(alpha_[i])) continue;
            const double gap = std::fabs(error_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (best >= 0 && take_step(static_cast<std::size_t>(best), i2)) return 1;

        // Then every free point, then every point, from a seeded offset.
        const std::size_t start = rng_.index(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (is_free(alpha_[i1]) && take_step(i1, i2)) return 1;
        }
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (!is_free(alpha_[i1]) && take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha_[i1], alph2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = error_[i1], e2 = error_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c_, c_ + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c_);
            hi = std::min(c_, alph1 + alph2);
        }
        if (lo >= hi) return false;

        const double k11 = kernel(i1, i1), k12 = kernel(i1, i2), k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = alph2 + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Degenerate curvature (duplicate points): compare the objective
            // at both clip ends.
            const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + b_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (lobj < hobj - kEps)
                a2 = lo;
            else if (lobj > hobj + kEps)
                a2 = hi;
            else
                return false;
        }
        if (std::fabs(a2 - alph2) < kEps * (a2 + alph2 + kEps)) return false;
        const double a1 = alph1 + s * (alph2 - a2);

        // Bias so that the updated pair satisfies KKT.
        const double b1 = e1 + y1 * (a1 - alph1) * k11 + y2 * (a2 - alph2) * k12 + b_;
        const double b2 = e2 + y1 * (a1 - alph1) * k12 + y2 * (a2 - alph2) * k22 + b_;
        double b_new;
        if (a1 > 0.0 && a1 < c_)
            b_new = b1;
        else if (a2 > 0.0 && a2 < c_)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        // Platt's threshold convention (u = sum alpha y K - b); the error
        // cache update is exact for every point including i1 and i2.
        const double delta_b = b_new - b_;
        const double t1 = y1 * (a1 - alph1), t2 = y2 * (a2 - alph2);
        for (std::size_t i = 0; i < n_; ++i)
            error_[i] += t1 * kernel(i1, i) + t2 * kernel(i2, i) - delta_b;

        alpha_[i1] = a1;
        alpha_[i2] = a2;
        b_ = b_new;
        if (++steps_ > kMaxSteps)
            throw EstimationError("SVM training exceeded 1e6 pair updates");
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    std::vector<double> y_;
    double c_;
    double inv_s2_;
    Rng rng_;
    std::size_t n_;
    std::vector<double> alpha_, error_, gram_;
    double b_ = 0.0;
    long steps_ = 0;
};

}  // namespace

SvmState train_svm(const LabeledFeatures& data,
                   const std::vector<std::vector<double>>& xs, const SvmParams& p,
                   std::uint64_t seed);

SvmState train_svm(const LabeledFeatures& data,
                   const std::vector<std::vector<double>>& xs, const SvmParams& p,
                   std::uint64_t seed) {
    SvmState st;
    Rng root(seed);
    for (std::size_t c = 0; c < data.classes.size(); ++c) {
        std::vector<double> y(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            y[i] = data.y[i] == static_cast<int>(c) ? 1.0 : -1.0;
        SmoSolver solver(xs, std::move(y), p.box_constraint, p.kernel_scale,
                         root.fork(c));
        solver.solve();
        st.machines.push_back(solver.machine());
    }
    return st;
}

}  // namespace rcs
