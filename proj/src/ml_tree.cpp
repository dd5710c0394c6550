#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcsclass/ml_classifiers.hpp"
#include "rcsclass/rng.hpp"

// CART growing with Gini impurity, and the bagged-tree ensemble.

namespace rcs {

namespace {

double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double acc = 1.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        acc -= p * p;
    }
    return acc;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child Gini
};

// Best split of `rows` respecting min_leaf_size on both children; feature
// index then threshold break ties, keeping growth deterministic.
Split best_split(const std::vector<std::vector<double>>& x,
                 const std::vector<int>& y, const std::vector<int>& rows,
                 int num_classes, int min_leaf_size) {
    const int n = static_cast<int>(rows.size());
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    std::vector<int> order(rows.begin(), rows.end());
    std::vector<int> left_counts(num_classes), right_counts(num_classes);
    for (std::size_t f = 0; f < x.front().size(); ++f) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return x[a][f] < x[b][f];
        });
        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::fill(right_counts.begin(), right_counts.end(), 0);
        for (int r : order) right_counts[y[r]] += 1;
        // Sweep sample i from right to left child; a cut is legal between
        // distinct neighbor values with both sides >= min_leaf_size.
        for (int i = 0; i < n - 1; ++i) {
            left_counts[y[order[i]]] += 1;
            right_counts[y[order[i]]] -= 1;
            const int nl = i + 1, nr = n - nl;
            if (nl < min_leaf_size || nr < min_leaf_size) continue;
            const double a = x[order[i]][f], b = x[order[i + 1]][f];
            if (!(a < b)) continue;
            const double w = (nl * gini(left_counts, nl) +
                              nr * gini(right_counts, nr)) / n;
            if (w < best.impurity - 1e-15) {
                best.impurity = w;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (a + b);
            }
        }
    }
    return best;
}

int grow_node(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
              std::vector<int> rows, int num_classes, int min_leaf_size,
              TreeModel& tree) {
    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
        TreeNode& node = tree.nodes.back();
        node.count = static_cast<int>(rows.size());
        node.probs.assign(num_classes, 0.0);
        for (int r : rows) node.probs[y[r]] += 1.0 / rows.size();
    }

    std::vector<int> counts(num_classes, 0);
    for (int r : rows) counts[y[r]] += 1;
    const bool pure =
        *std::max_element(counts.begin(), counts.end()) == static_cast<int>(rows.size());
    if (pure || static_cast<int>(rows.size()) < 2 * min_leaf_size)
        return idx;

    const double parent = gini(counts, static_cast<int>(rows.size()));
    const Split split = best_split(x, y, rows, num_classes, min_leaf_size);
    if (split.feature < 0 || split.impurity >= parent - 1e-12) return idx;

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
        if (x[r][split.feature] < split.threshold)
            left_rows.push_back(r);
        else
            right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = grow_node(x, y, std::move(left_rows), num_classes,
                               min_leaf_size, tree);
    const int right = grow_node(x, y, std::move(right_rows), num_classes,
                                min_leaf_size, tree);
    TreeNode& node = tree.nodes[idx];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return idx;
}

}  // namespace

TreeModel grow_tree(const std::vector<std::vector<double>>& x,
                    const std::vector<int>& y, int num_classes,
                    int min_leaf_size) {
    if (x.empty() || x.size() != y.size())
        throw ValidationError("grow_tree: bad training arrays");
    if (min_leaf_size < 1) throw ValidationError("grow_tree: min_leaf_size >= 1");
    TreeModel tree;
    std::vector<int> rows(x.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow_node(x, y, std::move(rows), num_classes, min_leaf_size, tree);
    return tree;
}

const TreeNode& tree_leaf(const TreeModel& tree, std::span<const double> fv) {
    if (tree.nodes.empty()) throw ValidationError("empty tree");
    int idx = 0;
    for (;;) {
        const TreeNode& node = tree.nodes[idx];
        if (node.feature < 0) return node;
        idx = fv[node.feature] < node.threshold ? node.left : node.right;
    }
}

EnsembleState train_ensemble(const LabeledFeatures& data,
                             const std::vector<std::vector<double>>& xs,
                             const EnsembleParams& p, std::uint64_t seed) {
    EnsembleState st;
    const int M = static_cast<int>(data.classes.size());
    Rng root(seed);
    for (int t = 0; t < p.num_learning_cycles; ++t) {
        if (p.bootstrap) {
            Rng rng = root.fork(static_cast<std::uint64_t>(t));
            std::vector<std::vector<double>> bx(xs.size());
            std::vector<int> by(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const std::size_t pick = rng.index(xs.size());
                bx[i] = xs[pick];
                by[i] = data.y[pick];
            }
            st.trees.push_back(grow_tree(bx, by, M, p.min_leaf_size));
        } else {
            st.trees.push_back(grow_tree(xs, data.y, M, p.min_leaf_size));
        }
    }
    return st;
}

}  // namespace rcs
