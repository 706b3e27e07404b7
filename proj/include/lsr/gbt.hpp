#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lsr/common.hpp"

namespace lsr {

/// One node of a regression tree. Internal nodes have feature >= 0 and route
/// left iff x[feature] <= threshold; leaves have feature == -1 and carry the
/// (unscaled) leaf weight.
struct GbtNode {
    int feature = -1;
    double threshold = 0.0;
    double weight = 0.0;
    int left = -1;
    int right = -1;

    bool is_leaf() const { return feature < 0; }
};

/// Nodes stored in pre-order; the root is nodes[0].
struct GbtTree {
    std::vector<GbtNode> nodes;
};

struct GbtRegressor {
    double base_score = 0.0;
    double learning_rate = 0.1;
    int max_depth = 6;
    std::vector<GbtTree> trees;
};

inline double gbt_predict_tree(const GbtTree& tree, const double* x) {
    int idx = 0;
    while (!tree.nodes[idx].is_leaf()) {
        const GbtNode& nd = tree.nodes[idx];
        idx = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[idx].weight;
}

inline double gbt_predict(const GbtRegressor& reg, const double* x) {
    double acc = 0.0;
    for (const GbtTree& tree : reg.trees) acc += gbt_predict_tree(tree, x);
    return reg.base_score + reg.learning_rate * acc;
}

inline double gbt_predict(const GbtRegressor& reg, const std::vector<double>& x) {
    return gbt_predict(reg, x.data());
}

namespace detail {

inline int tree_depth_from(const GbtTree& t, int idx) {
    const GbtNode& nd = t.nodes[idx];
    if (nd.is_leaf()) return 0;
    return 1 + std::max(tree_depth_from(t, nd.left), tree_depth_from(t, nd.right));
}

}  // namespace detail

/// Depth in edges from root to the deepest leaf (a lone leaf has depth 0).
inline int tree_depth(const GbtTree& t) {
    return t.nodes.empty() ? 0 : detail::tree_depth_from(t, 0);
}

/// Stored parameters: (feature, threshold) per internal node + one weight per
/// leaf.
inline int tree_param_count(const GbtTree& t) {
    int internal = 0, leaves = 0;
    for (const GbtNode& nd : t.nodes) (nd.is_leaf() ? leaves : internal)++;
    return 2 * internal + leaves;
}

namespace detail {

struct GbtBuildNode {
    double sum = 0.0;        // Σ residuals of samples in this node
    std::size_t count = 0;
    int depth = 0;
    bool open = true;        // still awaiting a split decision
    int feature = -1;
    double threshold = 0.0;
    double weight = 0.0;
    int left = -1;
    int right = -1;
    // best-split search state for the current depth pass
    double best_gain = 0.0;
    int best_feature = -1;
    double best_lo = 0.0, best_hi = 0.0;
    double best_left_sum = 0.0;
    std::size_t best_left_count = 0;
    double parent_score = 0.0;
    // running prefix over the current feature's sorted order
    double run_sum = 0.0;
    std::size_t run_count = 0;
    double prev = 0.0;
};

inline int preorder_copy(const std::vector<GbtBuildNode>& src, int idx, GbtTree& out) {
    const GbtBuildNode& bn = src[idx];
    const int pos = static_cast<int>(out.nodes.size());
    out.nodes.push_back({bn.feature, bn.threshold, bn.weight, -1, -1});
    if (bn.feature >= 0) {
        out.nodes[pos].left = preorder_copy(src, bn.left, out);
        out.nodes[pos].right = preorder_copy(src, bn.right, out);
    }
    return pos;
}

}  // namespace detail

/// Gradient boosting with squared-error loss and exact greedy splits.
///
/// base_score is the target mean; every round fits one depth-limited tree to
/// the residuals. Split gain is
///   GL^2/(NL+λ) + GR^2/(NR+λ) − G^2/(N+λ)
/// over all (feature, threshold-between-distinct-values) candidates, scanned
/// feature-major then value-ascending with strict improvement, so ties resolve
/// to the lowest feature id and lowest threshold. A node splits only on
/// strictly positive gain; otherwise it becomes a leaf of weight Σr/(N+λ).
/// Residuals then shrink by learning_rate × leaf weight. No row or column
/// subsampling, so training is deterministic.
inline GbtRegressor gbt_train(const double* features, const double* targets,
                              std::size_t n, int dim, int n_trees, int max_depth = 6,
                              double learning_rate = 0.1, double lambda = 1.0) {
    if (n < 2) fail(ErrorKind::Training, "gbt_train: need at least 2 samples");
    if (dim < 1) fail(ErrorKind::Parameter, "gbt_train: need at least 1 feature");
    if (n_trees < 0 || max_depth < 0)
        fail(ErrorKind::Parameter, "gbt_train: tree count and depth must be non-negative");

    GbtRegressor reg;
    reg.learning_rate = learning_rate;
    reg.max_depth = max_depth;

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += targets[i];
    mean /= static_cast<double>(n);
    reg.base_score = mean;

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = targets[i] - mean;

    // Feature values never change across rounds, so sort each feature's sample
    // order once (value ascending, index breaking ties for determinism).
    std::vector<int> order(static_cast<std::size_t>(dim) * n);
    // Sorted copies of each feature column, so the split scan reads values
    // sequentially instead of gathering across the whole feature matrix
    // (the gather dominates runtime once the matrix outgrows the caches).
    std::vector<double> sorted_vals(static_cast<std::size_t>(dim) * n);
    for (int f = 0; f < dim; ++f) {
        int* ord = order.data() + static_cast<std::size_t>(f) * n;
        for (std::size_t i = 0; i < n; ++i) ord[i] = static_cast<int>(i);
        std::sort(ord, ord + n, [&](int a, int b) {
            const double va = features[static_cast<std::size_t>(a) * dim + f];
            const double vb = features[static_cast<std::size_t>(b) * dim + f];
            if (va != vb) return va < vb;
            return a < b;
        });
        double* sv = sorted_vals.data() + static_cast<std::size_t>(f) * n;
        for (std::size_t pos = 0; pos < n; ++pos)
            sv[pos] = features[static_cast<std::size_t>(ord[pos]) * dim + f];
    }

    std::vector<int> node_of(n);
    std::vector<detail::GbtBuildNode> nodes;
    reg.trees.reserve(static_cast<std::size_t>(n_trees));

    for (int round = 0; round < n_trees; ++round) {
        nodes.clear();
        nodes.emplace_back();
        {
            detail::GbtBuildNode& root = nodes[0];
            for (std::size_t i = 0; i < n; ++i) root.sum += resid[i];
            root.count = n;
            root.open = max_depth > 0;
            if (!root.open) root.weight = root.sum / (static_cast<double>(root.count) + lambda);
        }
        std::fill(node_of.begin(), node_of.end(), 0);

        for (int depth = 0; depth < max_depth; ++depth) {
            bool any_open = false;
            for (auto& bn : nodes) {
                if (!bn.open || bn.depth != depth) continue;
                any_open = true;
                bn.best_gain = 0.0;
                bn.best_feature = -1;
                bn.parent_score =
                    bn.sum * bn.sum / (static_cast<double>(bn.count) + lambda);
            }
            if (!any_open) break;

            for (int f = 0; f < dim; ++f) {
                for (auto& bn : nodes) {
                    if (bn.open && bn.depth == depth) {
                        bn.run_sum = 0.0;
                        bn.run_count = 0;
                    }
                }
                const int* ord = order.data() + static_cast<std::size_t>(f) * n;
                const double* sv = sorted_vals.data() + static_cast<std::size_t>(f) * n;
                for (std::size_t pos = 0; pos < n; ++pos) {
                    const int i = ord[pos];
                    detail::GbtBuildNode& bn = nodes[node_of[i]];
                    if (!bn.open || bn.depth != depth) continue;
                    const double v = sv[pos];
                    if (bn.run_count > 0 && v > bn.prev) {
                        const double gl = bn.run_sum;
                        const double gr = bn.sum - gl;
                        const double nl = static_cast<double>(bn.run_count);
                        const double nr = static_cast<double>(bn.count - bn.run_count);
                        const double gain =
                            gl * gl / (nl + lambda) + gr * gr / (nr + lambda) - bn.parent_score;
                        if (gain > bn.best_gain) {
                            bn.best_gain = gain;
                            bn.best_feature = f;
                            bn.best_lo = bn.prev;
                            bn.best_hi = v;
                            bn.best_left_sum = gl;
                            bn.best_left_count = bn.run_count;
                        }
                    }
                    bn.run_sum += resid[i];
                    bn.run_count += 1;
                    bn.prev = v;
                }
            }

            const std::size_t node_count = nodes.size();
            for (std::size_t idx = 0; idx < node_count; ++idx) {
                detail::GbtBuildNode* bn = &nodes[idx];
                if (!bn->open || bn->depth != depth) continue;
                bn->open = false;
                if (bn->best_feature < 0) {
                    bn->weight = bn->sum / (static_cast<double>(bn->count) + lambda);
                    continue;
                }
                double t = 0.5 * (bn->best_lo + bn->best_hi);
                if (!(t < bn->best_hi)) t = bn->best_lo;  // adjacent floats round up
                const double left_sum = bn->best_left_sum;
                const std::size_t left_count = bn->best_left_count;
                const int lf = static_cast<int>(nodes.size());
                nodes.emplace_back();
                nodes.emplace_back();
                bn = &nodes[idx];  // emplace_back may reallocate
                detail::GbtBuildNode& lc = nodes[lf];
                detail::GbtBuildNode& rc = nodes[lf + 1];
                bn->feature = bn->best_feature;
                bn->threshold = t;
                bn->left = lf;
                bn->right = lf + 1;
                lc.sum = left_sum;
                lc.count = left_count;
                lc.depth = depth + 1;
                rc.sum = bn->sum - left_sum;
                rc.count = bn->count - left_count;
                rc.depth = depth + 1;
                if (depth + 1 >= max_depth) {
                    lc.open = rc.open = false;
                    lc.weight = lc.sum / (static_cast<double>(lc.count) + lambda);
                    rc.weight = rc.sum / (static_cast<double>(rc.count) + lambda);
                }
            }

            for (std::size_t i = 0; i < n; ++i) {
                const detail::GbtBuildNode& bn = nodes[node_of[i]];
                if (bn.feature < 0) continue;
                const double v = features[i * static_cast<std::size_t>(dim) + bn.feature];
                node_of[i] = v <= bn.threshold ? bn.left : bn.right;
            }
        }

        for (std::size_t i = 0; i < n; ++i)
            resid[i] -= learning_rate * nodes[node_of[i]].weight;

        GbtTree tree;
        tree.nodes.reserve(nodes.size());
        detail::preorder_copy(nodes, 0, tree);
        reg.trees.push_back(std::move(tree));
    }
    return reg;
}

}  // namespace lsr
