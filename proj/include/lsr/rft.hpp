#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lsr/common.hpp"

namespace lsr {

/// Score of one feature: the minimum, over candidate split thresholds, of the
/// size-weighted two-sided regression MSE when each side is estimated by its
/// own target mean. A constant feature cannot be split; its loss is the
/// full-set MSE and the threshold is NaN.
struct RftScore {
    int feature_id = -1;
    double loss = 0.0;
    double best_threshold = std::numeric_limits<double>::quiet_NaN();
};

struct SelectionRule {
    enum class Mode { FixedCount, Elbow };
    Mode mode = Mode::FixedCount;
    int count = 0;

    static SelectionRule fixed(int k) { return {Mode::FixedCount, k}; }
    static SelectionRule elbow() { return {Mode::Elbow, 0}; }
};

struct FeatureSelection {
    std::vector<int> selected_ids;   // ascending loss, ties by lower feature id
    std::vector<RftScore> scores;    // indexed by feature id
    std::vector<double> full_curve;  // all losses, ascending
};

/// Threshold sweep for one feature. Candidate thresholds are the bins−1
/// interior edges of a uniform partition of [min, max]; sides are value ≤ t
/// versus value > t; splits leaving a side empty are skipped. Targets are
/// centered by their mean internally (the loss is translation-invariant) so
/// the prefix-sum evaluation stays well conditioned.
inline RftScore rft_loss(const double* values, const double* targets, std::size_t n,
                         int bins = 32) {
    if (n < 2) fail(ErrorKind::Parameter, "rft_loss: need at least 2 samples");
    if (bins < 2) fail(ErrorKind::Parameter, "rft_loss: bins must be >= 2");

    double tmean = 0;
    for (std::size_t i = 0; i < n; ++i) tmean += targets[i];
    tmean /= static_cast<double>(n);

    std::vector<std::pair<double, double>> order(n);  // (value, centered target)
    for (std::size_t i = 0; i < n; ++i) order[i] = {values[i], targets[i] - tmean};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> ps(n + 1, 0.0), pss(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + order[i].second;
        pss[i + 1] = pss[i] + order[i].second * order[i].second;
    }
    const auto side_sse = [&](std::size_t lo, std::size_t hi) {  // samples [lo, hi)
        const double cnt = static_cast<double>(hi - lo);
        const double sum = ps[hi] - ps[lo];
        const double ss = pss[hi] - pss[lo];
        return std::max(0.0, ss - sum * sum / cnt);
    };

    RftScore score;
    score.loss = side_sse(0, n) / static_cast<double>(n);  // full-set MSE fallback
    const double fmin = order.front().first, fmax = order.back().first;
    if (fmin == fmax) return score;

    double best = std::numeric_limits<double>::infinity();
    double best_t = std::numeric_limits<double>::quiet_NaN();
    for (int k = 1; k < bins; ++k) {
        const double t = fmin + (fmax - fmin) * (static_cast<double>(k) / bins);
        const std::size_t left = static_cast<std::size_t>(
            std::upper_bound(order.begin(), order.end(), t,
                             [](double v, const auto& e) { return v < e.first; }) -
            order.begin());
        if (left == 0 || left == n) continue;
        const double loss = (side_sse(0, left) + side_sse(left, n)) / static_cast<double>(n);
        if (loss < best) {
            best = loss;
            best_t = t;
        }
    }
    if (std::isfinite(best)) {
        score.loss = best;
        score.best_threshold = best_t;
    }
    return score;
}

inline RftScore rft_loss(const std::vector<double>& values, const std::vector<double>& targets,
                         int bins = 32) {
    if (values.size() != targets.size())
        fail(ErrorKind::Dimension, "rft_loss: values/targets size mismatch");
    return rft_loss(values.data(), targets.data(), values.size(), bins);
}

/// Index of the elbow of an ascending loss curve: the point with the largest
/// perpendicular distance to the chord between the endpoints, after
/// normalizing both axes to [0, 1]. A flat curve has no elbow; index 0 is
/// returned.
inline std::size_t elbow_index(const std::vector<double>& curve) {
    const std::size_t n = curve.size();
    if (n == 0) fail(ErrorKind::Parameter, "elbow_index: empty curve");
    if (n == 1 || curve.back() == curve.front()) return 0;
    const double dy = curve.back() - curve.front();
    std::size_t arg = 0;
    double best = -1.0;
    // distance to the normalized chord y = x is |x − ŷ| / √2; the constant
    // factor cannot change the argmax
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        const double y = (curve[i] - curve.front()) / dy;
        const double d = std::abs(x - y);
        if (d > best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

/// Scores every pool column (pool is row-major samples × features) and keeps
/// either the k lowest-loss features or everything up to the elbow of the
/// sorted loss curve.
inline FeatureSelection select_features(const std::vector<double>& pool, std::size_t n_samples,
                                        std::size_t n_features, const std::vector<double>& targets,
                                        const SelectionRule& rule, int bins = 32, int threads = 1) {
    if (n_samples < 2 || n_features == 0) fail(ErrorKind::Training, "select_features: empty pool");
    if (pool.size() != n_samples * n_features)
        fail(ErrorKind::Dimension, "select_features: pool dimensions do not match");
    if (targets.size() != n_samples)
        fail(ErrorKind::Dimension, "select_features: targets size mismatch");
    if (rule.mode == SelectionRule::Mode::FixedCount &&
        (rule.count < 1 || static_cast<std::size_t>(rule.count) > n_features))
        fail(ErrorKind::Parameter, "select_features: count must be in [1, n_features]");

    FeatureSelection sel;
    sel.scores.resize(n_features);
    parallel_for(0, static_cast<int>(n_features), [&](int f) {
        std::vector<double> column(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) column[i] = pool[i * n_features + f];
        sel.scores[f] = rft_loss(column.data(), targets.data(), n_samples, bins);
        sel.scores[f].feature_id = f;
    }, threads);

    std::vector<int> ids(n_features);
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (sel.scores[a].loss != sel.scores[b].loss) return sel.scores[a].loss < sel.scores[b].loss;
        return a < b;
    });
    sel.full_curve.resize(n_features);
    for (std::size_t i = 0; i < n_features; ++i) sel.full_curve[i] = sel.scores[ids[i]].loss;

    const std::size_t keep = rule.mode == SelectionRule::Mode::FixedCount
                                 ? static_cast<std::size_t>(rule.count)
                                 : elbow_index(sel.full_curve) + 1;
    sel.selected_ids.assign(ids.begin(), ids.begin() + keep);
    return sel;
}

}  // namespace lsr
