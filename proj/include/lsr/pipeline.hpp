#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "lsr/common.hpp"
#include "lsr/config.hpp"
#include "lsr/gbt.hpp"
#include "lsr/hog.hpp"
#include "lsr/image.hpp"
#include "lsr/kmeans.hpp"
#include "lsr/model.hpp"
#include "lsr/patches.hpp"
#include "lsr/representations.hpp"
#include "lsr/resample.hpp"
#include "lsr/rft.hpp"

namespace lsr {

/// Derives the LR input and ILR baseline a model is trained against:
/// modcrop to the scale, bicubic downsample, Lanczos upscale back.
inline ImagePair make_training_pair(const YImage& src, int scale = 2) {
    ImagePair pair;
    pair.hr = modcrop(src, scale);
    pair.lr = bicubic_downsample(pair.hr, scale);
    pair.ilr = lanczos_upscale(pair.lr, scale);
    return pair;
}

namespace detail {

/// Evenly spaced subsample of [0, total), strictly increasing, starting at 0.
inline std::vector<std::size_t> spaced_indices(std::size_t total, std::size_t cap) {
    std::vector<std::size_t> idx;
    if (total <= cap) {
        idx.resize(total);
        for (std::size_t i = 0; i < total; ++i) idx[i] = i;
        return idx;
    }
    idx.reserve(cap);
    for (std::size_t i = 0; i < cap; ++i) idx.push_back(i * total / cap);
    return idx;
}

/// Sibling dihedral modes per fusion factor: all fix the patch center, so the
/// residual target is shared. f=2 adds the horizontal flip; f=4 adds the 180°
/// rotation and its flip.
inline const int* fusion_modes(int f) {
    static constexpr int one[1] = {0};
    static constexpr int two[2] = {0, 4};
    static constexpr int four[4] = {0, 4, 2, 6};
    switch (f) {
        case 1: return one;
        case 2: return two;
        case 4: return four;
        default: fail(ErrorKind::Parameter, "fusion factor must be 1, 2, or 4");
    }
}

struct BranchPlan {
    RepresentationSpec spec;
    int n_features = 1;
    int clusters = 1;  // 1 = single regressor, no clustering
    int trees = 0;
    int fusion = 1;
    std::uint64_t base_cap = 0;  // cap on pre-augmentation samples
    const char* name = "";
};

inline BranchModel train_branch(std::vector<PatchSample>&& base_all, const BranchPlan& plan,
                                const RunConfig& cfg, std::ostream* log) {
    BranchModel branch;
    branch.spec = plan.spec;
    branch.fusion = plan.fusion;
    // Degenerate defaults: one centroid at the origin, one empty regressor.
    // A branch that never sees data stays in this state and predicts 0.
    branch.clusters.k = 1;
    branch.clusters.dim = kHogDim;
    branch.clusters.centroids.assign(kHogDim, 0.0);
    branch.regressors.resize(1);
    if (base_all.size() < 2) {
        if (log)
            *log << "[train] " << plan.name << ": " << base_all.size()
                 << " samples, leaving branch degenerate (predicts 0)\n";
        return branch;
    }

    // Cap the per-image extraction before augmentation multiplies it by 8.
    Dataset base;
    {
        const std::vector<std::size_t> keep = spaced_indices(base_all.size(), plan.base_cap);
        if (keep.size() == base_all.size()) {
            base.samples = std::move(base_all);
        } else {
            base.samples.reserve(keep.size());
            for (std::size_t i : keep) base.samples.push_back(std::move(base_all[i]));
            base_all.clear();
            base_all.shrink_to_fit();  // the husks hold inline patch storage
        }
    }
    const Dataset train_set = cfg.augment ? augment_dataset(base) : std::move(base);
    const std::vector<PatchSample>& samples = train_set.samples;
    const std::size_t n = samples.size();
    if (log) *log << "[train] " << plan.name << ": " << n << " training samples\n";

    branch.transforms = fit_transforms(samples, branch.spec, cfg.max_fit_patches);

    {  // score the full pool on a spaced subset, keep the low-loss features
        const std::vector<std::size_t> keep = spaced_indices(n, cfg.max_rft_samples);
        const std::size_t m = keep.size();
        const std::size_t width = static_cast<std::size_t>(branch.spec.pool_width());
        std::vector<double> pool(m * width);
        std::vector<double> targets(m);
        parallel_for(0, m, [&](std::size_t i) {
            const PatchSample& s = samples[keep[i]];
            const std::vector<double> p = build_pool(s.patch15, branch.spec, branch.transforms);
            std::copy(p.begin(), p.end(), pool.begin() + i * width);
            targets[i] = s.residual;
        }, static_cast<unsigned>(cfg.threads));
        const SelectionRule rule =
            cfg.elbow ? SelectionRule::elbow() : SelectionRule::fixed(plan.n_features);
        FeatureSelection sel =
            select_features(pool, m, width, targets, rule, cfg.rft_bins, cfg.threads);
        branch.selected_ids = std::move(sel.selected_ids);
        if (log)
            *log << "[train] " << plan.name << ": selected " << branch.selected_ids.size()
                 << " of " << width << " pool features\n";
    }

    // Materialize only the selected columns for every training row.
    const std::size_t dim = branch.selected_ids.size();
    std::vector<double> features(n * dim);
    std::vector<double> targets(n);
    parallel_for(0, n, [&](std::size_t i) {
        const PatchSample& s = samples[i];
        const std::vector<double> p = build_pool(s.patch15, branch.spec, branch.transforms);
        double* row = features.data() + i * dim;
        for (std::size_t j = 0; j < dim; ++j) row[j] = p[static_cast<std::size_t>(branch.selected_ids[j])];
        targets[i] = s.residual;
    }, static_cast<unsigned>(cfg.threads));

    if (plan.clusters <= 1) {
        branch.regressors[0] =
            gbt_train(features.data(), targets.data(), n, static_cast<int>(dim), plan.trees,
                      cfg.max_depth, cfg.learning_rate, cfg.lambda);
        return branch;
    }

    // Route hard samples by the HOG of their 16x16 companion patch.
    std::vector<double> descriptors(n * kHogDim);
    parallel_for(0, n, [&](std::size_t i) {
        const std::array<double, kHogDim> h = hog(samples[i].patch16);
        std::copy(h.begin(), h.end(), descriptors.begin() + i * kHogDim);
    }, static_cast<unsigned>(cfg.threads));
    if (n < static_cast<std::size_t>(plan.clusters))
        fail(ErrorKind::Training,
             std::string("train_lsr: fewer ") + plan.name +
                 " samples than clusters; provide more data or reduce the cluster count");
    branch.clusters = kmeans_fit(descriptors.data(), n, kHogDim, plan.clusters, cfg.seed);

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(plan.clusters));
    for (std::size_t i = 0; i < n; ++i)
        members[static_cast<std::size_t>(
                    kmeans_assign(branch.clusters, descriptors.data() + i * kHogDim))]
            .push_back(i);
    for (std::size_t j = 0; j < members.size(); ++j)
        if (members[j].size() < 2)
            fail(ErrorKind::Training,
                 "train_lsr: cluster " + std::to_string(j) + " received " +
                     std::to_string(members[j].size()) +
                     " samples; provide more data or reduce the cluster count");
    if (log)
        for (std::size_t j = 0; j < members.size(); ++j)
            *log << "[train] " << plan.name << ": cluster " << j << " has " << members[j].size()
                 << " samples\n";

    branch.regressors.assign(static_cast<std::size_t>(plan.clusters), GbtRegressor{});
    parallel_for(0, members.size(), [&](std::size_t j) {
        const std::vector<std::size_t>& rows = members[j];
        std::vector<double> cf(rows.size() * dim);
        std::vector<double> ct(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::copy_n(features.data() + rows[i] * dim, dim, cf.data() + i * dim);
            ct[i] = targets[rows[i]];
        }
        branch.regressors[j] =
            gbt_train(cf.data(), ct.data(), rows.size(), static_cast<int>(dim), plan.trees,
                      cfg.max_depth, cfg.learning_rate, cfg.lambda);
    }, static_cast<unsigned>(cfg.threads));
    return branch;
}

}  // namespace detail

/// Full training pass: derive LR/ILR pairs, collect residual samples, split
/// them at the variance threshold, and train both branches.
inline LsrModel train_lsr(const std::vector<YImage>& images, const RunConfig& cfg,
                          std::ostream* log = nullptr) {
    cfg.validate();
    if (images.empty()) fail(ErrorKind::Training, "train_lsr: need at least 1 training image");

    std::vector<PatchSample> easy_base, hard_base;
    for (const YImage& src : images) {
        const ImagePair pair = make_training_pair(src, cfg.scale);
        Dataset ds = extract_samples(pair, cfg.train_stride, true);
        for (PatchSample& s : ds.samples) {
            const bool hard = s.variance >= cfg.variance_threshold;
            s.hardness = hard ? Hardness::Hard : Hardness::Easy;
            (hard ? hard_base : easy_base).push_back(std::move(s));
        }
    }
    if (log) {
        const std::size_t total = easy_base.size() + hard_base.size();
        *log << "[train] " << images.size() << " images, " << total << " base samples ("
             << easy_base.size() << " easy, " << hard_base.size() << " hard)\n";
    }

    LsrModel model;
    model.variant = cfg.variant;
    model.scale = cfg.scale;
    model.variance_threshold = cfg.variance_threshold;
    model.seed = cfg.seed;
    model.manifest = config_manifest(cfg);

    detail::BranchPlan easy_plan{cfg.easy_spec(), cfg.easy_features, 1,
                                 cfg.easy_trees,  1,                 cfg.max_base_easy,
                                 "easy"};
    detail::BranchPlan hard_plan{cfg.hard_spec(), cfg.hard_features, cfg.clusters,
                                 cfg.hard_trees,  cfg.fusion,        cfg.max_base_hard,
                                 "hard"};
    model.easy = detail::train_branch(std::move(easy_base), easy_plan, cfg, log);
    model.hard = detail::train_branch(std::move(hard_base), hard_plan, cfg, log);
    validate_model(model);
    return model;
}

/// Average of the fusion siblings' predictions. Every sibling runs the whole
/// branch independently: pool from the transformed patch, HOG of the
/// (recomputed) 16x16 companion to pick a cluster, that cluster's regressor.
inline double predict_branch(const BranchModel& branch,
                             const std::array<double, kPatchArea>& patch15) {
    const int f = branch.fusion;
    const int* modes = detail::fusion_modes(f);
    const std::size_t dim = branch.selected_ids.size();
    std::vector<double> x(dim);
    double acc = 0.0;
    for (int s = 0; s < f; ++s) {
        const std::array<double, kPatchArea> p =
            modes[s] == 0 ? patch15 : dihedral(patch15, modes[s]);
        if (dim > 0) {
            const std::vector<double> pool = build_pool(p, branch.spec, branch.transforms);
            for (std::size_t j = 0; j < dim; ++j)
                x[j] = pool[static_cast<std::size_t>(branch.selected_ids[j])];
        }
        int cluster = 0;
        if (branch.clusters.k > 1) {
            const std::array<double, kHogDim> h = hog(make_patch16(p));
            cluster = kmeans_assign(branch.clusters, h.data());
        }
        acc += gbt_predict(branch.regressors[static_cast<std::size_t>(cluster)], x.data());
    }
    return acc / f;
}

inline double predict_residual(const LsrModel& model, const PatchSample& sample) {
    const BranchModel& branch =
        sample.variance >= model.variance_threshold ? model.hard : model.easy;
    return predict_branch(branch, sample.patch15);
}

struct SrOutput {
    YImage hr;        // clamp(ilr + residual) to [0, 255]
    YImage ilr;       // Lanczos-upscaled baseline
    YImage residual;  // predicted residual map
};

inline SrOutput superresolve_full(const LsrModel& model, const YImage& lr, int threads = 0) {
    SrOutput out;
    out.ilr = lanczos_upscale(lr, model.scale);
    out.residual = YImage(out.ilr.height, out.ilr.width);
    const YImage padded = pad_replicate(out.ilr, kPatchMargin);
    parallel_for(0, static_cast<std::size_t>(out.ilr.height), [&](std::size_t r) {
        PatchSample s;
        s.row = static_cast<int>(r);
        for (int c = 0; c < out.ilr.width; ++c) {
            s.col = c;
            slice_patch15(padded, s.row, c, s.patch15);
            s.variance = patch_variance(s.patch15);
            out.residual.at(s.row, c) = predict_residual(model, s);
        }
    }, static_cast<unsigned>(threads));
    out.hr = YImage(out.ilr.height, out.ilr.width);
    for (std::size_t i = 0; i < out.hr.data.size(); ++i)
        out.hr.data[i] = std::clamp(out.ilr.data[i] + out.residual.data[i], 0.0, 255.0);
    return out;
}

inline YImage superresolve(const LsrModel& model, const YImage& lr, int threads = 0) {
    return superresolve_full(model, lr, threads).hr;
}

}  // namespace lsr
