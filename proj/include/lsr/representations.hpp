#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "lsr/patches.hpp"
#include "lsr/saab.hpp"

namespace lsr {

// ---------------------------------------------------------------------------
// Pool layout. Feature IDs are (type, sub-index) pairs flattened in type
// order over the enabled types; the geometry below is fixed, so the layout is
// fully determined by the enabled-type mask.
//
//   type 1: the 225 raw patch pixels, row-major.
//   type 2: 25 coefficients of a 5×5 transform on the centered 5×5 window
//           (top-left (5,5)) + 49 of a 7×7 transform on the centered 7×7
//           window (top-left (4,4)) = 74.
//   type 3: a 3×3 transform (9 coefficients) at 9 stride-1 positions covering
//           the central 5×5 region (top-left {5,6,7}²) and at 24 stride-3
//           positions tiling the outside (top-left {0,3,6,9,12}² minus
//           (6,6)); 33 × 9 = 297. Position-major, coefficient-minor.
//   type 4: 2×2 Haar filterbank (LL, LH, HL, HH) at 49 stride-2 positions
//           (top-left {0,2,…,12}²); per position 4 raw responses + 4
//           cross-channel PCA coefficients = 392.
//   type 5: nine 3×3 Laws filters at 25 stride-3 positions (top-left
//           {0,3,6,9,12}²); per position 9 raw + 9 PCA = 450.
// ---------------------------------------------------------------------------

constexpr std::array<int, 5> kTypeWidths{225, 74, 297, 392, 450};

struct RepresentationSpec {
    std::array<bool, 5> enabled{};

    static RepresentationSpec from_types(std::initializer_list<int> types) {
        RepresentationSpec spec;
        for (int t : types) {
            if (t < 1 || t > 5) fail(ErrorKind::Parameter, "representation type must be 1..5");
            spec.enabled[t - 1] = true;
        }
        return spec;
    }

    bool has(int type) const { return enabled[type - 1]; }

    int pool_width() const {
        int w = 0;
        for (int t = 0; t < 5; ++t)
            if (enabled[t]) w += kTypeWidths[t];
        return w;
    }
};

struct Transforms {
    SaabKernelSet k5, k7;  // type 2
    SaabKernelSet k3;      // type 3
    ChannelPcaSet pca4;    // type 4
    ChannelPcaSet pca9;    // type 5
};

namespace geom {

constexpr int kCentral5Top = 5;  // top-left of the centered 5×5 window
constexpr int kCentral7Top = 4;  // top-left of the centered 7×7 window

inline const std::vector<std::pair<int, int>>& type3_positions() {
    static const std::vector<std::pair<int, int>> v = [] {
        std::vector<std::pair<int, int>> p;
        for (int r : {5, 6, 7})
            for (int c : {5, 6, 7}) p.emplace_back(r, c);
        for (int r : {0, 3, 6, 9, 12})
            for (int c : {0, 3, 6, 9, 12})
                if (!(r == 6 && c == 6)) p.emplace_back(r, c);
        return p;
    }();
    return v;
}

inline const std::vector<std::pair<int, int>>& type4_positions() {
    static const std::vector<std::pair<int, int>> v = [] {
        std::vector<std::pair<int, int>> p;
        for (int r = 0; r <= 12; r += 2)
            for (int c = 0; c <= 12; c += 2) p.emplace_back(r, c);
        return p;
    }();
    return v;
}

inline const std::vector<std::pair<int, int>>& type5_positions() {
    static const std::vector<std::pair<int, int>> v = [] {
        std::vector<std::pair<int, int>> p;
        for (int r = 0; r <= 12; r += 3)
            for (int c = 0; c <= 12; c += 3) p.emplace_back(r, c);
        return p;
    }();
    return v;
}

/// 2×2 Haar filterbank, row-major taps, each filter unit ℓ2 norm.
inline const std::array<std::array<double, 4>, 4>& haar_filters() {
    static const std::array<std::array<double, 4>, 4> f{{
        {0.5, 0.5, 0.5, 0.5},    // LL
        {0.5, -0.5, 0.5, -0.5},  // LH: low rows, high columns
        {0.5, 0.5, -0.5, -0.5},  // HL
        {0.5, -0.5, -0.5, 0.5},  // HH
    }};
    return f;
}

/// Nine 3×3 Laws filters: outer products u·vᵀ for u,v ∈ {L3, E3, S3} in
/// u-major order, each normalized to unit ℓ2 norm.
inline const std::array<std::array<double, 9>, 9>& laws_filters() {
    static const std::array<std::array<double, 9>, 9> f = [] {
        const double bank[3][3] = {{1, 2, 1}, {-1, 0, 1}, {-1, 2, -1}};  // L3, E3, S3
        std::array<std::array<double, 9>, 9> out{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double norm2 = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const double t = bank[a][i] * bank[b][j];
                        out[a * 3 + b][i * 3 + j] = t;
                        norm2 += t * t;
                    }
                const double inv = 1.0 / std::sqrt(norm2);
                for (double& t : out[a * 3 + b]) t *= inv;
            }
        return out;
    }();
    return f;
}

/// One Laws response, computed separably: horizontal factor first, then
/// vertical. Every AC filter has a zero-sum 1-D factor whose cancellations
/// are exact in IEEE arithmetic, so constant windows respond with exactly 0
/// — the direct 9-tap accumulation leaves rounding residue for the
/// mixed-magnitude rows of E3·L3 and S3·L3.
inline double laws_response(const double* buf, int stride, int top, int left, int filter) {
    static constexpr double bank[3][3] = {{1, 2, 1}, {-1, 0, 1}, {-1, 2, -1}};
    static constexpr double bank_norm2[3] = {6, 2, 6};
    const double* u = bank[filter / 3];
    const double* v = bank[filter % 3];
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double* p = buf + (top + i) * stride + left;
        acc += u[i] * (v[0] * p[0] + v[1] * p[1] + v[2] * p[2]);
    }
    return acc / std::sqrt(bank_norm2[filter / 3] * bank_norm2[filter % 3]);
}

}  // namespace geom

/// Dot product of an n×n kernel with the window whose top-left corner sits at
/// (top, left) in a row-major buffer. Every representation — per-patch or
/// whole-image — funnels through this one loop so the two paths agree bit for
/// bit.
inline double window_dot(const double* buf, int stride, int top, int left, const double* kernel,
                         int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* row = buf + static_cast<std::size_t>(top + i) * stride + left;
        const double* k = kernel + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) acc += k[j] * row[j];
    }
    return acc;
}

namespace detail {

inline void require_saab(const SaabKernelSet& set, int window, const char* what) {
    if (set.window != window)
        fail(ErrorKind::Config, std::string("transform not fitted: ") + what);
}

inline void require_pca(const ChannelPcaSet& set, int channels, const char* what) {
    if (set.channels != channels)
        fail(ErrorKind::Config, std::string("transform not fitted: ") + what);
}

}  // namespace detail

/// Type 2: 74 coefficients from the two centered windows.
inline void apply_central_saab(const double* patch, const SaabKernelSet& k5,
                               const SaabKernelSet& k7, double* out) {
    detail::require_saab(k5, 5, "5x5 window transform");
    detail::require_saab(k7, 7, "7x7 window transform");
    for (int k = 0; k < 25; ++k)
        out[k] = window_dot(patch, kPatchSide, geom::kCentral5Top, geom::kCentral5Top, k5.row(k), 5);
    for (int k = 0; k < 49; ++k)
        out[25 + k] =
            window_dot(patch, kPatchSide, geom::kCentral7Top, geom::kCentral7Top, k7.row(k), 7);
}

/// Type 3: 297 coefficients (33 window positions × 9).
inline void apply_ringwise_saab(const double* patch, const SaabKernelSet& k3, double* out) {
    detail::require_saab(k3, 3, "3x3 window transform");
    std::size_t o = 0;
    for (const auto& [r, c] : geom::type3_positions())
        for (int k = 0; k < 9; ++k) out[o++] = window_dot(patch, kPatchSide, r, c, k3.row(k), 3);
}

/// Type 4: 392 values (49 positions × [4 raw Haar, 4 PCA]).
inline void apply_type4(const double* patch, const ChannelPcaSet& pca4, double* out) {
    detail::require_pca(pca4, 4, "Haar channel PCA");
    const auto& filters = geom::haar_filters();
    std::size_t o = 0;
    for (const auto& [r, c] : geom::type4_positions()) {
        double resp[4];
        for (int f = 0; f < 4; ++f)
            resp[f] = window_dot(patch, kPatchSide, r, c, filters[f].data(), 2);
        for (int f = 0; f < 4; ++f) out[o++] = resp[f];
        apply_channel_pca(pca4, resp, out + o);
        o += 4;
    }
}

/// Type 5: 450 values (25 positions × [9 raw Laws, 9 PCA]).
inline void apply_type5(const double* patch, const ChannelPcaSet& pca9, double* out) {
    detail::require_pca(pca9, 9, "Laws channel PCA");
    std::size_t o = 0;
    for (const auto& [r, c] : geom::type5_positions()) {
        double resp[9];
        for (int f = 0; f < 9; ++f) resp[f] = geom::laws_response(patch, kPatchSide, r, c, f);
        for (int f = 0; f < 9; ++f) out[o++] = resp[f];
        apply_channel_pca(pca9, resp, out + o);
        o += 9;
    }
}

/// Concatenates the enabled type blocks in type order 1..5.
inline std::vector<double> build_pool(const std::array<double, kPatchArea>& patch15,
                                      const RepresentationSpec& spec, const Transforms& tf) {
    std::vector<double> pool(static_cast<std::size_t>(spec.pool_width()));
    double* out = pool.data();
    if (spec.has(1)) {
        std::copy(patch15.begin(), patch15.end(), out);
        out += kTypeWidths[0];
    }
    if (spec.has(2)) {
        apply_central_saab(patch15.data(), tf.k5, tf.k7, out);
        out += kTypeWidths[1];
    }
    if (spec.has(3)) {
        apply_ringwise_saab(patch15.data(), tf.k3, out);
        out += kTypeWidths[2];
    }
    if (spec.has(4)) {
        apply_type4(patch15.data(), tf.pca4, out);
        out += kTypeWidths[3];
    }
    if (spec.has(5)) {
        apply_type5(patch15.data(), tf.pca9, out);
        out += kTypeWidths[4];
    }
    return pool;
}

inline std::vector<double> build_pool(const PatchSample& sample, const RepresentationSpec& spec,
                                      const Transforms& tf) {
    return build_pool(sample.patch15, spec, tf);
}

/// Human-readable name for one pool slot (diagnostics / model inspection).
inline std::string feature_label(const RepresentationSpec& spec, int index) {
    int rest = index;
    for (int t = 1; t <= 5; ++t) {
        if (!spec.has(t)) continue;
        if (rest >= kTypeWidths[t - 1]) {
            rest -= kTypeWidths[t - 1];
            continue;
        }
        switch (t) {
            case 1:
                return "type1.pixel[" + std::to_string(rest / 15) + "," +
                       std::to_string(rest % 15) + "]";
            case 2:
                return rest < 25 ? "type2.w5.c" + std::to_string(rest)
                                 : "type2.w7.c" + std::to_string(rest - 25);
            case 3:
                return "type3.pos" + std::to_string(rest / 9) + ".c" + std::to_string(rest % 9);
            case 4: {
                static const char* names[8] = {"LL", "LH", "HL", "HH", "p0", "p1", "p2", "p3"};
                return "type4.pos" + std::to_string(rest / 8) + "." + names[rest % 8];
            }
            default: {
                const int within = rest % 18;
                return "type5.pos" + std::to_string(rest / 18) + "." +
                       (within < 9 ? "raw" + std::to_string(within)
                                   : "p" + std::to_string(within - 9));
            }
        }
    }
    fail(ErrorKind::Parameter, "feature index out of range");
}

// ---------------------------------------------------------------------------
// Transform fitting: windows/responses are harvested from (a deterministic,
// evenly spaced subsample of) the training patches at exactly the positions
// the features later read.
// ---------------------------------------------------------------------------

inline Transforms fit_transforms(const std::vector<PatchSample>& samples,
                                 const RepresentationSpec& spec,
                                 std::size_t max_fit_patches = 20000) {
    if (samples.empty()) fail(ErrorKind::Training, "fit_transforms: no samples");
    std::vector<std::size_t> idx;
    if (samples.size() <= max_fit_patches) {
        idx.resize(samples.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    } else {
        idx.resize(max_fit_patches);
        for (std::size_t i = 0; i < max_fit_patches; ++i)
            idx[i] = i * samples.size() / max_fit_patches;
    }
    const std::size_t n = idx.size();

    Transforms tf;
    if (spec.has(2)) {
        std::vector<double> w5(n * 25), w7(n * 49);
        for (std::size_t s = 0; s < n; ++s) {
            const double* p = samples[idx[s]].patch15.data();
            double* o5 = w5.data() + s * 25;
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    *o5++ = p[(geom::kCentral5Top + i) * kPatchSide + geom::kCentral5Top + j];
            double* o7 = w7.data() + s * 49;
            for (int i = 0; i < 7; ++i)
                for (int j = 0; j < 7; ++j)
                    *o7++ = p[(geom::kCentral7Top + i) * kPatchSide + geom::kCentral7Top + j];
        }
        tf.k5 = fit_saab(w5.data(), n, 5);
        tf.k7 = fit_saab(w7.data(), n, 7);
    }
    if (spec.has(3)) {
        const auto& pos = geom::type3_positions();
        std::vector<double> w3(n * pos.size() * 9);
        double* o = w3.data();
        for (std::size_t s = 0; s < n; ++s) {
            const double* p = samples[idx[s]].patch15.data();
            for (const auto& [r, c] : pos)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) *o++ = p[(r + i) * kPatchSide + c + j];
        }
        tf.k3 = fit_saab(w3.data(), n * pos.size(), 3);
    }
    if (spec.has(4)) {
        const auto& pos = geom::type4_positions();
        const auto& filters = geom::haar_filters();
        std::vector<double> resp(n * pos.size() * 4);
        double* o = resp.data();
        for (std::size_t s = 0; s < n; ++s) {
            const double* p = samples[idx[s]].patch15.data();
            for (const auto& [r, c] : pos)
                for (int f = 0; f < 4; ++f)
                    *o++ = window_dot(p, kPatchSide, r, c, filters[f].data(), 2);
        }
        tf.pca4 = fit_channel_pca(resp.data(), n * pos.size(), 4);
    }
    if (spec.has(5)) {
        const auto& pos = geom::type5_positions();
        std::vector<double> resp(n * pos.size() * 9);
        double* o = resp.data();
        for (std::size_t s = 0; s < n; ++s) {
            const double* p = samples[idx[s]].patch15.data();
            for (const auto& [r, c] : pos)
                for (int f = 0; f < 9; ++f) *o++ = geom::laws_response(p, kPatchSide, r, c, f);
        }
        tf.pca9 = fit_channel_pca(resp.data(), n * pos.size(), 9);
    }
    return tf;
}

// ---------------------------------------------------------------------------
// Whole-image path: each filter response is computed once per image position
// into dense maps over the replicate-padded ILR, then per-pixel pools are
// gathered from the maps. Because map cells and per-patch features run the
// same window_dot on the same values, gathered pools match build_pool bit for
// bit.
// ---------------------------------------------------------------------------

struct FeatureMaps {
    int height = 0, width = 0;  // ILR dimensions
    RepresentationSpec spec;
    YImage padded;                  // ILR + 7-pixel replicate margin
    std::vector<YImage> c5, c7;     // type 2: 25 + 49 maps, H×W, offset-aligned
    std::vector<YImage> c3;         // type 3: 9 maps over all padded 3×3 positions
    std::vector<YImage> h4, p4;     // type 4: 4 raw + 4 PCA maps over padded 2×2 positions
    std::vector<YImage> l5, p5;     // type 5: 9 raw + 9 PCA maps over padded 3×3 positions

    /// Pool for the patch centered at ILR pixel (r, c); out must hold
    /// spec.pool_width() values.
    void gather(int r, int c, double* out) const {
        const int pw = padded.width;
        if (spec.has(1)) {
            const double* src = padded.data.data() + static_cast<std::size_t>(r) * pw + c;
            for (int i = 0; i < kPatchSide; ++i)
                for (int j = 0; j < kPatchSide; ++j)
                    *out++ = src[static_cast<std::size_t>(i) * pw + j];
        }
        if (spec.has(2)) {
            for (int k = 0; k < 25; ++k) *out++ = c5[k].at(r, c);
            for (int k = 0; k < 49; ++k) *out++ = c7[k].at(r, c);
        }
        if (spec.has(3)) {
            for (const auto& [dr, dc] : geom::type3_positions())
                for (int k = 0; k < 9; ++k) *out++ = c3[k].at(r + dr, c + dc);
        }
        if (spec.has(4)) {
            for (const auto& [dr, dc] : geom::type4_positions()) {
                for (int f = 0; f < 4; ++f) *out++ = h4[f].at(r + dr, c + dc);
                for (int f = 0; f < 4; ++f) *out++ = p4[f].at(r + dr, c + dc);
            }
        }
        if (spec.has(5)) {
            for (const auto& [dr, dc] : geom::type5_positions()) {
                for (int f = 0; f < 9; ++f) *out++ = l5[f].at(r + dr, c + dc);
                for (int f = 0; f < 9; ++f) *out++ = p5[f].at(r + dr, c + dc);
            }
        }
    }
};

inline FeatureMaps compute_feature_maps(const YImage& ilr, const RepresentationSpec& spec,
                                        const Transforms& tf, int threads = 1) {
    FeatureMaps maps;
    maps.height = ilr.height;
    maps.width = ilr.width;
    maps.spec = spec;
    maps.padded = pad_replicate(ilr, kPatchMargin);
    const double* buf = maps.padded.data.data();
    const int pw = maps.padded.width;

    if (spec.has(2)) {
        detail::require_saab(tf.k5, 5, "5x5 window transform");
        detail::require_saab(tf.k7, 7, "7x7 window transform");
        maps.c5.assign(25, YImage(ilr.height, ilr.width));
        maps.c7.assign(49, YImage(ilr.height, ilr.width));
        parallel_for(0, ilr.height, [&](int r) {
            for (int c = 0; c < ilr.width; ++c) {
                for (int k = 0; k < 25; ++k)
                    maps.c5[k].at(r, c) = window_dot(buf, pw, r + geom::kCentral5Top,
                                                     c + geom::kCentral5Top, tf.k5.row(k), 5);
                for (int k = 0; k < 49; ++k)
                    maps.c7[k].at(r, c) = window_dot(buf, pw, r + geom::kCentral7Top,
                                                     c + geom::kCentral7Top, tf.k7.row(k), 7);
            }
        }, threads);
    }
    if (spec.has(3)) {
        detail::require_saab(tf.k3, 3, "3x3 window transform");
        const int mh = maps.padded.height - 2, mw = maps.padded.width - 2;
        maps.c3.assign(9, YImage(mh, mw));
        parallel_for(0, mh, [&](int r) {
            for (int c = 0; c < mw; ++c)
                for (int k = 0; k < 9; ++k)
                    maps.c3[k].at(r, c) = window_dot(buf, pw, r, c, tf.k3.row(k), 3);
        }, threads);
    }
    if (spec.has(4)) {
        detail::require_pca(tf.pca4, 4, "Haar channel PCA");
        const auto& filters = geom::haar_filters();
        const int mh = maps.padded.height - 1, mw = maps.padded.width - 1;
        maps.h4.assign(4, YImage(mh, mw));
        maps.p4.assign(4, YImage(mh, mw));
        parallel_for(0, mh, [&](int r) {
            for (int c = 0; c < mw; ++c) {
                double resp[4], proj[4];
                for (int f = 0; f < 4; ++f)
                    resp[f] = window_dot(buf, pw, r, c, filters[f].data(), 2);
                apply_channel_pca(tf.pca4, resp, proj);
                for (int f = 0; f < 4; ++f) {
                    maps.h4[f].at(r, c) = resp[f];
                    maps.p4[f].at(r, c) = proj[f];
                }
            }
        }, threads);
    }
    if (spec.has(5)) {
        detail::require_pca(tf.pca9, 9, "Laws channel PCA");
        const int mh = maps.padded.height - 2, mw = maps.padded.width - 2;
        maps.l5.assign(9, YImage(mh, mw));
        maps.p5.assign(9, YImage(mh, mw));
        parallel_for(0, mh, [&](int r) {
            for (int c = 0; c < mw; ++c) {
                double resp[9], proj[9];
                for (int f = 0; f < 9; ++f) resp[f] = geom::laws_response(buf, pw, r, c, f);
                apply_channel_pca(tf.pca9, resp, proj);
                for (int f = 0; f < 9; ++f) {
                    maps.l5[f].at(r, c) = resp[f];
                    maps.p5[f].at(r, c) = proj[f];
                }
            }
        }, threads);
    }
    return maps;
}

}  // namespace lsr
