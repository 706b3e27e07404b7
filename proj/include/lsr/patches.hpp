#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "lsr/image.hpp"
#include "lsr/resample.hpp"

namespace lsr {

constexpr int kPatchSide = 15;
constexpr int kPatchArea = kPatchSide * kPatchSide;
constexpr int kHogSide = 16;
constexpr int kHogArea = kHogSide * kHogSide;
constexpr int kPatchMargin = kPatchSide / 2;
constexpr double kVarianceThreshold = 180.0;

enum class Hardness : std::uint8_t { Easy = 0, Hard = 1 };

/// One training/inference unit: the 15x15 ILR neighborhood of a target
/// pixel, its 16x16 Lanczos companion for HOG, and the center residual.
struct PatchSample {
    std::array<double, kPatchArea> patch15{};
    std::array<double, kHogArea> patch16{};
    double residual = 0.0;  // HR center - ILR center; training only
    Hardness hardness = Hardness::Easy;
    double variance = 0.0;
    int row = 0;  // center position in the ILR image
    int col = 0;
};

struct Dataset {
    std::vector<PatchSample> samples;
    std::vector<std::string> origin;
    bool augmented = false;
};

/// Population variance of the 225 patch values. Summation runs over
/// value-sorted order, which makes the result exactly invariant under any
/// permutation of the patch (dihedral modes in particular).
inline double patch_variance(const std::array<double, kPatchArea>& patch15) {
    std::array<double, kPatchArea> sorted = patch15;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    const double mean = sum / kPatchArea;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    return ss / kPatchArea;
}

/// Hard iff variance >= 180 (the boundary goes to the richer model).
inline Hardness classify_hardness(double variance) {
    return variance >= kVarianceThreshold ? Hardness::Hard : Hardness::Easy;
}

// --- dihedral group on square patches ------------------------------------

/// mode = k + 4*flip: k CCW quarter-turns, then an optional horizontal flip.
constexpr int kDihedralModes = 8;

inline void dihedral_index(int mode, int n, int r, int c, int& sr, int& sc) {
    // source index that lands at (r, c) after rotate-k-then-flip
    if (mode & 4) c = n - 1 - c;
    switch (mode & 3) {
        case 0: sr = r;         sc = c;         break;
        case 1: sr = c;         sc = n - 1 - r; break;
        case 2: sr = n - 1 - r; sc = n - 1 - c; break;
        default: sr = n - 1 - c; sc = r;        break;
    }
}

template <std::size_t N>
std::array<double, N> dihedral(const std::array<double, N>& patch, int mode) {
    constexpr int n = []() constexpr {
        int s = 1;
        while (static_cast<std::size_t>(s) * s < N) ++s;
        return s;
    }();
    static_assert(static_cast<std::size_t>(n) * n == N, "dihedral requires a square patch");
    std::array<double, N> out;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            int sr, sc;
            dihedral_index(mode, n, r, c, sr, sc);
            out[static_cast<std::size_t>(r) * n + c] = patch[static_cast<std::size_t>(sr) * n + sc];
        }
    return out;
}

inline YImage dihedral_image(const YImage& img, int mode) {
    const bool swap = (mode & 1) != 0;
    YImage out(swap ? img.width : img.height, swap ? img.height : img.width);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            int sr, sc;
            // same convention as the patch overload, on a rectangle
            int cc = (mode & 4) ? out.width - 1 - c : c;
            switch (mode & 3) {
                case 0: sr = r;                  sc = cc;                 break;
                case 1: sr = cc;                 sc = img.width - 1 - r;  break;
                case 2: sr = img.height - 1 - r; sc = img.width - 1 - cc; break;
                default: sr = img.height - 1 - cc; sc = r;                break;
            }
            out.at(r, c) = img.at(sr, sc);
        }
    return out;
}

/// Maps an ILR pixel position to its position in dihedral_image(img, mode).
inline void dihedral_position(int mode, int h, int w, int r, int c, int& orow, int& ocol) {
    int rr, cc;
    switch (mode & 3) {  // invert the rotation
        case 0: rr = r;         cc = c;         break;
        case 1: rr = w - 1 - c; cc = r;         break;
        case 2: rr = h - 1 - r; cc = w - 1 - c; break;
        default: rr = c;        cc = h - 1 - r; break;
    }
    const int ow = (mode & 1) ? h : w;
    if (mode & 4) cc = ow - 1 - cc;
    orow = rr;
    ocol = cc;
}

// --- extraction -----------------------------------------------------------

inline YImage pad_replicate(const YImage& img, int margin) {
    YImage out(img.height + 2 * margin, img.width + 2 * margin);
    for (int r = 0; r < out.height; ++r) {
        const int sr = std::clamp(r - margin, 0, img.height - 1);
        for (int c = 0; c < out.width; ++c)
            out.at(r, c) = img.at(sr, std::clamp(c - margin, 0, img.width - 1));
    }
    return out;
}

/// Copies the 15x15 neighborhood of (row, col) out of a padded ILR image
/// (pad margin kPatchMargin).
inline void slice_patch15(const YImage& padded, int row, int col, std::array<double, kPatchArea>& out) {
    for (int dr = 0; dr < kPatchSide; ++dr)
        std::memcpy(&out[static_cast<std::size_t>(dr) * kPatchSide],
                    &padded.data[static_cast<std::size_t>(row + dr) * padded.width + col],
                    sizeof(double) * kPatchSide);
}

/// Lanczos 15x15 -> 16x16 companion used for HOG.
inline std::array<double, kHogArea> make_patch16(const std::array<double, kPatchArea>& patch15) {
    YImage p(kPatchSide, kPatchSide);
    std::copy(patch15.begin(), patch15.end(), p.data.begin());
    const YImage q = lanczos_resize(p, kHogSide, kHogSide);
    std::array<double, kHogArea> out;
    std::copy(q.data.begin(), q.data.end(), out.begin());
    return out;
}

/// One sample per center on the stride grid; replicate padding gives every
/// pixel a full neighborhood. Residuals are filled only for training.
inline Dataset extract_samples(const ImagePair& pair, int stride, bool for_training,
                               const std::string& origin_id = {}) {
    if (pair.ilr.height != pair.hr.height || pair.ilr.width != pair.hr.width)
        fail(ErrorKind::Dimension, "extract_samples: ilr/hr dimensions differ");
    if (stride < 1) fail(ErrorKind::Parameter, "extract_samples: stride must be >= 1");

    const YImage padded = pad_replicate(pair.ilr, kPatchMargin);
    Dataset ds;
    if (!origin_id.empty()) ds.origin.push_back(origin_id);
    for (int r = 0; r < pair.ilr.height; r += stride)
        for (int c = 0; c < pair.ilr.width; c += stride) {
            PatchSample s;
            slice_patch15(padded, r, c, s.patch15);
            s.patch16 = make_patch16(s.patch15);
            s.variance = patch_variance(s.patch15);
            s.hardness = classify_hardness(s.variance);
            s.residual = for_training ? pair.hr.at(r, c) - pair.ilr.at(r, c) : 0.0;
            s.row = r;
            s.col = c;
            ds.samples.push_back(std::move(s));
        }
    return ds;
}

/// 8x dihedral augmentation; mode-major order, mode 0 first.
inline Dataset augment_dataset(const Dataset& base) {
    Dataset out;
    out.origin = base.origin;
    out.augmented = true;
    out.samples.reserve(base.samples.size() * kDihedralModes);
    for (int mode = 0; mode < kDihedralModes; ++mode)
        for (const PatchSample& s : base.samples) {
            PatchSample a = s;
            if (mode != 0) {
                a.patch15 = dihedral(s.patch15, mode);
                a.patch16 = make_patch16(a.patch15);
            }
            out.samples.push_back(std::move(a));
        }
    return out;
}

// --- binary sample cache ---------------------------------------------------
// header: magic "LSRD", version u32, count u64; fixed-size records of
// little-endian f32 patches/residual, u8 hardness, two u32 coordinates.

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline void put_f32(std::ostream& os, float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    put_u32(os, v);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t get_u64(std::istream& is) {
    const std::uint64_t lo = get_u32(is);
    return lo | (static_cast<std::uint64_t>(get_u32(is)) << 32);
}

inline float get_f32(std::istream& is) {
    const std::uint32_t v = get_u32(is);
    float f;
    std::memcpy(&f, &v, 4);
    return f;
}

}  // namespace detail

inline void save_sample_cache(const std::string& path, const Dataset& ds) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot create " + path);
    os.write("LSRD", 4);
    detail::put_u32(os, 1u);
    detail::put_u64(os, ds.samples.size());
    for (const PatchSample& s : ds.samples) {
        for (double v : s.patch15) detail::put_f32(os, static_cast<float>(v));
        for (double v : s.patch16) detail::put_f32(os, static_cast<float>(v));
        detail::put_f32(os, static_cast<float>(s.residual));
        os.put(static_cast<char>(s.hardness));
        detail::put_u32(os, static_cast<std::uint32_t>(s.row));
        detail::put_u32(os, static_cast<std::uint32_t>(s.col));
    }
    if (!os) fail(ErrorKind::Io, "write failed: " + path);
}

inline Dataset load_sample_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LSRD", 4) != 0) fail(ErrorKind::Data, "bad sample cache magic");
    const std::uint32_t version = detail::get_u32(is);
    if (version != 1u) fail(ErrorKind::Data, "unsupported sample cache version");
    const std::uint64_t count = detail::get_u64(is);
    Dataset ds;
    ds.samples.resize(count);
    for (PatchSample& s : ds.samples) {
        for (double& v : s.patch15) v = detail::get_f32(is);
        for (double& v : s.patch16) v = detail::get_f32(is);
        s.residual = detail::get_f32(is);
        s.hardness = static_cast<Hardness>(is.get());
        s.row = static_cast<int>(detail::get_u32(is));
        s.col = static_cast<int>(detail::get_u32(is));
        // variance is not persisted; recompute from the (f32-rounded) patch
        s.variance = patch_variance(s.patch15);
    }
    if (!is) fail(ErrorKind::Data, "truncated sample cache");
    return ds;
}

}  // namespace lsr
