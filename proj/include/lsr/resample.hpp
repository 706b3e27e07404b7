#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lsr/image.hpp"

namespace lsr {

// Keys cubic-convolution kernel with a = -0.5.
inline double cubic_kernel(double x) {
    x = std::abs(x);
    if (x <= 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
    if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

// Lanczos window a = 3: sinc(x) * sinc(x/3) on |x| < 3.
inline double lanczos3_kernel(double x) {
    if (x == 0.0) return 1.0;
    const double ax = std::abs(x);
    if (ax >= 3.0) return 0.0;
    const double px = std::numbers::pi * x;
    return 3.0 * std::sin(px) * std::sin(px / 3.0) / (px * px);
}

namespace detail {

struct TapTable {
    int taps = 0;                  // taps per output sample
    std::vector<int> first;        // leftmost source index per output sample (unclamped)
    std::vector<double> weights;   // out_size x taps, normalized to sum 1
};

enum class KernelId { Cubic, Lanczos3 };

inline double eval_kernel(KernelId k, double x) {
    return k == KernelId::Cubic ? cubic_kernel(x) : lanczos3_kernel(x);
}

// Center-aligned sampling: output i maps to source (i + 0.5) * in/out - 0.5.
// When shrinking, the kernel is stretched by in/out to act as a low-pass
// filter (the usual imresize convention).
inline TapTable make_taps(int in_size, int out_size, KernelId kernel) {
    const double radius = kernel == KernelId::Cubic ? 2.0 : 3.0;
    const double ratio = static_cast<double>(in_size) / out_size;
    const double stretch = ratio > 1.0 ? ratio : 1.0;
    const double support = radius * stretch;

    TapTable t;
    t.taps = static_cast<int>(std::ceil(2.0 * support)) + 1;
    t.first.resize(out_size);
    t.weights.resize(static_cast<std::size_t>(out_size) * t.taps);
    for (int i = 0; i < out_size; ++i) {
        const double center = (i + 0.5) * ratio - 0.5;
        const int first = static_cast<int>(std::ceil(center - support));
        t.first[i] = first;
        double sum = 0.0;
        double* w = &t.weights[static_cast<std::size_t>(i) * t.taps];
        for (int k = 0; k < t.taps; ++k) {
            w[k] = eval_kernel(kernel, (center - (first + k)) / stretch);
            sum += w[k];
        }
        for (int k = 0; k < t.taps; ++k) w[k] /= sum;
    }
    return t;
}

// One separable pass along the row direction; edge handling is clamp-to-edge.
inline YImage resample_rows(const YImage& img, const TapTable& t, int out_width) {
    YImage out(img.height, out_width);
    for (int r = 0; r < img.height; ++r) {
        const double* src = &img.data[static_cast<std::size_t>(r) * img.width];
        double* dst = &out.data[static_cast<std::size_t>(r) * out_width];
        for (int i = 0; i < out_width; ++i) {
            const double* w = &t.weights[static_cast<std::size_t>(i) * t.taps];
            const int first = t.first[i];
            double acc = 0.0;
            for (int k = 0; k < t.taps; ++k) {
                int j = std::clamp(first + k, 0, img.width - 1);
                acc += w[k] * src[j];
            }
            dst[i] = acc;
        }
    }
    return out;
}

inline YImage transpose(const YImage& img) {
    YImage out(img.width, img.height);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) out.at(c, r) = img.at(r, c);
    return out;
}

inline YImage resample(const YImage& img, int out_h, int out_w, KernelId kernel) {
    if (out_h < 1 || out_w < 1) fail(ErrorKind::Dimension, "resample: empty output");
    const TapTable th = make_taps(img.width, out_w, kernel);
    YImage tmp = resample_rows(img, th, out_w);
    const TapTable tv = make_taps(img.height, out_h, kernel);
    return transpose(resample_rows(transpose(tmp), tv, out_h));
}

}  // namespace detail

inline YImage bicubic_downsample(const YImage& img, int scale) {
    if (scale < 1) fail(ErrorKind::Parameter, "bicubic_downsample: scale must be >= 1");
    if (img.height % scale != 0 || img.width % scale != 0)
        fail(ErrorKind::Dimension, "bicubic_downsample: dimensions not divisible by scale (modcrop first)");
    if (scale == 1) return img;
    return detail::resample(img, img.height / scale, img.width / scale, detail::KernelId::Cubic);
}

/// Arbitrary-size Lanczos-3 resample; also used for the 15x15 -> 16x16
/// patch companion.
inline YImage lanczos_resize(const YImage& img, int out_h, int out_w) {
    if (out_h == img.height && out_w == img.width) return img;
    return detail::resample(img, out_h, out_w, detail::KernelId::Lanczos3);
}

inline YImage lanczos_upscale(const YImage& img, int scale) {
    if (scale < 1) fail(ErrorKind::Parameter, "lanczos_upscale: scale must be >= 1");
    if (scale == 1) return img;
    return lanczos_resize(img, img.height * scale, img.width * scale);
}

/// modcrop -> bicubic down -> Lanczos up; the self-supervised triple used by
/// both training and evaluation.
inline ImagePair make_pair(const YImage& hr_raw, int scale) {
    ImagePair p;
    p.hr = modcrop(hr_raw, scale);
    p.lr = bicubic_downsample(p.hr, scale);
    p.ilr = lanczos_upscale(p.lr, scale);
    return p;
}

}  // namespace lsr
