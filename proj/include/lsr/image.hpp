#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "lsr/common.hpp"

namespace lsr {

/// Single-channel luminance raster, row-major, nominal range [0, 255].
/// Values may drift outside the range during processing; clamp() restores it.
struct YImage {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    YImage() = default;
    YImage(int h, int w, double fill = 0.0) : height(h), width(w), data() {
        if (h < 1 || w < 1) fail(ErrorKind::Dimension, "YImage: dimensions must be >= 1");
        data.assign(static_cast<std::size_t>(h) * w, fill);
    }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return data.size(); }
};

struct ImagePair {
    YImage hr;
    YImage ilr;  // same dimensions as hr
    YImage lr;   // hr dimensions divided by scale
};

struct Rgb8Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> r, g, b;
};

// Full-range BT.601 luma. The Y/Cb/Cr pair below is its JPEG-style companion.
inline double luma601(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

inline YImage rgb_to_luma(const std::vector<std::uint8_t>& r, const std::vector<std::uint8_t>& g,
                          const std::vector<std::uint8_t>& b, int height, int width) {
    const std::size_t n = static_cast<std::size_t>(height) * width;
    if (r.size() != n || g.size() != n || b.size() != n)
        fail(ErrorKind::Dimension, "rgb_to_luma: channel length != height*width");
    YImage out(height, width);
    for (std::size_t i = 0; i < n; ++i) out.data[i] = luma601(r[i], g[i], b[i]);
    return out;
}

inline YImage rgb_to_luma(const Rgb8Image& img) {
    return rgb_to_luma(img.r, img.g, img.b, img.height, img.width);
}

inline void rgb_to_ycbcr(double r, double g, double b, double& y, double& cb, double& cr) {
    y = luma601(r, g, b);
    cb = 128.0 + (b - y) / 1.772;
    cr = 128.0 + (r - y) / 1.402;
}

inline void ycbcr_to_rgb(double y, double cb, double cr, double& r, double& g, double& b) {
    r = y + 1.402 * (cr - 128.0);
    b = y + 1.772 * (cb - 128.0);
    g = (y - 0.299 * r - 0.114 * b) / 0.587;
}

/// Crops bottom/right so both dimensions divide by `scale`.
inline YImage modcrop(const YImage& img, int scale) {
    if (scale < 1) fail(ErrorKind::Parameter, "modcrop: scale must be >= 1");
    const int h = img.height - img.height % scale;
    const int w = img.width - img.width % scale;
    if (h < 1 || w < 1) fail(ErrorKind::Dimension, "modcrop: result would be empty");
    if (h == img.height && w == img.width) return img;
    YImage out(h, w);
    for (int r = 0; r < h; ++r)
        std::copy_n(&img.data[static_cast<std::size_t>(r) * img.width], w, &out.data[static_cast<std::size_t>(r) * w]);
    return out;
}

inline void clamp_pixels(YImage& img, double lo = 0.0, double hi = 255.0) {
    for (double& v : img.data) v = std::clamp(v, lo, hi);
}

/// Quantizes to 8 bits: round half away from zero, then clamp.
inline std::uint8_t quantize_pixel(double v) {
    double r = std::round(v);  // std::round = half away from zero
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace lsr
