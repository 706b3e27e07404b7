#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "lsr/image.hpp"

namespace lsr {

namespace detail {

inline void check_same_dims(const YImage& a, const YImage& b, const char* who) {
    if (a.height != b.height || a.width != b.width)
        fail(ErrorKind::Dimension, std::string(who) + ": image dimensions differ");
}

}  // namespace detail

/// PSNR in dB over the region with a `shave`-pixel border excluded.
/// Identical images return +infinity.
inline double psnr(const YImage& ref, const YImage& test, int shave = 2) {
    detail::check_same_dims(ref, test, "psnr");
    const int h = ref.height, w = ref.width;
    if (h - 2 * shave < 1 || w - 2 * shave < 1)
        fail(ErrorKind::Dimension, "psnr: shave leaves empty region");
    double sse = 0.0;
    for (int r = shave; r < h - shave; ++r)
        for (int c = shave; c < w - shave; ++c) {
            const double d = ref.at(r, c) - test.at(r, c);
            sse += d * d;
        }
    const double n = static_cast<double>(h - 2 * shave) * (w - 2 * shave);
    const double mse = sse / n;
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Mean local SSIM: 11x11 Gaussian window sigma = 1.5, K1 = 0.01, K2 = 0.03,
/// L = 255, computed on the shaved region with valid window placement.
inline double ssim(const YImage& ref, const YImage& test, int shave = 2) {
    detail::check_same_dims(ref, test, "ssim");
    constexpr int kWin = 11;
    constexpr double kSigma = 1.5;
    constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

    const int h = ref.height - 2 * shave;
    const int w = ref.width - 2 * shave;
    if (h < kWin || w < kWin) fail(ErrorKind::Dimension, "ssim: image smaller than window after shave");

    double window[kWin * kWin];
    double wsum = 0.0;
    for (int dy = 0; dy < kWin; ++dy)
        for (int dx = 0; dx < kWin; ++dx) {
            const double y = dy - (kWin - 1) / 2.0, x = dx - (kWin - 1) / 2.0;
            window[dy * kWin + dx] = std::exp(-(x * x + y * y) / (2.0 * kSigma * kSigma));
            wsum += window[dy * kWin + dx];
        }
    for (double& v : window) v /= wsum;

    double total = 0.0;
    std::size_t count = 0;
    for (int r = 0; r + kWin <= h; ++r) {
        for (int c = 0; c + kWin <= w; ++c) {
            double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
            for (int dy = 0; dy < kWin; ++dy)
                for (int dx = 0; dx < kWin; ++dx) {
                    const double wt = window[dy * kWin + dx];
                    const double x = ref.at(shave + r + dy, shave + c + dx);
                    const double y = test.at(shave + r + dy, shave + c + dx);
                    mx += wt * x;
                    my += wt * y;
                    sxx += wt * x * x;
                    syy += wt * y * y;
                    sxy += wt * (x * y);  // parenthesized so ssim(a,b) == ssim(b,a) bit-exactly
                }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cxy = sxy - mx * my;
            total += ((2.0 * mx * my + kC1) * (2.0 * cxy + kC2)) /
                     ((mx * mx + my * my + kC1) * (vx + vy + kC2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace lsr
