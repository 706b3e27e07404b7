#pragma once

#include <array>
#include <cmath>

#include "lsr/patches.hpp"

namespace lsr {

constexpr int kHogCellSide = 8;  // 4 non-overlapping 8×8 cells over 16×16
constexpr int kHogBins = 8;      // unsigned orientations over [0, π)
constexpr int kHogDim = 32;

/// Histogram of oriented gradients of the 16×16 companion patch:
/// central-difference gradients with replicate borders, hard assignment of
/// the unsigned orientation into 8 bins weighted by gradient magnitude, one
/// histogram per 8×8 cell, ℓ2-normalized over the whole 32-vector.
inline std::array<double, kHogDim> hog(const std::array<double, kHogArea>& patch16) {
    std::array<double, kHogDim> desc{};
    constexpr double kBinWidth = 3.14159265358979323846 / kHogBins;
    for (int r = 0; r < kHogSide; ++r) {
        for (int c = 0; c < kHogSide; ++c) {
            const int cl = c > 0 ? c - 1 : 0, cr = c < kHogSide - 1 ? c + 1 : kHogSide - 1;
            const int ru = r > 0 ? r - 1 : 0, rd = r < kHogSide - 1 ? r + 1 : kHogSide - 1;
            const double gx = patch16[r * kHogSide + cr] - patch16[r * kHogSide + cl];
            const double gy = patch16[rd * kHogSide + c] - patch16[ru * kHogSide + c];
            const double mag = std::sqrt(gx * gx + gy * gy);
            if (mag == 0.0) continue;
            double theta = std::atan2(gy, gx);
            if (theta < 0) theta += 3.14159265358979323846;
            int bin = static_cast<int>(theta / kBinWidth);  // [0, π) → 0..7
            if (bin >= kHogBins) bin = 0;                   // θ = π wraps to 0
            const int cell = (r / kHogCellSide) * 2 + (c / kHogCellSide);
            desc[cell * kHogBins + bin] += mag;
        }
    }
    double norm2 = 0;
    for (double v : desc) norm2 += v * v;
    const double inv = 1.0 / std::sqrt(norm2 + 1e-12);
    for (double& v : desc) v *= inv;
    return desc;
}

}  // namespace lsr
