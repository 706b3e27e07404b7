#pragma once

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "lsr/image.hpp"

namespace lsr {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

/// Decodes an 8-bit PNG as interleaved RGB (palette expanded, 16-bit scaled
/// down, alpha stripped, gray replicated).
inline Rgb8Image read_rgb_png(const std::string& path) {
    detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(ErrorKind::Io, "cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorKind::Io, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorKind::Io, "failed to decode " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_scale_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 3);

    Rgb8Image img;
    img.height = static_cast<int>(h);
    img.width = static_cast<int>(w);
    img.r.resize(static_cast<std::size_t>(w) * h);
    img.g.resize(img.r.size());
    img.b.resize(img.r.size());
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        const std::size_t base = static_cast<std::size_t>(y) * w;
        for (png_uint_32 x = 0; x < w; ++x) {
            img.r[base + x] = row[3 * x];
            img.g[base + x] = row[3 * x + 1];
            img.b[base + x] = row[3 * x + 2];
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline YImage read_luma_png(const std::string& path) {
    return rgb_to_luma(read_rgb_png(path));
}

namespace detail {

inline void write_png_rows(const std::string& path, int height, int width, int channels,
                           const std::vector<std::uint8_t>& interleaved) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(ErrorKind::Io, "cannot create " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::Io, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::Io, "failed to encode " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(&interleaved[static_cast<std::size_t>(y) * width * channels]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace detail

/// Persists luma as 8-bit grayscale (round half away from zero, clamp).
inline void write_gray_png(const std::string& path, const YImage& img) {
    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) bytes[i] = quantize_pixel(img.data[i]);
    detail::write_png_rows(path, img.height, img.width, 1, bytes);
}

inline void write_rgb_png(const std::string& path, const Rgb8Image& img) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(img.height) * img.width * 3);
    for (std::size_t i = 0, n = img.r.size(); i < n; ++i) {
        bytes[3 * i] = img.r[i];
        bytes[3 * i + 1] = img.g[i];
        bytes[3 * i + 2] = img.b[i];
    }
    detail::write_png_rows(path, img.height, img.width, 3, bytes);
}

}  // namespace lsr
