#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "negsym/image.hpp"

namespace negsym {

namespace detail {

struct RasterU8 {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 grey, 3 rgb
    int maxval = 255;
    std::vector<std::uint8_t> data;  // row-major, interleaved
};

inline int pgm_next_token(std::istream& in) {
    // Skips whitespace and '#' comments, then parses a non-negative integer.
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF || !std::isdigit(ch)) throw Error(Errc::unsupported_format, "malformed PGM header");
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > 1 << 30) throw Error(Errc::unsupported_format, "PGM header value out of range");
        ch = in.get();
    }
    return static_cast<int>(value);
}

inline RasterU8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::file_not_found, "cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw Error(Errc::unsupported_format, path + ": only binary (P5) PGM is supported");
    RasterU8 raster;
    raster.width = pgm_next_token(in);
    raster.height = pgm_next_token(in);
    raster.maxval = pgm_next_token(in);
    if (raster.width <= 0 || raster.height <= 0)
        throw Error(Errc::unsupported_format, path + ": bad PGM dimensions");
    if (raster.maxval <= 0 || raster.maxval > 255)
        throw Error(Errc::unsupported_format, path + ": only 8-bit PGM is supported");
    raster.channels = 1;
    raster.data.resize(static_cast<std::size_t>(raster.width) * raster.height);
    in.read(reinterpret_cast<char*>(raster.data.data()), static_cast<std::streamsize>(raster.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.data.size()))
        throw Error(Errc::unsupported_format, path + ": truncated PGM pixel data");
    return raster;
}

inline RasterU8 read_png(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw Error(Errc::file_not_found, "cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error(Errc::io_error, "libpng initialization failed");
    }
    RasterU8 raster;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error(Errc::unsupported_format, path + ": invalid PNG data");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    raster.width = static_cast<int>(png_get_image_width(png, info));
    raster.height = static_cast<int>(png_get_image_height(png, info));
    raster.channels = static_cast<int>(png_get_channels(png, info));
    if (raster.channels != 1 && raster.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error(Errc::unsupported_format, path + ": PNG must decode to greyscale or RGB");
    }
    raster.data.resize(static_cast<std::size_t>(raster.width) * raster.height * raster.channels);
    std::vector<png_bytep> rows(static_cast<std::size_t>(raster.height));
    const std::size_t stride = static_cast<std::size_t>(raster.width) * raster.channels;
    for (int y = 0; y < raster.height; ++y) rows[static_cast<std::size_t>(y)] = raster.data.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return raster;
}

}  // namespace detail

// Loads an 8-bit PGM (P5) or PNG raster, converts RGB to grey with BT.601
// luma weights, centre-crops non-square inputs to the largest square, and
// maps intensities to [0,1].
inline GreyImage load_image(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) throw Error(Errc::file_not_found, path + ": no such file");

    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error(Errc::file_not_found, "cannot open " + path);
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    probe.close();

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    detail::RasterU8 raster;
    if (std::equal(std::begin(png_sig), std::end(png_sig), sig)) {
        raster = detail::read_png(path);
    } else if (sig[0] == 'P' && sig[1] == '5') {
        raster = detail::read_pgm(path);
    } else {
        throw Error(Errc::unsupported_format, path + ": not a PGM (P5) or PNG file");
    }

    const int side = std::min(raster.width, raster.height);
    if (side < kMinImageSize)
        throw Error(Errc::degenerate_image, path + ": image side " + std::to_string(side) + " is below minimum");
    const int off_x = (raster.width - side) / 2;
    const int off_y = (raster.height - side) / 2;

    const double inv = 1.0 / raster.maxval;
    GreyImage img(side);
    for (int i = 0; i < side; ++i) {
        const std::uint8_t* row =
            raster.data.data() + (static_cast<std::size_t>(i + off_y) * raster.width + off_x) * raster.channels;
        for (int j = 0; j < side; ++j) {
            if (raster.channels == 1) {
                img.at(i, j) = row[j] * inv;
            } else {
                const std::uint8_t* px = row + static_cast<std::size_t>(j) * 3;
                img.at(i, j) = (0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) * inv;
            }
        }
    }
    return img;
}

// Writes an 8-bit binary PGM (P5), row-major, maxval 255. Loading the result
// back and writing it again reproduces the pixel bytes exactly.
inline void write_pgm(const GreyImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << "P5\n" << img.size() << " " << img.size() << "\n255\n";
    std::vector<std::uint8_t> bytes;
    bytes.reserve(img.pixels().size());
    for (double v : img.pixels())
        bytes.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, "short write to " + path);
}

}  // namespace negsym
