#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "negsym/image.hpp"
#include "negsym/synthetic.hpp"
#include "negsym/transforms.hpp"

namespace testutil {

// Fresh per-suite scratch directory under the test working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::path("scratch") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline double disk_mad(const negsym::GreyImage& a, const negsym::GreyImage& b) {
    negsym::DiskMask mask(a.size());
    double sum = 0.0;
    mask.for_each([&](int i, int j) { sum += std::abs(a.at(i, j) - b.at(i, j)); });
    return sum / static_cast<double>(mask.count());
}

// Smooth synthetic image for interpolation-tolerance tests.
inline negsym::GreyImage smooth_image(int idx) {
    negsym::SymmetrySpec spec;
    spec.type = idx % 2 ? negsym::SymmetryType::rotational : negsym::SymmetryType::reflectional;
    spec.order = 2 + idx % 7;
    spec.tilt_deg = 20.0 + 7.0 * (idx % 10);
    spec.seed = 910000 + static_cast<std::uint64_t>(idx);
    return negsym::generate(spec);
}

inline std::vector<char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Minimal RGB8 PNG writer for load_image tests.
inline void write_png_rgb(const std::filesystem::path& path, int width, int height, unsigned char r,
                          unsigned char g, unsigned char b) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(static_cast<std::size_t>(width) * 3);
    for (int x = 0; x < width; ++x) {
        row[static_cast<std::size_t>(x) * 3] = r;
        row[static_cast<std::size_t>(x) * 3 + 1] = g;
        row[static_cast<std::size_t>(x) * 3 + 2] = b;
    }
    for (int y = 0; y < height; ++y) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace testutil
