#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "negsym/errors.hpp"

namespace negsym {

inline constexpr int kMinImageSize = 8;
inline constexpr double kVarianceFloor = 1e-12;

// Square greyscale image with intensities in [0,1]. The coordinate origin for
// every geometric operation is the image centre at ((n-1)/2, (n-1)/2).
class GreyImage {
public:
    explicit GreyImage(int size) : size_(validated(size)), px_(static_cast<std::size_t>(size) * size, 0.0) {}

    static GreyImage from_pixels(int size, std::vector<double> pixels) {
        GreyImage img(size);
        if (pixels.size() != img.px_.size())
            throw Error(Errc::size_mismatch, "pixel buffer does not match size " + std::to_string(size));
        for (double v : pixels) {
            if (!(v >= 0.0 && v <= 1.0))
                throw Error(Errc::unsupported_format, "intensity outside [0,1]");
        }
        img.px_ = std::move(pixels);
        return img;
    }

    int size() const noexcept { return size_; }
    double centre() const noexcept { return (size_ - 1) / 2.0; }

    double at(int row, int col) const { return px_[static_cast<std::size_t>(row) * size_ + col]; }
    double& at(int row, int col) { return px_[static_cast<std::size_t>(row) * size_ + col]; }

    std::span<const double> pixels() const noexcept { return px_; }
    std::span<double> pixels() noexcept { return px_; }

    bool operator==(const GreyImage& other) const = default;

private:
    static int validated(int size) {
        if (size < kMinImageSize)
            throw Error(Errc::degenerate_image, "image size " + std::to_string(size) + " is below the minimum of " +
                                                    std::to_string(kMinImageSize));
        return size;
    }

    int size_;
    std::vector<double> px_;
};

// Pixels within Euclidean distance (n-1)/2 of the centre. Membership is
// decided in exact integer arithmetic: (2i-(n-1))^2 + (2j-(n-1))^2 <= (n-1)^2,
// which is invariant under any rotation or reflection about the centre.
class DiskMask {
public:
    explicit DiskMask(int size) : size_(size), row_begin_(size), row_end_(size) {
        const std::int64_t d = size - 1;
        const std::int64_t r2 = d * d;
        for (int i = 0; i < size; ++i) {
            int begin = size, end = 0;
            const std::int64_t di = 2 * static_cast<std::int64_t>(i) - d;
            for (int j = 0; j < size; ++j) {
                const std::int64_t dj = 2 * static_cast<std::int64_t>(j) - d;
                if (di * di + dj * dj <= r2) {
                    if (begin == size) begin = j;
                    end = j + 1;
                }
            }
            row_begin_[i] = begin;
            row_end_[i] = end;
            count_ += static_cast<std::size_t>(std::max(0, end - begin));
        }
    }

    int size() const noexcept { return size_; }
    std::size_t count() const noexcept { return count_; }

    bool inside(int row, int col) const noexcept {
        return col >= row_begin_[row] && col < row_end_[row];
    }

    // Row-major visit of member pixels; the iteration order is the canonical
    // sample order for every statistic in the library.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (int i = 0; i < size_; ++i)
            for (int j = row_begin_[i]; j < row_end_[i]; ++j) fn(i, j);
    }

private:
    int size_;
    std::vector<int> row_begin_, row_end_;
    std::size_t count_ = 0;
};

// Masked pixel sequence brought to zero mean and unit variance.
struct StandardizedSamples {
    std::vector<double> values;

    std::size_t count() const noexcept { return values.size(); }
};

inline std::vector<double> masked_values(const GreyImage& img, const DiskMask& mask) {
    std::vector<double> out;
    out.reserve(mask.count());
    mask.for_each([&](int i, int j) { out.push_back(img.at(i, j)); });
    return out;
}

inline double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Population variance (divide by N); the two-point example {-1,+1} relies on it.
inline double variance_of(std::span<const double> values, double mean) {
    double sum = 0.0;
    for (double v : values) {
        const double d = v - mean;
        sum += d * d;
    }
    return sum / static_cast<double>(values.size());
}

inline StandardizedSamples standardize_sequence(std::span<const double> values, Errc zero_variance_code) {
    const double mu = mean_of(values);
    const double var = variance_of(values, mu);
    if (var <= kVarianceFloor) {
        throw Error(zero_variance_code, zero_variance_code == Errc::zero_variance_curve
                                            ? "curve is constant; negentropy is undefined"
                                            : "image is constant over the disk; negentropy is undefined");
    }
    const double inv_sigma = 1.0 / std::sqrt(var);
    StandardizedSamples out;
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back((v - mu) * inv_sigma);
    return out;
}

inline StandardizedSamples standardize(const GreyImage& img, const DiskMask& mask) {
    return standardize_sequence(masked_values(img, mask), Errc::zero_variance_image);
}

namespace detail {
inline constexpr double kEdgeEps = 1e-9;
}

// Bilinear sample at fractional (row, col). Points outside the grid yield 0;
// such points are never inside the disk mask, so the fill value is inert.
inline double sample_bilinear(const GreyImage& img, double row, double col) {
    const double hi = static_cast<double>(img.size() - 1);
    if (row < -detail::kEdgeEps || row > hi + detail::kEdgeEps || col < -detail::kEdgeEps ||
        col > hi + detail::kEdgeEps)
        return 0.0;
    row = std::clamp(row, 0.0, hi);
    col = std::clamp(col, 0.0, hi);
    const int r0 = static_cast<int>(row);
    const int c0 = static_cast<int>(col);
    const int r1 = std::min(r0 + 1, img.size() - 1);
    const int c1 = std::min(c0 + 1, img.size() - 1);
    const double fr = row - r0;
    const double fc = col - c0;
    const double top = (1.0 - fc) * img.at(r0, c0) + fc * img.at(r0, c1);
    const double bot = (1.0 - fc) * img.at(r1, c0) + fc * img.at(r1, c1);
    return (1.0 - fr) * top + fr * bot;
}

// Bilinear resample to target x target pixels. Corner-aligned mapping keeps
// the image centre fixed, and resizing to the same size is the identity.
inline GreyImage resize(const GreyImage& img, int target) {
    if (target < kMinImageSize)
        throw Error(Errc::degenerate_image, "resize target " + std::to_string(target) + " is below the minimum of " +
                                                std::to_string(kMinImageSize));
    if (target == img.size()) return img;
    GreyImage out(target);
    const double scale = static_cast<double>(img.size() - 1) / static_cast<double>(target - 1);
    for (int i = 0; i < target; ++i) {
        const double src_row = i * scale;
        for (int j = 0; j < target; ++j) out.at(i, j) = sample_bilinear(img, src_row, j * scale);
    }
    return out;
}

}  // namespace negsym
