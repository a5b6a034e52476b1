#pragma once

#include <cmath>
#include <numbers>

#include "negsym/image.hpp"

namespace negsym {

// Angles are degrees throughout. Rotations live on [0,360), reflection-axis
// tilts on [0,180). Pixel (row i, col j) maps to Cartesian x = j - c (right),
// y = c - i (up) with c the image centre, so a reflection tilted 90 degrees
// (vertical axis) is the left-right pixel flip.

inline double normalize_rotation_deg(double theta) {
    double a = std::fmod(theta, 360.0);
    if (a < 0.0) a += 360.0;
    return a;
}

inline double normalize_tilt_deg(double theta) {
    double a = std::fmod(theta, 180.0);
    if (a < 0.0) a += 180.0;
    return a;
}

namespace detail {

template <typename Map>
GreyImage permute_pixels(const GreyImage& img, Map&& map) {
    const int n = img.size();
    GreyImage out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto [si, sj] = map(i, j);
            out.at(i, j) = img.at(si, sj);
        }
    return out;
}

template <typename SourcePoint>
GreyImage inverse_map(const GreyImage& img, SourcePoint&& source) {
    const int n = img.size();
    const double c = img.centre();
    GreyImage out(n);
    for (int i = 0; i < n; ++i) {
        const double y = c - i;
        for (int j = 0; j < n; ++j) {
            const double x = j - c;
            auto [sx, sy] = source(x, y);
            out.at(i, j) = sample_bilinear(img, c - sy, c + sx);
        }
    }
    return out;
}

}  // namespace detail

// Rotation about the centre; inverse mapping with bilinear interpolation.
// Multiples of 90 degrees are exact pixel permutations.
inline GreyImage rotate(const GreyImage& img, double theta_deg) {
    const double a = normalize_rotation_deg(theta_deg);
    const int n1 = img.size() - 1;
    if (a == 0.0) return img;
    if (a == 90.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{j, n1 - i}; });
    if (a == 180.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{n1 - i, n1 - j}; });
    if (a == 270.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{n1 - j, i}; });

    const double rad = a * std::numbers::pi / 180.0;
    const double cs = std::cos(rad);
    const double sn = std::sin(rad);
    return detail::inverse_map(img, [cs, sn](double x, double y) {
        return std::pair{cs * x + sn * y, cs * y - sn * x};
    });
}

// Reflection across the line through the centre tilted theta from the x-axis.
// Tilts {0, 45, 90, 135} are exact pixel permutations; a reflection is its own
// inverse, so the inverse map is the reflection itself.
inline GreyImage reflect(const GreyImage& img, double theta_deg) {
    const double a = normalize_tilt_deg(theta_deg);
    const int n1 = img.size() - 1;
    if (a == 0.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{n1 - i, j}; });
    if (a == 45.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{n1 - j, n1 - i}; });
    if (a == 90.0)
        return detail::permute_pixels(img, [n1](int i, int j) { return std::pair{i, n1 - j}; });
    if (a == 135.0)
        return detail::permute_pixels(img, [](int i, int j) { return std::pair{j, i}; });

    const double rad = 2.0 * a * std::numbers::pi / 180.0;
    const double c2 = std::cos(rad);
    const double s2 = std::sin(rad);
    return detail::inverse_map(img, [c2, s2](double x, double y) {
        return std::pair{c2 * x + s2 * y, s2 * x - c2 * y};
    });
}

// Pixelwise mean of two images of equal size.
inline GreyImage average(const GreyImage& a, const GreyImage& b) {
    if (a.size() != b.size())
        throw Error(Errc::size_mismatch, "cannot average images of sizes " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()));
    GreyImage out(a.size());
    auto pa = a.pixels();
    auto pb = b.pixels();
    auto po = out.pixels();
    for (std::size_t k = 0; k < po.size(); ++k) po[k] = (pa[k] + pb[k]) / 2.0;
    return out;
}

enum class TransformKind { rotation, reflection };

struct PlanarTransform {
    TransformKind kind;
    double angle_deg;

    GreyImage apply(const GreyImage& img) const {
        return kind == TransformKind::rotation ? rotate(img, angle_deg) : reflect(img, angle_deg);
    }
};

}  // namespace negsym
