#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "negsym/image.hpp"
#include "negsym/image_io.hpp"
#include "negsym/manifest.hpp"
#include "negsym/negentropy.hpp"
#include "negsym/transforms.hpp"

namespace negsym {

// Fixed, documented pseudo-random stream so datasets are reproducible across
// implementations: splitmix64 over a 64-bit state; doubles take the top 53
// bits of each output, giving values in [0,1).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

struct SymmetrySpec {
    SymmetryType type = SymmetryType::reflectional;
    int order = 1;
    double tilt_deg = 0.0;  // reflectional only
    std::uint64_t seed = 0;
    int harmonic_count = 8;
    int radial_count = 6;
    int size = 256;
};

namespace detail {

struct Complex2 {
    double re, im;
};

// Fixed-form complex product; negating or conjugating both factors negates or
// conjugates the result bit-exactly, which the grid-aligned symmetry
// guarantees below rely on.
inline Complex2 cmul(Complex2 a, Complex2 b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// z^order by square-and-multiply with a fixed evaluation order.
inline Complex2 cpow(Complex2 z, int order) {
    int bit = std::bit_width(static_cast<unsigned>(order)) - 2;
    Complex2 acc = z;
    for (; bit >= 0; --bit) {
        acc = cmul(acc, acc);
        if ((order >> bit) & 1) acc = cmul(acc, z);
    }
    return acc;
}

// cos/sin of the tilt with exact values at the four permutation-aligned
// angles, so reflections and rotations on those angles leave generated
// images bit-identical.
inline Complex2 tilt_direction(double tilt_deg) {
    const double s2 = std::sqrt(0.5);
    if (tilt_deg == 0.0) return {1.0, 0.0};
    if (tilt_deg == 45.0) return {s2, s2};
    if (tilt_deg == 90.0) return {0.0, 1.0};
    if (tilt_deg == 135.0) return {-s2, s2};
    const double rad = tilt_deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

struct HarmonicDraw {
    std::vector<int> harmonics;   // multipliers k of the base frequency `order`
    std::vector<double> coef_a;   // cosine coefficient per (shell, harmonic)
    std::vector<double> coef_b;   // sine coefficient per (shell, harmonic)
    double gamma = 2.0;
};

// Smallest reflection-asymmetry over all candidate axes, as the fraction of
// angular energy in the antisymmetric component. Zero for a field with an
// exact reflection axis.
inline double reflection_asymmetry(const HarmonicDraw& d, int order, int shells) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.coef_a.size(); ++i) total += d.coef_a[i] * d.coef_a[i] + d.coef_b[i] * d.coef_b[i];
    if (!(total > 0.0)) return 0.0;
    const int k_count = static_cast<int>(d.harmonics.size());
    double worst = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 256; ++step) {
        const double alpha = step * (2.0 * std::numbers::pi / order) / 256.0;
        double antisym = 0.0;
        for (int m = 0; m < shells; ++m) {
            for (int ki = 0; ki < k_count; ++ki) {
                const std::size_t idx = static_cast<std::size_t>(m) * k_count + ki;
                const double phase = d.harmonics[static_cast<std::size_t>(ki)] * order * alpha;
                const double im = d.coef_a[idx] * std::sin(phase) - d.coef_b[idx] * std::cos(phase);
                antisym += im * im;
            }
        }
        worst = std::min(worst, antisym / total);
    }
    return worst;
}

// Coefficient draw order (fixed): for each radial shell, for each harmonic:
// amplitude u, then phase u; finally one draw for the gamma warp.
inline HarmonicDraw draw_harmonics(SplitMix64& rng, SymmetryType type, int order, int shells, int harmonic_cap) {
    HarmonicDraw d;
    if (type == SymmetryType::reflectional) {
        d.harmonics = {1};
    } else {
        const int k_count = std::clamp(28 / order, 2, std::min(harmonic_cap, 6));
        for (int k = 1; k <= k_count; ++k) d.harmonics.push_back(k);
    }
    const int k_count = static_cast<int>(d.harmonics.size());
    d.coef_a.assign(static_cast<std::size_t>(shells) * k_count, 0.0);
    d.coef_b.assign(static_cast<std::size_t>(shells) * k_count, 0.0);
    for (int m = 0; m < shells; ++m) {
        for (int ki = 0; ki < k_count; ++ki) {
            const std::size_t idx = static_cast<std::size_t>(m) * k_count + ki;
            if (type == SymmetryType::reflectional) {
                const double amp = rng.uniform(0.70, 1.0);
                d.coef_a[idx] = rng.next_double() < 0.5 ? -amp : amp;
            } else {
                const double amp = rng.uniform(0.35, 1.0) / std::sqrt(static_cast<double>(d.harmonics[ki]));
                const double phase = 2.0 * std::numbers::pi * rng.next_double();
                d.coef_a[idx] = amp * std::cos(phase);
                d.coef_b[idx] = amp * std::sin(phase);
            }
        }
    }
    d.gamma = rng.uniform(2.2, 3.2);
    return d;
}

inline GreyImage render_field(const HarmonicDraw& d, int order, double tilt_deg, int shells, int size) {
    std::vector<double> bump_centre(static_cast<std::size_t>(shells));
    for (int m = 0; m < shells; ++m)
        bump_centre[static_cast<std::size_t>(m)] = shells == 1 ? 0.5 : 0.18 + 0.60 * m / static_cast<double>(shells - 1);
    const double bump_width = 0.55 / shells + 0.08;

    const int k_count = static_cast<int>(d.harmonics.size());
    const double centre = (size - 1) / 2.0;
    const double radius = (size - 1) / 2.0;
    const Complex2 tilt_dir = tilt_direction(tilt_deg);

    GreyImage img(size);
    std::vector<double> raw(static_cast<std::size_t>(size) * size);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> g(static_cast<std::size_t>(shells));
    for (int i = 0; i < size; ++i) {
        const double y = centre - i;
        for (int j = 0; j < size; ++j) {
            const double x = j - centre;
            const double r = std::sqrt(x * x + y * y);
            const double rho = r / radius;

            double value = 0.0;
            if (rho < 1.0) {
                const double env = (1.0 - rho * rho) * (1.0 - rho * rho);
                for (int m = 0; m < shells; ++m) {
                    const double dist = (rho - bump_centre[static_cast<std::size_t>(m)]) / bump_width;
                    g[static_cast<std::size_t>(m)] = std::exp(-dist * dist) * env;
                }

                Complex2 dir{1.0, 0.0};
                if (r > 0.0) dir = {x / r, y / r};
                // Components of (cos(phi - tilt), sin(phi - tilt)).
                const Complex2 base{dir.re * tilt_dir.re + dir.im * tilt_dir.im,
                                    dir.im * tilt_dir.re - dir.re * tilt_dir.im};
                const Complex2 fundamental = cpow(base, order);

                Complex2 w{1.0, 0.0};
                int reached = 0;
                for (int ki = 0; ki < k_count; ++ki) {
                    for (; reached < d.harmonics[static_cast<std::size_t>(ki)]; ++reached) w = cmul(w, fundamental);
                    double shell_sum = 0.0;
                    for (int m = 0; m < shells; ++m) {
                        const std::size_t idx = static_cast<std::size_t>(m) * k_count + ki;
                        shell_sum += g[static_cast<std::size_t>(m)] * (d.coef_a[idx] * w.re + d.coef_b[idx] * w.im);
                    }
                    value += shell_sum;
                }
            }
            raw[static_cast<std::size_t>(i) * size + j] = value;
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
    }

    if (!(hi > lo)) throw Error(Errc::invalid_spec, "degenerate coefficient draw produced a flat field");
    const double span = hi - lo;
    auto px = img.pixels();
    for (std::size_t k = 0; k < raw.size(); ++k) px[k] = std::pow((raw[k] - lo) / span, d.gamma);
    return img;
}

// How far (relative to the baseline negentropy) the reflectional negentropy
// at the mid-axis angles stays from the baseline. A reflectional test image
// must keep these "anti-axis" reflections clearly ineligible or the detector
// faces a documented ambiguity, so draws below the margin are rejected.
inline double anti_axis_margin(const GreyImage& img, int order, double tilt_deg) {
    const DiskMask mask(img.size());
    const double baseline = negentropy(standardize(img, mask));
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < order; ++k) {
        const double anti = normalize_tilt_deg(tilt_deg + (k + 0.5) * 180.0 / order);
        const double j = negentropy(standardize(average(img, reflect(img, anti)), mask));
        margin = std::min(margin, std::abs(j - baseline) / baseline);
    }
    return margin;
}

}  // namespace detail

// Deterministic synthetic image with an exact planar symmetry.
//
// The intensity field is a band-limited polar-harmonic sum
//
//   f(r, phi) = sum_m g_m(r) * sum_k [ a_mk cos(order*k*(phi - tilt))
//                                    + b_mk sin(order*k*(phi - tilt)) ]
//
// with Gaussian radial bumps g_m that vanish at the disk boundary, min-max
// scaled to [0,1] and gamma-warped so the intensity distribution stays
// comfortably non-Gaussian. Cosine-only coefficients (b = 0) make
// phi -> 2*tilt - phi an exact symmetry at every real coordinate; rotational
// draws carry several harmonics with random phases, which generically admit
// no reflection axis. The angular basis is evaluated as powers of the unit
// direction vector, never through transcendentals of the polar angle, which
// keeps grid-aligned symmetries bit-exact under the matching
// pixel-permutation transforms.
//
// Two qualification rules shape the random draws (deterministically, by
// advancing the same stream):
//   - reflectional draws must keep the negentropy at every mid-axis
//     reflection at least 8% away from the baseline, so the image carries no
//     accidental near-symmetry between its true axes;
//   - rotational draws must keep at least 12% of their angular energy
//     antisymmetric under the best-fitting reflection axis.
// Up to 32 redraws are attempted; the best draw seen wins if none qualifies.
inline GreyImage generate(const SymmetrySpec& spec) {
    if (spec.size < kMinImageSize) throw Error(Errc::invalid_spec, "size below minimum");
    if (spec.harmonic_count < 1 || spec.harmonic_count > 64)
        throw Error(Errc::invalid_spec, "harmonic_count out of range");
    if (spec.radial_count < 1 || spec.radial_count > 64)
        throw Error(Errc::invalid_spec, "radial_count out of range");
    int order = spec.order;
    double tilt = spec.tilt_deg;
    if (spec.type == SymmetryType::none) {
        order = 1;
        tilt = 0.0;
    } else {
        if (order < 1 || order > 9) throw Error(Errc::invalid_spec, "order must be in 1..9");
        if (spec.type == SymmetryType::rotational && order < 2)
            throw Error(Errc::invalid_spec, "rotational symmetry requires order >= 2");
        if (spec.type == SymmetryType::rotational) tilt = 0.0;
        if (spec.type == SymmetryType::reflectional && !(tilt >= 0.0 && tilt < 180.0))
            throw Error(Errc::invalid_spec, "tilt must lie in [0,180)");
    }

    SplitMix64 rng(spec.seed);
    constexpr int kMaxTries = 32;

    if (spec.type == SymmetryType::none) {
        // Full-spectrum random field: independent uniform pixels, min-max
        // scaled. Averaging it with any transformed copy sums unrelated
        // values and Gaussianizes, which is exactly what an asymmetric
        // oracle image must do.
        GreyImage img(spec.size);
        auto px = img.pixels();
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (auto& v : px) {
            v = rng.next_double();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) throw Error(Errc::invalid_spec, "degenerate noise draw");
        for (auto& v : px) v = (v - lo) / (hi - lo);
        return img;
    }

    if (spec.type == SymmetryType::rotational) {
        detail::HarmonicDraw best;
        double best_score = -1.0;
        for (int tries = 0; tries < kMaxTries; ++tries) {
            detail::HarmonicDraw d =
                detail::draw_harmonics(rng, spec.type, order, spec.radial_count, spec.harmonic_count);
            const double score = detail::reflection_asymmetry(d, order, spec.radial_count);
            if (score > best_score) {
                best_score = score;
                best = std::move(d);
            }
            if (best_score >= 0.12) break;
        }
        return detail::render_field(best, order, tilt, spec.radial_count, spec.size);
    }

    if (spec.type == SymmetryType::reflectional) {
        GreyImage best(spec.size);
        double best_margin = -1.0;
        for (int tries = 0; tries < kMaxTries; ++tries) {
            const detail::HarmonicDraw d =
                detail::draw_harmonics(rng, spec.type, order, spec.radial_count, spec.harmonic_count);
            GreyImage img = detail::render_field(d, order, tilt, spec.radial_count, spec.size);
            const double margin = detail::anti_axis_margin(img, order, tilt);
            if (margin > best_margin) {
                best_margin = margin;
                best = std::move(img);
            }
            if (best_margin >= 0.08) break;
        }
        return best;
    }

    const detail::HarmonicDraw d = detail::draw_harmonics(rng, spec.type, order, spec.radial_count, spec.harmonic_count);
    return detail::render_field(d, order, tilt, spec.radial_count, spec.size);
}

namespace detail {

// Reflecting at the four pixel-permutation angles skips interpolation, which
// lifts the negentropy curve there by the interpolation bias and can plant a
// spurious one-sample extremum next to a true axis. Dataset tilts keep every
// axis clear of those angles so ground truth stays unambiguous at the
// one-degree sampling the harness uses.
inline bool axes_clear_of_permutation_angles(double tilt_deg, int order) {
    for (int k = 0; k < order; ++k) {
        const double axis = normalize_tilt_deg(tilt_deg + k * 180.0 / order);
        for (double special : {0.0, 45.0, 90.0, 135.0, 180.0}) {
            if (std::abs(axis - special) < 1.5) return false;
        }
    }
    return true;
}

}  // namespace detail

// Writes `count_per_class` images for every class (reflectional orders 1..9,
// rotational orders 2..9) plus the ground-truth manifest `manifest.csv`.
// Per-image seeds and tilts come from a single splitmix64 stream seeded with
// `seed`, drawn in class-major order, so reruns are byte-identical. Tilts are
// whole degrees, redrawn while any axis falls within 1.5 degrees of a
// permutation-exact reflection angle.
inline std::vector<GroundTruthRecord> generate_dataset(int count_per_class, std::uint64_t seed,
                                                       const std::string& out_dir, int size = 256) {
    if (count_per_class < 1) throw Error(Errc::invalid_spec, "count_per_class must be positive");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create " + out_dir + ": " + ec.message());

    struct ClassDef {
        SymmetryType type;
        int order;
    };
    std::vector<ClassDef> classes;
    for (int k = 1; k <= 9; ++k) classes.push_back({SymmetryType::reflectional, k});
    for (int k = 2; k <= 9; ++k) classes.push_back({SymmetryType::rotational, k});

    SplitMix64 master(seed);
    std::vector<GroundTruthRecord> records;
    for (const auto& cls : classes) {
        for (int idx = 0; idx < count_per_class; ++idx) {
            SymmetrySpec spec;
            spec.type = cls.type;
            spec.order = cls.order;
            spec.seed = master.next();
            spec.size = size;
            if (cls.type == SymmetryType::reflectional) {
                do {
                    spec.tilt_deg = std::floor(master.uniform(0.0, 180.0));
                } while (!detail::axes_clear_of_permutation_angles(spec.tilt_deg, spec.order));
            }

            char name[64];
            std::snprintf(name, sizeof(name), "%s_o%d_%03d.pgm",
                          cls.type == SymmetryType::reflectional ? "refl" : "rot", cls.order, idx);
            write_pgm(generate(spec), (std::filesystem::path(out_dir) / name).string());

            GroundTruthRecord rec;
            rec.filename = name;
            rec.type = cls.type;
            rec.order = cls.order;
            if (cls.type == SymmetryType::reflectional) rec.tilt_deg = spec.tilt_deg;
            records.push_back(std::move(rec));
        }
    }
    write_manifest(records, (std::filesystem::path(out_dir) / "manifest.csv").string());
    return records;
}

}  // namespace negsym
