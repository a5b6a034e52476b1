#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "negsym/image.hpp"
#include "negsym/negentropy.hpp"
#include "negsym/parallel.hpp"
#include "negsym/transforms.hpp"

namespace negsym {

struct DetectorConfig {
    int k_max = 9;                  // largest candidate order of symmetry
    double delta = 0.05;            // relative error threshold
    double angle_step = 1.0;        // degrees between reflectional samples; must divide 180
    int working_size = 256;         // preprocessing resolution
    double baseline_floor = 1e-6;   // below this baseline negentropy the image is near-Gaussian

    // The single delta serves several distinct tests; these optional knobs
    // override it per test when set.
    std::optional<double> delta_orders;
    std::optional<double> delta_periodicity;
    std::optional<double> delta_extrema;
    std::optional<double> delta_tilt;

    double order_delta() const { return delta_orders.value_or(delta); }
    double periodicity_delta() const { return delta_periodicity.value_or(delta); }
    double extrema_delta() const { return delta_extrema.value_or(delta); }
    double tilt_delta() const { return delta_tilt.value_or(delta); }

    int angle_count() const { return static_cast<int>(std::lround(180.0 / angle_step)); }

    void validate() const {
        if (k_max < 2 || k_max > 36) throw Error(Errc::invalid_config, "k_max must be in [2,36]");
        if (!(delta > 0.0 && delta < 1.0) && delta != 0.0)
            throw Error(Errc::invalid_config, "delta must be in [0,1)");
        if (!(angle_step > 0.0)) throw Error(Errc::invalid_config, "angle_step must be positive");
        const double m = 180.0 / angle_step;
        if (std::abs(m - std::round(m)) > 1e-9)
            throw Error(Errc::invalid_config, "angle_step must divide 180 exactly");
        if (std::lround(m) < 8) throw Error(Errc::invalid_config, "angle_step leaves fewer than 8 samples");
        if (working_size < kMinImageSize) throw Error(Errc::invalid_config, "working_size below minimum");
        if (!(baseline_floor > 0.0)) throw Error(Errc::invalid_config, "baseline_floor must be positive");
    }
};

// J_Rot(I,K) for K = 1..k_max; the entry at K = 1 is the baseline negentropy.
struct RotationalCurve {
    std::vector<double> values;

    int k_max() const noexcept { return static_cast<int>(values.size()); }
    double at_order(int k) const { return values[static_cast<std::size_t>(k) - 1]; }
    double baseline() const { return values.front(); }
};

// J_Ref(I, theta) sampled at theta = i * angle_step for i = 0..180/step-1.
// The domain is circular with period 180 degrees.
struct ReflectionalCurve {
    std::vector<double> values;
    double angle_step = 1.0;

    int count() const noexcept { return static_cast<int>(values.size()); }
    double angle_of(int index) const { return index * angle_step; }
};

enum class SymmetryType { none, rotational, reflectional };

inline const char* to_string(SymmetryType t) {
    switch (t) {
        case SymmetryType::rotational: return "rotational";
        case SymmetryType::reflectional: return "reflectional";
        default: return "none";
    }
}

struct SymmetryResult {
    int order = 1;
    SymmetryType type = SymmetryType::none;
    std::optional<double> tilt_deg;     // tilt of one reflection axis, in [0,180)
    std::vector<double> tilt_axes;      // all detected axes, ascending
    RotationalCurve rotational;
    ReflectionalCurve reflectional;

    double baseline() const { return rotational.baseline(); }
};

// Negentropy of the image averaged with its copy rotated by 360/K, for each
// candidate order K. K = 1 is the identity rotation, so the first entry is
// the negentropy of the image itself.
inline RotationalCurve rotational_negentropy(const GreyImage& img, const DetectorConfig& cfg) {
    const DiskMask mask(img.size());
    RotationalCurve curve;
    curve.values.assign(static_cast<std::size_t>(cfg.k_max), 0.0);
    curve.values[0] = negentropy(standardize(img, mask));
    for (int k = 2; k <= cfg.k_max; ++k) {
        const GreyImage averaged = average(img, rotate(img, 360.0 / k));
        curve.values[static_cast<std::size_t>(k) - 1] = negentropy(standardize(averaged, mask));
    }
    return curve;
}

// Negentropy of the image averaged with its reflected copy, swept over the
// axis tilt. Angles are independent; each slot is filled by exactly one
// worker so the curve is bitwise reproducible at any thread count.
inline ReflectionalCurve reflectional_negentropy(const GreyImage& img, const DetectorConfig& cfg) {
    const DiskMask mask(img.size());
    ReflectionalCurve curve;
    curve.angle_step = cfg.angle_step;
    curve.values.assign(static_cast<std::size_t>(cfg.angle_count()), 0.0);
    parallel_for(curve.count(), [&](int i) {
        const GreyImage averaged = average(img, reflect(img, i * cfg.angle_step));
        curve.values[static_cast<std::size_t>(i)] = negentropy(standardize(averaged, mask));
    });
    return curve;
}

// Orders whose rotational negentropy stays within the relative tolerance
// around the baseline. Order 1 always qualifies. Ascending.
inline std::vector<int> candidate_orders(const RotationalCurve& curve, const DetectorConfig& cfg) {
    const double baseline = curve.baseline();
    if (baseline < cfg.baseline_floor)
        throw Error(Errc::near_gaussian_image,
                    "baseline negentropy below floor; relative tests are ill-conditioned");
    std::vector<int> orders{1};
    for (int k = 2; k <= curve.k_max(); ++k) {
        if (std::abs(curve.at_order(k) - baseline) / baseline <= cfg.order_delta()) orders.push_back(k);
    }
    return orders;
}

// Periodicity test: an image of rotational order K has a reflectional
// negentropy with period 180/K. Compares the curve against its circular
// shift by 180/(K * angle_step) samples, interpolating fractional lags, and
// accepts when the mean absolute deviation relative to the baseline is
// within tolerance. Order 1 is vacuously periodic (the period is the domain).
inline bool is_periodic(const ReflectionalCurve& curve, int order, double baseline, const DetectorConfig& cfg) {
    if (order <= 1) return true;
    const int m = curve.count();
    const double lag = static_cast<double>(m) / order;
    const int whole = static_cast<int>(lag);
    const double frac = lag - whole;
    double dev = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = curve.values[static_cast<std::size_t>((i + whole) % m)];
        const double b = curve.values[static_cast<std::size_t>((i + whole + 1) % m)];
        const double shifted = (1.0 - frac) * a + frac * b;
        dev += std::abs(curve.values[static_cast<std::size_t>(i)] - shifted);
    }
    dev /= m;
    return dev / baseline <= cfg.periodicity_delta();
}

namespace detail {

// Local extrema of a circular sequence with plateau handling: a maximal run
// of equal values is an extremum when both neighbouring runs lie on the same
// side; it contributes its centre index, ties broken toward the lower index.
inline std::vector<int> circular_extrema(std::span<const double> v) {
    const int m = static_cast<int>(v.size());
    std::vector<int> starts;  // run start indices, ascending
    for (int i = 0; i < m; ++i) {
        if (v[static_cast<std::size_t>(i)] != v[static_cast<std::size_t>((i + m - 1) % m)]) starts.push_back(i);
    }
    if (starts.empty()) return {};  // perfectly flat curve

    const int runs = static_cast<int>(starts.size());
    std::vector<int> extrema;
    for (int r = 0; r < runs; ++r) {
        const int start = starts[static_cast<std::size_t>(r)];
        const int next_start = starts[static_cast<std::size_t>((r + 1) % runs)];
        const int len = (next_start - start + m) % m == 0 ? m : (next_start - start + m) % m;
        const double value = v[static_cast<std::size_t>(start)];
        const double prev = v[static_cast<std::size_t>((start + m - 1) % m)];
        const double next = v[static_cast<std::size_t>(next_start)];
        const bool is_max = prev < value && next < value;
        const bool is_min = prev > value && next > value;
        if (!is_max && !is_min) continue;
        extrema.push_back((start + (len - 1) / 2) % m);
    }
    std::sort(extrema.begin(), extrema.end());
    return extrema;
}

}  // namespace detail

// Indices of curve extrema whose value lies within the relative tolerance
// around the baseline; only those are eligible reflection-axis candidates.
inline std::vector<int> find_extrema(const ReflectionalCurve& curve, double baseline, const DetectorConfig& cfg) {
    std::vector<int> eligible;
    for (int e : detail::circular_extrema(curve.values)) {
        if (std::abs(curve.values[static_cast<std::size_t>(e)] - baseline) / baseline <= cfg.extrema_delta())
            eligible.push_back(e);
    }
    return eligible;
}

// Tilt-angle retrieval. Each eligible extremum is scored by centring the
// curve on it, averaging with the mirrored copy, and taking the relative
// error between the negentropy of the curve and of the symmetrized curve.
// The mirror is the circular point reflection about the extremum: it keeps
// the extremum fixed, which is what the shift-to-centre-and-flip construction
// achieves on odd-length vectors; a plain flip of an even-length vector would
// misalign every pair by one sample. The extremum with the smallest error
// wins if that error is within tolerance; otherwise there is no reflection
// axis. A zero-variance curve anywhere in the scoring counts as a perfect
// (error 0) symmetry.
inline std::optional<double> neg_tilt_angle(const ReflectionalCurve& curve, const std::vector<int>& extrema,
                                            const DetectorConfig& cfg) {
    if (extrema.empty()) return std::nullopt;
    const int m = curve.count();

    double j_curve = 0.0;
    bool curve_flat = false;
    try {
        j_curve = curve_negentropy(curve.values);
    } catch (const Error& e) {
        if (e.code() != Errc::zero_variance_curve) throw;
        curve_flat = true;
    }
    if (!curve_flat && !(j_curve > 0.0)) curve_flat = true;

    int best = -1;
    double best_error = 0.0;
    std::vector<double> symmetrized(static_cast<std::size_t>(m));
    for (int e : extrema) {
        double error = 0.0;
        if (!curve_flat) {
            for (int i = 0; i < m; ++i) {
                const int mirrored = ((2 * e - i) % m + m) % m;
                symmetrized[static_cast<std::size_t>(i)] =
                    (curve.values[static_cast<std::size_t>(i)] + curve.values[static_cast<std::size_t>(mirrored)]) /
                    2.0;
            }
            try {
                error = std::abs(j_curve - curve_negentropy(symmetrized)) / j_curve;
            } catch (const Error& err) {
                if (err.code() != Errc::zero_variance_curve) throw;
                error = 0.0;
            }
        }
        if (best < 0 || error < best_error) {
            best = e;
            best_error = error;
        }
    }
    if (best_error <= cfg.tilt_delta()) return best * curve.angle_step;
    return std::nullopt;
}

namespace detail {

inline std::vector<double> reflection_axes(double tilt_deg, int order) {
    std::vector<double> axes;
    axes.reserve(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) axes.push_back(normalize_tilt_deg(tilt_deg + k * 180.0 / order));
    std::sort(axes.begin(), axes.end());
    return axes;
}

}  // namespace detail

// Full detection pipeline: compute both curves, walk the candidate orders
// from largest to smallest until one passes the periodicity test, then try to
// retrieve a tilt angle. A found tilt means reflectional symmetry of that
// order; a periodic order >= 2 without a tilt means rotational symmetry; an
// image invariant only to the full-angle rotation is not considered symmetric.
inline SymmetryResult detect(const GreyImage& img, const DetectorConfig& cfg) {
    cfg.validate();
    SymmetryResult result;
    result.rotational = rotational_negentropy(img, cfg);
    const std::vector<int> orders = candidate_orders(result.rotational, cfg);
    result.reflectional = reflectional_negentropy(img, cfg);
    const double baseline = result.rotational.baseline();

    int order = 1;
    for (auto it = orders.rbegin(); it != orders.rend(); ++it) {
        if (is_periodic(result.reflectional, *it, baseline, cfg)) {
            order = *it;
            break;
        }
    }

    const std::vector<int> extrema = find_extrema(result.reflectional, baseline, cfg);
    const std::optional<double> tilt = neg_tilt_angle(result.reflectional, extrema, cfg);

    if (tilt.has_value()) {
        result.order = order;
        result.type = SymmetryType::reflectional;
        result.tilt_deg = tilt;
        result.tilt_axes = detail::reflection_axes(*tilt, order);
    } else if (order >= 2) {
        result.order = order;
        result.type = SymmetryType::rotational;
    } else {
        result.order = 1;
        result.type = SymmetryType::none;
    }
    return result;
}

}  // namespace negsym
