#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "negsym/detector.hpp"
#include "negsym/image_io.hpp"
#include "negsym/manifest.hpp"
#include "negsym/parallel.hpp"

namespace negsym {

// Reflection axes at 0 and 180 degrees are the same line.
inline double circular_tilt_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

// Distance from a detected tilt to the nearest ground-truth axis. Any member
// of the axis set theta0 + k*180/order is an equally correct detection.
inline double tilt_distance_to_axes(double detected, double truth_tilt, int truth_order) {
    double best = circular_tilt_distance(detected, truth_tilt);
    for (int k = 1; k < truth_order; ++k)
        best = std::min(best, circular_tilt_distance(detected, truth_tilt + k * 180.0 / truth_order));
    return best;
}

struct ImageVerdict {
    GroundTruthRecord truth;
    int detected_order = 0;
    SymmetryType detected_type = SymmetryType::none;
    std::optional<double> detected_tilt;
    std::string error;  // non-empty when detection failed on this image

    bool order_hit = false;
    bool type_hit = false;
    std::optional<double> tilt_distance;
    bool tilt_exact = false;
    bool tilt_strict = false;
    bool tilt_lenient = false;
};

struct EvaluationReport {
    DetectorConfig config;
    std::vector<ImageVerdict> verdicts;  // sorted by filename

    std::size_t image_count = 0;
    std::size_t reflectional_truth_count = 0;
    double order_rate = 0.0;
    double type_rate = 0.0;
    double tilt_exact_rate = 0.0;
    double tilt_strict_rate = 0.0;
    double tilt_lenient_rate = 0.0;
};

namespace detail {

inline void score_verdict(ImageVerdict& v, const DetectorConfig& cfg) {
    if (!v.error.empty()) return;
    v.order_hit = v.detected_order == v.truth.order;
    v.type_hit = v.detected_type == v.truth.type;
    if (v.truth.type == SymmetryType::reflectional && v.truth.tilt_deg.has_value() && v.detected_tilt.has_value()) {
        const double d = tilt_distance_to_axes(*v.detected_tilt, *v.truth.tilt_deg, v.truth.order);
        v.tilt_distance = d;
        v.tilt_exact = d < cfg.angle_step / 2.0;  // on-grid agreement
        v.tilt_strict = d <= 2.0;
        v.tilt_lenient = d <= 10.0;
    }
}

inline void aggregate(EvaluationReport& report) {
    std::size_t order_hits = 0, type_hits = 0;
    std::size_t refl = 0, exact = 0, strict = 0, lenient = 0;
    for (const auto& v : report.verdicts) {
        order_hits += v.order_hit ? 1 : 0;
        type_hits += v.type_hit ? 1 : 0;
        if (v.truth.type == SymmetryType::reflectional) {
            ++refl;
            exact += v.tilt_exact ? 1 : 0;
            strict += v.tilt_strict ? 1 : 0;
            lenient += v.tilt_lenient ? 1 : 0;
        }
    }
    report.image_count = report.verdicts.size();
    report.reflectional_truth_count = refl;
    const double n = static_cast<double>(std::max<std::size_t>(report.image_count, 1));
    report.order_rate = static_cast<double>(order_hits) / n;
    report.type_rate = static_cast<double>(type_hits) / n;
    const double r = static_cast<double>(std::max<std::size_t>(refl, 1));
    report.tilt_exact_rate = static_cast<double>(exact) / r;
    report.tilt_strict_rate = static_cast<double>(strict) / r;
    report.tilt_lenient_rate = static_cast<double>(lenient) / r;
}

}  // namespace detail

// Runs the detector on every manifest image and scores it against the ground
// truth. Images are processed by a worker pool; each verdict is filled into
// its own slot and the verdict list is ordered by filename, so the report is
// identical at any worker count.
inline EvaluationReport evaluate(const std::string& images_dir, std::vector<GroundTruthRecord> records,
                                 const DetectorConfig& cfg) {
    cfg.validate();
    std::sort(records.begin(), records.end(),
              [](const GroundTruthRecord& a, const GroundTruthRecord& b) { return a.filename < b.filename; });

    std::vector<std::filesystem::path> paths;
    paths.reserve(records.size());
    for (const auto& rec : records) {
        auto path = std::filesystem::path(images_dir) / rec.filename;
        if (!std::filesystem::exists(path))
            throw Error(Errc::missing_image, "manifest names missing image " + path.string());
        paths.push_back(std::move(path));
    }

    EvaluationReport report;
    report.config = cfg;
    report.verdicts.resize(records.size());
    parallel_for(static_cast<int>(records.size()), [&](int i) {
        ImageVerdict& v = report.verdicts[static_cast<std::size_t>(i)];
        v.truth = records[static_cast<std::size_t>(i)];
        try {
            const GreyImage img = resize(load_image(paths[static_cast<std::size_t>(i)].string()), cfg.working_size);
            const SymmetryResult result = detect(img, cfg);
            v.detected_order = result.order;
            v.detected_type = result.type;
            v.detected_tilt = result.tilt_deg;
        } catch (const Error& e) {
            v.error = e.what();
        }
        detail::score_verdict(v, cfg);
    });
    detail::aggregate(report);
    return report;
}

inline nlohmann::json config_to_json(const DetectorConfig& cfg) {
    nlohmann::json j{{"kmax", cfg.k_max},
                     {"delta", cfg.delta},
                     {"angle_step", cfg.angle_step},
                     {"size", cfg.working_size},
                     {"baseline_floor", cfg.baseline_floor}};
    if (cfg.delta_orders) j["delta_orders"] = *cfg.delta_orders;
    if (cfg.delta_periodicity) j["delta_periodicity"] = *cfg.delta_periodicity;
    if (cfg.delta_extrema) j["delta_extrema"] = *cfg.delta_extrema;
    if (cfg.delta_tilt) j["delta_tilt"] = *cfg.delta_tilt;
    return j;
}

inline nlohmann::json result_to_json(const SymmetryResult& result, const DetectorConfig& cfg) {
    nlohmann::json j;
    j["order"] = result.order;
    j["type"] = to_string(result.type);
    j["tilt_deg"] = result.tilt_deg.has_value() ? nlohmann::json(*result.tilt_deg) : nlohmann::json(nullptr);
    j["tilt_axes"] = result.tilt_axes;
    j["baseline_j"] = result.baseline();
    j["rotational_curve"] = result.rotational.values;
    j["reflectional_curve"] = result.reflectional.values;
    j["config"] = config_to_json(cfg);
    return j;
}

inline nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : report.verdicts) {
        nlohmann::json truth{{"type", manifest_type_name(v.truth.type)}, {"order", v.truth.order}};
        truth["tilt_deg"] = v.truth.tilt_deg.has_value() ? nlohmann::json(*v.truth.tilt_deg) : nlohmann::json(nullptr);
        nlohmann::json entry{{"filename", v.truth.filename}, {"truth", truth}};
        if (!v.error.empty()) {
            entry["error"] = v.error;
        } else {
            entry["detected"] = {{"type", to_string(v.detected_type)},
                                 {"order", v.detected_order},
                                 {"tilt_deg", v.detected_tilt.has_value() ? nlohmann::json(*v.detected_tilt)
                                                                          : nlohmann::json(nullptr)}};
        }
        entry["order_hit"] = v.order_hit;
        entry["type_hit"] = v.type_hit;
        entry["tilt_distance_deg"] =
            v.tilt_distance.has_value() ? nlohmann::json(*v.tilt_distance) : nlohmann::json(nullptr);
        entry["tilt_exact"] = v.tilt_exact;
        entry["tilt_strict"] = v.tilt_strict;
        entry["tilt_lenient"] = v.tilt_lenient;
        verdicts.push_back(std::move(entry));
    }
    return nlohmann::json{{"config", config_to_json(report.config)},
                          {"image_count", report.image_count},
                          {"reflectional_truth_count", report.reflectional_truth_count},
                          {"rates",
                           {{"order", report.order_rate},
                            {"type", report.type_rate},
                            {"tilt_exact", report.tilt_exact_rate},
                            {"tilt_strict", report.tilt_strict_rate},
                            {"tilt_lenient", report.tilt_lenient_rate}}},
                          {"verdicts", verdicts}};
}

}  // namespace negsym
