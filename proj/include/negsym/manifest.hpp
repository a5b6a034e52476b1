#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "negsym/detector.hpp"

namespace negsym {

// One row of the ground-truth manifest: `filename,type,order,tilt_deg` with
// type in {reflection,rotation,none} and tilt_deg empty for non-reflectional
// rows.
struct GroundTruthRecord {
    std::string filename;
    SymmetryType type = SymmetryType::none;
    int order = 1;
    std::optional<double> tilt_deg;
};

inline const char* manifest_type_name(SymmetryType t) {
    switch (t) {
        case SymmetryType::reflectional: return "reflection";
        case SymmetryType::rotational: return "rotation";
        default: return "none";
    }
}

inline SymmetryType parse_manifest_type(const std::string& s) {
    if (s == "reflection") return SymmetryType::reflectional;
    if (s == "rotation") return SymmetryType::rotational;
    if (s == "none") return SymmetryType::none;
    throw Error(Errc::malformed_manifest, "unknown symmetry type '" + s + "'");
}

inline void write_manifest(const std::vector<GroundTruthRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << "filename,type,order,tilt_deg\n";
    for (const auto& rec : records) {
        out << rec.filename << "," << manifest_type_name(rec.type) << "," << rec.order << ",";
        if (rec.tilt_deg.has_value()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", *rec.tilt_deg);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw Error(Errc::io_error, "short write to " + path);
}

inline std::vector<GroundTruthRecord> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::file_not_found, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::malformed_manifest, path + ": empty manifest");
    if (line.ends_with("\r")) line.pop_back();
    if (line != "filename,type,order,tilt_deg")
        throw Error(Errc::malformed_manifest, path + ": unexpected header '" + line + "'");

    std::vector<GroundTruthRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with("\r")) line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (line.ends_with(",")) fields.push_back("");
        if (fields.size() != 4)
            throw Error(Errc::malformed_manifest, path + ":" + std::to_string(line_no) + ": expected 4 fields");
        GroundTruthRecord rec;
        rec.filename = fields[0];
        rec.type = parse_manifest_type(fields[1]);
        try {
            std::size_t used = 0;
            rec.order = std::stoi(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw Error(Errc::malformed_manifest, path + ":" + std::to_string(line_no) + ": bad order field");
        }
        if (rec.order < 1)
            throw Error(Errc::malformed_manifest, path + ":" + std::to_string(line_no) + ": order must be >= 1");
        if (!fields[3].empty()) {
            try {
                std::size_t used = 0;
                rec.tilt_deg = std::stod(fields[3], &used);
                if (used != fields[3].size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw Error(Errc::malformed_manifest, path + ":" + std::to_string(line_no) + ": bad tilt field");
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace negsym
