// negsym: global rotational/reflectional symmetry detection in greyscale
// images via negentropy comparison, plus a synthetic ground-truth dataset
// generator and an evaluation harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "negsym/detector.hpp"
#include "negsym/harness.hpp"
#include "negsym/image_io.hpp"
#include "negsym/synthetic.hpp"

namespace {

void add_config_flags(CLI::App* cmd, negsym::DetectorConfig& cfg) {
    cmd->add_option("--kmax", cfg.k_max, "largest candidate order of symmetry");
    cmd->add_option("--delta", cfg.delta, "relative error threshold");
    cmd->add_option("--angle-step", cfg.angle_step, "degrees between reflectional samples");
    cmd->add_option("--size", cfg.working_size, "working resolution in pixels");
}

void write_curves_csv(const negsym::SymmetryResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw negsym::Error(negsym::Errc::io_error, "cannot write " + path);
    out << "index_or_angle,j\n";
    out << "# rotational (index = order K)\n";
    for (int k = 1; k <= result.rotational.k_max(); ++k) out << k << "," << result.rotational.at_order(k) << "\n";
    out << "# reflectional (angle in degrees)\n";
    for (int i = 0; i < result.reflectional.count(); ++i)
        out << result.reflectional.angle_of(i) << "," << result.reflectional.values[static_cast<std::size_t>(i)]
            << "\n";
}

int run_detect(const std::string& image_path, const negsym::DetectorConfig& cfg, const std::string& curves_path) {
    const negsym::GreyImage img = negsym::resize(negsym::load_image(image_path), cfg.working_size);
    const negsym::SymmetryResult result = negsym::detect(img, cfg);
    if (!curves_path.empty()) write_curves_csv(result, curves_path);
    std::cout << negsym::result_to_json(result, cfg).dump(2) << "\n";
    return 0;
}

int run_evaluate(const std::string& images_dir, const std::string& truth_csv, const negsym::DetectorConfig& cfg,
                 const std::string& report_path) {
    const auto records = negsym::read_manifest(truth_csv);
    const negsym::EvaluationReport report = negsym::evaluate(images_dir, records, cfg);
    const std::string text = negsym::report_to_json(report).dump(2) + "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw negsym::Error(negsym::Errc::io_error, "cannot write " + report_path);
        out << text;
    }
    std::cout << text;
    return 0;
}

struct GenerateOptions {
    std::string out_dir;
    int per_class = 10;
    std::uint64_t seed = 0;
    int size = 256;
    bool single = false;
    std::string type = "reflection";
    int order = 1;
    std::optional<double> tilt;
};

int run_generate(const GenerateOptions& opt) {
    std::vector<negsym::GroundTruthRecord> records;
    if (opt.single) {
        negsym::SymmetrySpec spec;
        spec.type = negsym::parse_manifest_type(opt.type);
        spec.order = opt.order;
        spec.seed = opt.seed;
        spec.size = opt.size;
        if (spec.type == negsym::SymmetryType::reflectional) {
            negsym::SplitMix64 rng(opt.seed);
            spec.tilt_deg = opt.tilt ? negsym::normalize_tilt_deg(*opt.tilt) : rng.uniform(0.0, 180.0);
        }

        std::error_code ec;
        std::filesystem::create_directories(opt.out_dir, ec);
        if (ec) throw negsym::Error(negsym::Errc::io_error, "cannot create " + opt.out_dir);
        const char* prefix = spec.type == negsym::SymmetryType::reflectional
                                 ? "refl"
                                 : (spec.type == negsym::SymmetryType::rotational ? "rot" : "none");
        char name[64];
        std::snprintf(name, sizeof(name), "%s_o%d_000.pgm", prefix, spec.order);
        negsym::write_pgm(negsym::generate(spec), (std::filesystem::path(opt.out_dir) / name).string());

        negsym::GroundTruthRecord rec;
        rec.filename = name;
        rec.type = spec.type;
        rec.order = spec.type == negsym::SymmetryType::none ? 1 : spec.order;
        if (spec.type == negsym::SymmetryType::reflectional) rec.tilt_deg = spec.tilt_deg;
        records.push_back(rec);
        negsym::write_manifest(records, (std::filesystem::path(opt.out_dir) / "manifest.csv").string());
    } else {
        records = negsym::generate_dataset(opt.per_class, opt.seed, opt.out_dir, opt.size);
    }
    nlohmann::json summary{{"images", records.size()},
                           {"manifest", (std::filesystem::path(opt.out_dir) / "manifest.csv").string()}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"negentropy-based planar symmetry detector"};
    app.require_subcommand(1);

    negsym::DetectorConfig cfg;

    auto* detect_cmd = app.add_subcommand("detect", "detect symmetry in one image, JSON on stdout");
    std::string image_path, curves_path;
    detect_cmd->add_option("image", image_path, "input image (PGM or PNG)")->required();
    add_config_flags(detect_cmd, cfg);
    detect_cmd->add_option("--curves", curves_path, "write both negentropy curves as CSV");

    auto* eval_cmd = app.add_subcommand("evaluate", "score a dataset against its ground-truth manifest");
    std::string images_dir, truth_csv, report_path;
    eval_cmd->add_option("--images", images_dir, "directory with the images")->required();
    eval_cmd->add_option("--truth", truth_csv, "ground-truth manifest CSV")->required();
    eval_cmd->add_option("--report", report_path, "also write the JSON report to this file");
    add_config_flags(eval_cmd, cfg);

    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic ground-truth dataset");
    GenerateOptions gen;
    gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();
    gen_cmd->add_option("--per-class", gen.per_class, "images per symmetry class");
    gen_cmd->add_option("--seed", gen.seed, "master seed");
    gen_cmd->add_option("--size", gen.size, "image side in pixels");
    gen_cmd->add_flag("--single", gen.single, "generate one image instead of the full class grid");
    gen_cmd->add_option("--type", gen.type, "single-image type: reflection|rotation|none");
    gen_cmd->add_option("--order", gen.order, "single-image order of symmetry");
    gen_cmd->add_option("--tilt", gen.tilt, "single-image axis tilt in degrees (reflection)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (detect_cmd->parsed()) return run_detect(image_path, cfg, curves_path);
        if (eval_cmd->parsed()) return run_evaluate(images_dir, truth_csv, cfg, report_path);
        if (gen_cmd->parsed()) return run_generate(gen);
    } catch (const negsym::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
