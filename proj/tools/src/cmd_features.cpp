#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "diffsim/dataset.hpp"
#include "diffsim/features/extractor.hpp"
#include "diffsim/search/space.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string dataset;
    std::string manifest;
    std::string out;
    std::string extractor = "glcm";
    std::vector<int> distances{5};
    std::vector<int> angles{0};
    int levels = 256;
    int points = 24;
    double radius = 3.0;
    std::string pipeline;
    std::string preset;
    int threads = 0;
};

ExtractorConfig resolve_extractor(const Options& opt) {
    if (!opt.pipeline.empty()) {
        std::ifstream in(opt.pipeline);
        if (!in)
            throw std::runtime_error("cannot open pipeline config: " + opt.pipeline);
        std::stringstream ss;
        ss << in.rdbuf();
        return pipeline_config_from_json(ss.str()).extractor;
    }
    if (opt.preset == "rf-glcm")
        return preset_rf_glcm().extractor;
    if (opt.preset == "svm-glcm")
        return preset_svm_glcm().extractor;

    ExtractorConfig cfg;
    if (opt.extractor == "glcm") {
        cfg.kind = ExtractorKind::kGlcm;
        cfg.glcm.distances = opt.distances;
        cfg.glcm.angles_deg = opt.angles;
        cfg.glcm.levels = opt.levels;
    } else {
        cfg.kind = ExtractorKind::kLbp;
        cfg.lbp.points = opt.points;
        cfg.lbp.radius = opt.radius;
    }
    return cfg;
}

void run(const Options& opt) {
    const std::string manifest =
        opt.manifest.empty() ? opt.dataset + "/manifest.jsonl" : opt.manifest;
    const auto entries = read_manifest(manifest);
    const ExtractorConfig extractor = resolve_extractor(opt);

    const auto table = extract_dataset_features(opt.dataset, entries, extractor,
                                                resolve_threads(opt.threads));
    write_feature_csv(opt.out, table);
    std::cout << "wrote " << table.rows() << " rows x "
              << table.feature_names.size() << " features (" << extractor.schema_id()
              << ") to " << opt.out << '\n';
}

} // namespace

void setup_features(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "features", "Extract texture features from a generated dataset into CSV");
    cmd->add_option("--dataset", opt->dataset, "Dataset directory (images + manifest)")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--manifest", opt->manifest,
                    "Manifest path (default <dataset>/manifest.jsonl)");
    cmd->add_option("--out", opt->out, "Output CSV path")->required();
    cmd->add_option("--extractor", opt->extractor, "Feature family")
        ->check(CLI::IsMember({"glcm", "lbp"}));
    cmd->add_option("--distances", opt->distances, "GLCM pixel offsets")
        ->delimiter(',');
    cmd->add_option("--angles", opt->angles, "GLCM directions in degrees")
        ->delimiter(',')
        ->check(CLI::IsMember({0, 45, 90, 135}));
    cmd->add_option("--levels", opt->levels, "GLCM gray levels");
    cmd->add_option("--points", opt->points, "LBP sampling points");
    cmd->add_option("--radius", opt->radius, "LBP radius in pixels");
    cmd->add_option("--pipeline", opt->pipeline,
                    "Pipeline config JSON; its extractor section overrides the flags")
        ->check(CLI::ExistingFile);
    cmd->add_option("--preset", opt->preset, "Shipped extractor preset")
        ->check(CLI::IsMember({"rf-glcm", "svm-glcm"}));
    cmd->add_option("--threads", opt->threads, "Worker threads (0 = all cores)");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
