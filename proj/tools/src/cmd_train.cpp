#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "diffsim/ml/model.hpp"
#include "diffsim/search/space.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string model;
    std::string features;
    std::string params;
    std::string out;
    std::string split = "train";
};

// Accepts either bare classifier params ({"kind",...} or the params
// object alone) or a full pipeline config ({"extractor","classifier"}),
// so `search --out best.json` feeds straight into train.
ClassifierParams resolve_params(const Options& opt) {
    ClassifierParams params;
    params.kind = opt.model;
    if (opt.params.empty())
        return params;

    std::ifstream in(opt.params);
    if (!in)
        throw std::runtime_error("cannot open params: " + opt.params);
    std::stringstream ss;
    ss << in.rdbuf();
    auto j = nlohmann::json::parse(ss.str());
    if (j.contains("classifier"))
        j = j.at("classifier");
    if (!j.contains("kind"))
        j = nlohmann::json{{"kind", opt.model}, {opt.model, j}};
    params = classifier_params_from_json(j.dump());
    if (params.kind != opt.model)
        throw std::runtime_error("params file is for '" + params.kind +
                                 "' but --model says '" + opt.model + "'");
    return params;
}

void run(const Options& opt) {
    const FeatureTable all = read_feature_csv(opt.features);
    const FeatureTable table = opt.split == "all" ? all : all.filter_split(opt.split);
    if (table.rows() == 0)
        throw std::runtime_error("no rows with split '" + opt.split + "' in " +
                                 opt.features);

    const TrainedModel model = train_classifier(table, resolve_params(opt));
    save_model(opt.out, model);
    std::cout << "trained " << model.kind << " on " << table.rows() << " rows, "
              << model.classes.size() << " classes -> " << opt.out << '\n';
}

} // namespace

void setup_train(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand("train", "Fit a classifier on a feature CSV");
    cmd->add_option("--model", opt->model, "Classifier kind")
        ->required()
        ->check(CLI::IsMember({"rf", "svm"}));
    cmd->add_option("--features", opt->features, "Feature CSV from `features`")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--params", opt->params,
                    "Hyperparameters JSON (classifier params or pipeline config)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt->out, "Output model file")->required();
    cmd->add_option("--split", opt->split,
                    "Row subset to fit on: train/val/test/all");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
