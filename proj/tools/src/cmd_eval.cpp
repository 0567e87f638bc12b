#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>

#include "commands.hpp"
#include "diffsim/eval.hpp"
#include "diffsim/ml/model.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string model;
    std::string features;
    std::string report;
    std::string split = "test";
};

void run(const Options& opt) {
    const TrainedModel model = load_model(opt.model);
    const FeatureTable all = read_feature_csv(opt.features);
    const FeatureTable table = opt.split == "all" ? all : all.filter_split(opt.split);
    if (table.rows() == 0)
        throw std::runtime_error("no rows with split '" + opt.split + "' in " +
                                 opt.features);

    const auto pred = model.predict_table(table);
    const Evaluation ev = evaluate(table.labels, pred, model.classes);

    // Binary collapse only makes sense when a negative class can occur.
    const std::vector<std::string> negatives{"blank", "no-crystal"};
    const bool has_negative = std::any_of(
        negatives.begin(), negatives.end(), [&](const std::string& n) {
            return std::find(model.classes.begin(), model.classes.end(), n) !=
                   model.classes.end();
        });
    const auto binary =
        has_negative ? binary_collapse(ev.matrix, negatives) : std::nullopt;

    std::ofstream out(opt.report);
    if (!out)
        throw std::runtime_error("cannot write report: " + opt.report);
    out << evaluation_report_json(ev, binary) << '\n';

    std::cout << std::fixed << std::setprecision(2);
    std::cout << "rows: " << table.rows() << '\n';
    if (ev.accuracy)
        std::cout << "accuracy: " << 100.0 * *ev.accuracy << "%\n";
    if (binary)
        std::cout << "binary accuracy: " << 100.0 * *binary << "%\n";
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        std::cout << "  " << model.classes[c] << ": recall ";
        if (ev.per_class[c].recall)
            std::cout << 100.0 * *ev.per_class[c].recall << '%';
        else
            std::cout << "n/a";
        std::cout << ", precision ";
        if (ev.per_class[c].precision)
            std::cout << 100.0 * *ev.per_class[c].precision << '%';
        else
            std::cout << "n/a";
        std::cout << '\n';
    }
    std::cout << "report: " << opt.report << '\n';
}

} // namespace

void setup_eval(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "eval", "Score a trained model on a feature CSV and write a JSON report");
    cmd->add_option("--model", opt->model, "Model file from `train`")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--features", opt->features, "Feature CSV from `features`")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--report", opt->report, "Output report JSON")->required();
    cmd->add_option("--split", opt->split, "Row subset to score: train/val/test/all");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
