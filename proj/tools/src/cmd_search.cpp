#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "commands.hpp"
#include "diffsim/dataset.hpp"
#include "diffsim/features/extractor.hpp"
#include "diffsim/search/search.hpp"
#include "diffsim/search/space.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string classifier;
    int iters = 24;
    std::uint64_t seed = 1;
    std::string dataset;
    std::string out;
    std::string trial_log;
    std::string mode = "random";
    int eta = 3;
    double max_budget = 1.0;
    double initial_budget = 0.0;
    int workers = 1;
    int threads = 0;
    std::vector<std::string> extractors{"glcm", "lbp"};
    std::string train_split = "train";
    std::string val_split = "val";
};

// Per-class head of the training rows: the first ceil(frac * n_c) rows
// of each class in row order, so a growing budget only ever adds rows.
FeatureTable stratified_head(const FeatureTable& t, double frac) {
    std::map<std::string, std::size_t> count, want, taken;
    for (const auto& l : t.labels)
        ++count[l];
    for (const auto& [label, n] : count)
        want[label] = static_cast<std::size_t>(
            std::min<double>(static_cast<double>(n), std::ceil(frac * static_cast<double>(n))));
    FeatureTable out;
    out.feature_names = t.feature_names;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (taken[t.labels[i]] >= want[t.labels[i]])
            continue;
        ++taken[t.labels[i]];
        out.x.push_back(t.x[i]);
        out.labels.push_back(t.labels[i]);
        out.splits.push_back(t.splits[i]);
    }
    return out;
}

// Scores a pipeline config: extract features (cached per extractor
// schema), fit on a budget-sized slice of the train split, return
// accuracy on the validation split.
class DatasetObjective {
public:
    DatasetObjective(std::string dir, std::vector<ManifestEntry> entries,
                     int threads, std::string train_split, std::string val_split)
        : dir_(std::move(dir)), entries_(std::move(entries)), threads_(threads),
          train_split_(std::move(train_split)), val_split_(std::move(val_split)) {}

    double operator()(const PipelineConfig& cfg, double budget) {
        const auto table = features_for(cfg.extractor);
        const FeatureTable train = table->filter_split(train_split_);
        const FeatureTable val = table->filter_split(val_split_);
        if (train.rows() == 0)
            throw std::runtime_error("no '" + train_split_ + "' rows in dataset");
        if (val.rows() == 0)
            throw std::runtime_error("no '" + val_split_ + "' rows in dataset");

        const FeatureTable fit = budget < 1.0 ? stratified_head(train, budget) : train;
        const TrainedModel model = train_classifier(fit, cfg.classifier);
        const auto pred = model.predict_table(val);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == val.labels[i])
                ++correct;
        return static_cast<double>(correct) / static_cast<double>(pred.size());
    }

private:
    std::shared_ptr<const FeatureTable> features_for(const ExtractorConfig& e) {
        const std::string key = e.schema_id();
        std::lock_guard lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        auto table = std::make_shared<FeatureTable>(
            extract_dataset_features(dir_, entries_, e, threads_));
        cache_.emplace(key, table);
        return table;
    }

    std::string dir_;
    std::vector<ManifestEntry> entries_;
    int threads_;
    std::string train_split_, val_split_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const FeatureTable>> cache_;
};

void run(const Options& opt) {
    PipelineSpace space;
    space.classifier_kind = opt.classifier;
    space.allow_glcm = std::find(opt.extractors.begin(), opt.extractors.end(),
                                 "glcm") != opt.extractors.end();
    space.allow_lbp = std::find(opt.extractors.begin(), opt.extractors.end(),
                                "lbp") != opt.extractors.end();
    if (!space.allow_glcm && !space.allow_lbp)
        throw std::runtime_error("--extractors must include glcm and/or lbp");

    const auto entries = read_manifest(opt.dataset + "/manifest.jsonl");
    DatasetObjective objective(opt.dataset, entries, resolve_threads(opt.threads),
                               opt.train_split, opt.val_split);

    SearchOutcome<PipelineConfig> outcome;
    if (opt.mode == "random") {
        outcome = random_search(
            space,
            [&](const PipelineConfig& c) { return objective(c, opt.max_budget); },
            opt.iters, opt.seed, opt.workers);
    } else {
        HalvingSchedule schedule;
        schedule.max_budget = opt.max_budget;
        schedule.eta = opt.eta;
        schedule.n_initial = opt.iters;
        schedule.initial_budget = opt.initial_budget;
        outcome = successive_halving(space, objective, schedule, opt.seed,
                                     opt.workers);
    }

    if (!opt.trial_log.empty())
        write_trial_log(opt.trial_log, outcome.trials);

    std::size_t failures = 0;
    for (const auto& t : outcome.trials)
        if (!t.ok)
            ++failures;
    std::cout << "trials: " << outcome.trials.size() << " (" << failures
              << " failed)\n";
    if (outcome.best < 0)
        throw std::runtime_error("every trial failed");
    const auto& best = outcome.trials[static_cast<std::size_t>(outcome.best)];
    std::cout << "best: trial " << best.index << ", score " << best.score
              << " at budget " << best.budget << '\n';
    const std::string best_json = pipeline_config_to_json(best.config);
    std::cout << best_json << '\n';
    if (!opt.out.empty()) {
        std::ofstream out(opt.out);
        if (!out)
            throw std::runtime_error("cannot write best config: " + opt.out);
        out << best_json << '\n';
    }
}

} // namespace

void setup_search(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "search", "Hyperparameter search (random or successive halving) over a dataset");
    cmd->add_option("--classifier", opt->classifier, "Classifier kind to tune")
        ->required()
        ->check(CLI::IsMember({"rf", "svm"}));
    cmd->add_option("--iters", opt->iters,
                    "Random-search trials / halving initial configurations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt->seed, "Sampler seed");
    cmd->add_option("--dataset", opt->dataset, "Dataset directory from `generate`")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--out", opt->out, "Write the best pipeline config JSON here");
    cmd->add_option("--trial-log", opt->trial_log, "Write one JSON line per trial");
    cmd->add_option("--mode", opt->mode, "Sampling strategy")
        ->check(CLI::IsMember({"random", "halving"}));
    cmd->add_option("--eta", opt->eta, "Halving keep ratio (keep 1/eta per round)")
        ->check(CLI::Range(2, 1000));
    cmd->add_option("--max-budget", opt->max_budget,
                    "Training-subset fraction at full budget");
    cmd->add_option("--initial-budget", opt->initial_budget,
                    "First-round budget (0 = derived from eta and iters)");
    cmd->add_option("--workers", opt->workers, "Concurrent trials")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opt->threads,
                    "Feature-extraction threads (0 = all cores)");
    cmd->add_option("--extractors", opt->extractors, "Feature families to search")
        ->delimiter(',')
        ->check(CLI::IsMember({"glcm", "lbp"}));
    cmd->add_option("--train-split", opt->train_split, "Split used for fitting");
    cmd->add_option("--val-split", opt->val_split, "Split used for scoring");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
