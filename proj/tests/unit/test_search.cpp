#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffsim/search/search.hpp"
#include "diffsim/search/space.hpp"

using namespace diffsim;

namespace {

struct IntConfig {
    int v = 0;
};

// Minimal space over the integers [lo, hi].
struct IntSpace {
    using Config = IntConfig;
    int lo = 0;
    int hi = 99;

    Config sample(Rng& rng) const {
        return {lo + static_cast<int>(rng.uniform_int(
                         static_cast<std::uint64_t>(hi - lo + 1)))};
    }
    bool contains(const Config& c) const { return c.v >= lo && c.v <= hi; }
};

// Space whose membership test always fails; sampling must be caught.
struct BrokenSpace {
    using Config = IntConfig;
    Config sample(Rng&) const { return {1}; }
    bool contains(const Config&) const { return false; }
};

std::filesystem::path tmp_dir() {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("diffsim_search_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

bool weights_equal(const ClassWeights& a, const ClassWeights& b) {
    return a.mode == b.mode && a.explicit_weights == b.explicit_weights;
}

// Trials of one halving round, in emission order.
template <typename C>
std::vector<Trial<C>> round_trials(const SearchOutcome<C>& out, int round) {
    std::vector<Trial<C>> r;
    for (const auto& t : out.trials)
        if (t.round == round)
            r.push_back(t);
    return r;
}

} // namespace

TEST_CASE("search: random search samples the space and ranks by score") {
    const IntSpace space{0, 9};
    const auto objective = [](const IntConfig& c) {
        return static_cast<double>(c.v);
    };
    const auto out = random_search(space, objective, 50, 7);

    REQUIRE(out.trials.size() == 50);
    for (std::size_t i = 0; i < out.trials.size(); ++i) {
        const auto& t = out.trials[i];
        CHECK(t.index == static_cast<int>(i));
        CHECK(t.sampler == "random");
        CHECK(t.round == -1);
        CHECK(t.budget == 1.0);
        CHECK(t.ok);
        CHECK(space.contains(t.config));
        CHECK(t.score == static_cast<double>(t.config.v));
    }

    // Manual argmax with ties toward the earlier trial.
    std::ptrdiff_t expect = 0;
    for (std::size_t i = 1; i < out.trials.size(); ++i)
        if (out.trials[i].score > out.trials[expect].score)
            expect = static_cast<std::ptrdiff_t>(i);
    CHECK(out.best == expect);
    // 50 draws over 10 values: the global optimum is in the sample.
    CHECK(out.trials[out.best].config.v == 9);

    // Same seed, same draws; the worker count must not matter.
    const auto again = random_search(space, objective, 50, 7, 4);
    REQUIRE(again.trials.size() == out.trials.size());
    for (std::size_t i = 0; i < out.trials.size(); ++i)
        CHECK(again.trials[i].config.v == out.trials[i].config.v);
    CHECK(again.best == out.best);

    const auto other = random_search(space, objective, 50, 8);
    bool any_difference = false;
    for (std::size_t i = 0; i < out.trials.size(); ++i)
        any_difference |= other.trials[i].config.v != out.trials[i].config.v;
    CHECK(any_difference);
}

TEST_CASE("search: objective failures are logged and skipped in the ranking") {
    const IntSpace space{0, 9};
    const auto odd_fails = [](const IntConfig& c) {
        if (c.v % 2 == 1)
            throw std::runtime_error("odd rejected");
        return static_cast<double>(c.v);
    };
    const auto out = random_search(space, odd_fails, 40, 11);
    bool saw_failure = false;
    for (const auto& t : out.trials) {
        if (t.config.v % 2 == 1) {
            CHECK(!t.ok);
            CHECK(t.error == "odd rejected");
            CHECK(t.score == 0.0);
            saw_failure = true;
        } else {
            CHECK(t.ok);
            CHECK(t.error.empty());
        }
    }
    CHECK(saw_failure);
    REQUIRE(out.best >= 0);
    CHECK(out.trials[out.best].ok);
    CHECK(out.trials[out.best].config.v == 8); // best even value

    const auto all_fail = [](const IntConfig&) -> double { throw 42; };
    const auto none = random_search(space, all_fail, 5, 1);
    CHECK(none.best == -1);
    for (const auto& t : none.trials) {
        CHECK(!t.ok);
        CHECK(t.error == "unknown objective failure");
    }
}

TEST_CASE("search: invalid arguments and broken spaces are rejected") {
    const IntSpace space{0, 9};
    const auto objective = [](const IntConfig& c) {
        return static_cast<double>(c.v);
    };
    const auto budgeted = [](const IntConfig& c, double) {
        return static_cast<double>(c.v);
    };

    CHECK_THROWS_AS(random_search(space, objective, 0, 1), std::invalid_argument);

    HalvingSchedule bad;
    bad.eta = 1;
    CHECK_THROWS_AS(successive_halving(space, budgeted, bad, 1),
                    std::invalid_argument);
    bad = HalvingSchedule{};
    bad.n_initial = 0;
    CHECK_THROWS_AS(successive_halving(space, budgeted, bad, 1),
                    std::invalid_argument);
    bad = HalvingSchedule{};
    bad.max_budget = 0.0;
    CHECK_THROWS_AS(successive_halving(space, budgeted, bad, 1),
                    std::invalid_argument);

    const BrokenSpace broken;
    CHECK_THROWS_AS(random_search(broken, objective, 3, 1), std::logic_error);
    CHECK_THROWS_AS(successive_halving(broken, budgeted, HalvingSchedule{}, 1),
                    std::logic_error);
}

TEST_CASE("search: halving runs geometric rounds of 9, 3, 1") {
    const IntSpace space{0, 999};
    const auto objective = [](const IntConfig& c, double) {
        return static_cast<double>(c.v); // budget-independent
    };
    HalvingSchedule schedule; // max 1.0, eta 3, n_initial 9, auto initial

    double b0 = schedule.max_budget;
    b0 /= schedule.eta;
    b0 /= schedule.eta;
    CHECK(schedule.resolve_initial_budget() == b0);

    const auto out = successive_halving(space, objective, schedule, 21);
    REQUIRE(out.trials.size() == 13);

    const auto r0 = round_trials(out, 0);
    const auto r1 = round_trials(out, 1);
    const auto r2 = round_trials(out, 2);
    REQUIRE(r0.size() == 9);
    REQUIRE(r1.size() == 3);
    REQUIRE(r2.size() == 1);
    CHECK(round_trials(out, 3).empty());

    for (const auto& t : r0)
        CHECK(t.budget == b0);
    for (const auto& t : r1)
        CHECK(t.budget == b0 * 3.0);
    CHECK(r2[0].budget == schedule.max_budget); // budgets close at the cap
    for (const auto& t : out.trials) {
        CHECK(t.sampler == "halving");
        CHECK(t.ok);
        CHECK(space.contains(t.config));
    }

    // Survivors are the top scorers of the previous round, ties earlier.
    std::vector<Trial<IntConfig>> ranked = r0;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
    for (std::size_t i = 0; i < r1.size(); ++i)
        CHECK(r1[i].config.v == ranked[i].config.v);
    CHECK(r2[0].config.v == ranked[0].config.v);

    REQUIRE(out.best >= 0);
    CHECK(out.trials[out.best].budget == schedule.max_budget);
    CHECK(out.trials[out.best].config.v == ranked[0].config.v);

    // With a budget-independent objective and the same seed, halving and
    // plain random search over the same nine draws agree on the winner.
    const auto random_out = random_search(
        space,
        [](const IntConfig& c) { return static_cast<double>(c.v); },
        schedule.n_initial, 21);
    REQUIRE(random_out.best >= 0);
    CHECK(random_out.trials[random_out.best].config.v ==
          out.trials[out.best].config.v);
    for (std::size_t i = 0; i < 9; ++i) // same sampling stream
        CHECK(random_out.trials[i].config.v == r0[i].config.v);
}

TEST_CASE("search: halving respects explicit budgets and degenerate shapes") {
    const IntSpace space{0, 999};
    const auto objective = [](const IntConfig& c, double) {
        return static_cast<double>(c.v);
    };

    HalvingSchedule explicit_b;
    explicit_b.max_budget = 50.0;
    explicit_b.eta = 3;
    explicit_b.n_initial = 9;
    explicit_b.initial_budget = 5.0;
    const auto out = successive_halving(space, objective, explicit_b, 4);
    // 5 -> 15 -> 45 -> capped 50: a fourth round re-scores the survivor.
    REQUIRE(out.trials.size() == 14);
    CHECK(round_trials(out, 0).size() == 9);
    CHECK(round_trials(out, 1).size() == 3);
    CHECK(round_trials(out, 2).size() == 1);
    CHECK(round_trials(out, 3).size() == 1);
    CHECK(round_trials(out, 0)[0].budget == 5.0);
    CHECK(round_trials(out, 1)[0].budget == 15.0);
    CHECK(round_trials(out, 2)[0].budget == 45.0);
    CHECK(round_trials(out, 3)[0].budget == 50.0);
    CHECK(out.trials[out.best].budget == 50.0);

    // eta larger than the field: one round at the full budget.
    HalvingSchedule wide;
    wide.eta = 100;
    wide.n_initial = 9;
    const auto one_round = successive_halving(space, objective, wide, 4);
    REQUIRE(one_round.trials.size() == 9);
    for (const auto& t : one_round.trials) {
        CHECK(t.round == 0);
        CHECK(t.budget == wide.max_budget);
    }

    // A single candidate is scored once at the full budget.
    HalvingSchedule single;
    single.n_initial = 1;
    const auto lone = successive_halving(space, objective, single, 4);
    REQUIRE(lone.trials.size() == 1);
    CHECK(lone.trials[0].budget == single.max_budget);
    CHECK(lone.best == 0);
}

TEST_CASE("search: halving drops failed trials before promoting survivors") {
    const IntSpace space{0, 999};
    const auto objective = [](const IntConfig& c, double) {
        return static_cast<double>(c.v);
    };
    HalvingSchedule schedule;
    const auto clean = successive_halving(space, objective, schedule, 33);
    const auto r0 = round_trials(clean, 0);

    // Fail exactly the round-0 winner; the survivors must then be the
    // next three scores down.
    std::vector<Trial<IntConfig>> ranked = r0;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
    const int poisoned = ranked[0].config.v;
    const auto poisoned_objective = [&](const IntConfig& c, double) {
        if (c.v == poisoned)
            throw std::runtime_error("poisoned");
        return static_cast<double>(c.v);
    };
    const auto out = successive_halving(space, poisoned_objective, schedule, 33);
    const auto r1 = round_trials(out, 1);
    REQUIRE(r1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(r1[i].config.v == ranked[i + 1].config.v);
    REQUIRE(out.best >= 0);
    CHECK(out.trials[out.best].ok);
    CHECK(out.trials[out.best].config.v == ranked[1].config.v);

    int failures = 0;
    for (const auto& t : round_trials(out, 0))
        if (!t.ok) {
            CHECK(t.error == "poisoned");
            ++failures;
        }
    CHECK(failures == 1);
}

TEST_CASE("search: pipeline space samples stay inside the space") {
    PipelineSpace rf_space;
    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        const PipelineConfig cfg = rf_space.sample(rng);
        CHECK(rf_space.contains(cfg));
        CHECK(cfg.classifier.kind == "rf");
    }

    PipelineSpace svm_space;
    svm_space.classifier_kind = "svm";
    bool saw_glcm = false;
    bool saw_lbp = false;
    for (int i = 0; i < 200; ++i) {
        const PipelineConfig cfg = svm_space.sample(rng);
        CHECK(svm_space.contains(cfg));
        CHECK(cfg.classifier.kind == "svm");
        saw_glcm |= cfg.extractor.kind == ExtractorKind::kGlcm;
        saw_lbp |= cfg.extractor.kind == ExtractorKind::kLbp;
    }
    CHECK(saw_glcm);
    CHECK(saw_lbp);

    PipelineSpace glcm_only;
    glcm_only.allow_lbp = false;
    for (int i = 0; i < 20; ++i)
        CHECK(glcm_only.sample(rng).extractor.kind == ExtractorKind::kGlcm);

    PipelineSpace lbp_only;
    lbp_only.allow_glcm = false;
    for (int i = 0; i < 20; ++i)
        CHECK(lbp_only.sample(rng).extractor.kind == ExtractorKind::kLbp);

    PipelineSpace empty;
    empty.allow_glcm = false;
    empty.allow_lbp = false;
    CHECK_THROWS_AS(empty.sample(rng), std::logic_error);

    PipelineSpace unknown;
    unknown.classifier_kind = "zip";
    CHECK_THROWS_AS(unknown.sample(rng), std::logic_error);
}

TEST_CASE("search: the searchable grids match their documented shapes") {
    const auto& cs = svm_c_grid();
    REQUIRE(cs.size() == 12);
    CHECK(std::find(cs.begin(), cs.end(), 1.0) != cs.end());
    CHECK(std::find(cs.begin(), cs.end(), std::ldexp(1.0, -5)) != cs.end());
    CHECK(std::find(cs.begin(), cs.end(), std::ldexp(1.0, 15)) != cs.end());

    const auto& gs = svm_gamma_grid();
    REQUIRE(gs.size() == 11);
    CHECK(gs.front() == 0.0); // auto sentinel
    CHECK(std::find(gs.begin(), gs.end(), std::ldexp(1.0, -15)) != gs.end());
    CHECK(std::find(gs.begin(), gs.end(), 8.0) != gs.end());

    const auto& ws = class_weight_options();
    REQUIRE(ws.size() == 5);
    CHECK(ws[0].mode == WeightMode::kNone);
    CHECK(ws[1].mode == WeightMode::kBalanced);
    for (std::size_t i = 2; i < ws.size(); ++i) {
        CHECK(ws[i].mode == WeightMode::kExplicit);
        REQUIRE(ws[i].explicit_weights.size() == 5);
        CHECK(ws[i].explicit_weights.count("blank") == 1);
        CHECK(ws[i].explicit_weights.count("no-crystal") == 1);
        CHECK(ws[i].explicit_weights.count("weak") == 1);
        CHECK(ws[i].explicit_weights.count("good") == 1);
        CHECK(ws[i].explicit_weights.count("strong") == 1);
    }
}

TEST_CASE("search: membership rejects off-grid configurations") {
    PipelineSpace rf_space;
    PipelineConfig cfg = preset_rf_glcm();
    CHECK(rf_space.contains(cfg));

    PipelineConfig bad = cfg;
    bad.extractor.glcm.distances = {2, 1}; // not in canonical ascending order
    CHECK(!rf_space.contains(bad));
    bad = cfg;
    bad.extractor.glcm.distances = {3};
    CHECK(!rf_space.contains(bad));
    bad = cfg;
    bad.extractor.glcm.angles_deg = {};
    CHECK(!rf_space.contains(bad));
    bad = cfg;
    bad.classifier.rf.n_trees = 50;
    CHECK(!rf_space.contains(bad));
    bad = cfg;
    bad.classifier.rf.max_depth = 3;
    CHECK(!rf_space.contains(bad));

    PipelineSpace svm_space;
    svm_space.classifier_kind = "svm";
    CHECK(!svm_space.contains(cfg)); // classifier kind mismatch
    PipelineConfig svm_cfg = preset_svm_glcm();
    CHECK(svm_space.contains(svm_cfg));
    bad = svm_cfg;
    bad.classifier.svm.c = 3.0;
    CHECK(!svm_space.contains(bad));
    bad = svm_cfg;
    bad.classifier.svm.gamma = 4.0; // only odd powers of two are searchable
    CHECK(!svm_space.contains(bad));
    bad = svm_cfg;
    bad.extractor.kind = ExtractorKind::kLbp;
    bad.extractor.lbp.points = 12;
    bad.extractor.lbp.radius = 2.0;
    CHECK(!svm_space.contains(bad));
    bad.extractor.lbp.points = 16;
    bad.extractor.lbp.radius = 1.5;
    CHECK(!svm_space.contains(bad));
    bad.extractor.lbp.radius = 2.0;
    CHECK(svm_space.contains(bad));
}

TEST_CASE("search: pipeline configurations round-trip through json") {
    const PipelineConfig rf = preset_rf_glcm();
    const PipelineConfig rf2 = pipeline_config_from_json(pipeline_config_to_json(rf));
    CHECK(rf2.extractor.kind == ExtractorKind::kGlcm);
    CHECK(rf2.extractor.glcm.distances == rf.extractor.glcm.distances);
    CHECK(rf2.extractor.glcm.angles_deg == rf.extractor.glcm.angles_deg);
    CHECK(rf2.extractor.glcm.levels == rf.extractor.glcm.levels);
    CHECK(rf2.classifier.kind == "rf");
    CHECK(rf2.classifier.rf.n_trees == rf.classifier.rf.n_trees);
    CHECK(rf2.classifier.rf.max_features == rf.classifier.rf.max_features);
    CHECK(rf2.classifier.rf.max_depth == rf.classifier.rf.max_depth);
    CHECK(weights_equal(rf2.classifier.rf.class_weights,
                        rf.classifier.rf.class_weights));

    const PipelineConfig svm = preset_svm_glcm();
    const PipelineConfig svm2 =
        pipeline_config_from_json(pipeline_config_to_json(svm));
    CHECK(svm2.extractor.kind == ExtractorKind::kGlcm);
    CHECK(svm2.classifier.kind == "svm");
    CHECK(svm2.classifier.svm.c == svm.classifier.svm.c);
    CHECK(svm2.classifier.svm.gamma == svm.classifier.svm.gamma);
    CHECK(weights_equal(svm2.classifier.svm.class_weights,
                        svm.classifier.svm.class_weights));

    PipelineConfig lbp;
    lbp.extractor.kind = ExtractorKind::kLbp;
    lbp.extractor.lbp.points = 16;
    lbp.extractor.lbp.radius = 2.5;
    lbp.classifier.kind = "svm";
    const PipelineConfig lbp2 =
        pipeline_config_from_json(pipeline_config_to_json(lbp));
    CHECK(lbp2.extractor.kind == ExtractorKind::kLbp);
    CHECK(lbp2.extractor.lbp.points == 16);
    CHECK(lbp2.extractor.lbp.radius == 2.5);

    CHECK_THROWS_AS(
        pipeline_config_from_json(R"({"extractor":{"kind":"wavelet"}})"),
        std::invalid_argument);
}

TEST_CASE("search: the trial log is one json object per line") {
    std::vector<Trial<PipelineConfig>> trials(2);
    trials[0].index = 0;
    trials[0].sampler = "random";
    trials[0].config = preset_rf_glcm();
    trials[0].budget = 1.0;
    trials[0].score = 0.75;
    trials[0].ok = true;
    trials[0].round = -1;
    trials[1].index = 1;
    trials[1].sampler = "halving";
    trials[1].config = preset_svm_glcm();
    trials[1].budget = 0.5;
    trials[1].ok = false;
    trials[1].error = "boom";
    trials[1].round = 2;

    const auto path = tmp_dir() / "trials.jsonl";
    write_trial_log(path.string(), trials);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    REQUIRE(lines.size() == 2);

    const auto a = nlohmann::json::parse(lines[0]);
    CHECK(a.at("trial") == 0);
    CHECK(a.at("sampler") == "random");
    CHECK(a.at("round") == -1);
    CHECK(a.at("budget") == 1.0);
    CHECK(a.at("status") == "ok");
    CHECK(a.at("score") == 0.75);
    CHECK(a.at("error") == "");
    const PipelineConfig cfg_a =
        pipeline_config_from_json(a.at("config").dump());
    CHECK(cfg_a.classifier.rf.n_trees == 100);
    CHECK(cfg_a.extractor.glcm.distances == std::vector<int>{1, 2, 5, 8});

    const auto b = nlohmann::json::parse(lines[1]);
    CHECK(b.at("trial") == 1);
    CHECK(b.at("sampler") == "halving");
    CHECK(b.at("round") == 2);
    CHECK(b.at("budget") == 0.5);
    CHECK(b.at("status") == "failed");
    CHECK(b.at("score").is_null());
    CHECK(b.at("error") == "boom");
    const PipelineConfig cfg_b =
        pipeline_config_from_json(b.at("config").dump());
    CHECK(cfg_b.classifier.svm.c == 32.0);

    CHECK_THROWS_AS(write_trial_log((tmp_dir() / "no" / "deep.jsonl").string(), trials),
                    std::runtime_error);
}
