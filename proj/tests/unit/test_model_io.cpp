#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffsim/ml/model.hpp"
#include "diffsim/rng.hpp"

using namespace diffsim;

namespace {

std::filesystem::path tmp_dir() {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("diffsim_modelio_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Three labelled blobs as a feature table.
FeatureTable blob_table(std::uint64_t seed, int per_class) {
    const double centers[3][2] = {{0, 0}, {8, 0}, {0, 8}};
    const std::vector<std::string> names{"a", "b", "c"};
    Rng rng(seed);
    FeatureTable t;
    t.feature_names = {"f0", "f1"};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < per_class; ++i) {
            t.x.push_back({centers[c][0] + rng.normal(0.0, 0.5),
                           centers[c][1] + rng.normal(0.0, 0.5)});
            t.labels.push_back(names[c]);
            t.splits.push_back("train");
        }
    return t;
}

} // namespace

TEST_CASE("model io: random forest round-trips through disk") {
    const FeatureTable table = blob_table(11, 20);
    ClassifierParams params;
    params.kind = "rf";
    params.rf.n_trees = 30;
    params.rf.seed = 3;
    const TrainedModel model = train_classifier(table, params);
    CHECK(model.kind == "rf");
    CHECK(model.classes == std::vector<std::string>{"a", "b", "c"});
    CHECK(model.constant_class.empty());

    const auto path = tmp_dir() / "rf.json";
    save_model(path.string(), model);
    const TrainedModel loaded = load_model(path.string());

    CHECK(loaded.kind == model.kind);
    CHECK(loaded.classes == model.classes);
    CHECK(loaded.feature_names == model.feature_names);
    CHECK(loaded.constant_class.empty());
    REQUIRE(loaded.rf.trees().size() == model.rf.trees().size());
    for (std::size_t t = 0; t < model.rf.trees().size(); ++t) {
        const auto& a = model.rf.trees()[t].nodes;
        const auto& b = loaded.rf.trees()[t].nodes;
        REQUIRE(a.size() == b.size());
        for (std::size_t n = 0; n < a.size(); ++n) {
            CHECK(a[n].feature == b[n].feature);
            CHECK(a[n].threshold == b[n].threshold); // doubles survive exactly
            CHECK(a[n].left == b[n].left);
            CHECK(a[n].right == b[n].right);
            CHECK(a[n].leaf_class == b[n].leaf_class);
        }
    }

    Rng rng(501);
    for (int i = 0; i < 40; ++i) {
        const std::vector<double> q{rng.normal(3.0, 4.0), rng.normal(3.0, 4.0)};
        CHECK(loaded.predict_one(q) == model.predict_one(q));
    }
    CHECK(loaded.predict_table(table) == model.predict_table(table));
}

TEST_CASE("model io: svm round-trips through disk") {
    const FeatureTable table = blob_table(12, 15);
    ClassifierParams params;
    params.kind = "svm";
    params.svm.c = 10.0;
    params.svm.gamma = 0.5;
    const TrainedModel model = train_classifier(table, params);

    const auto path = tmp_dir() / "svm.json";
    save_model(path.string(), model);
    const TrainedModel loaded = load_model(path.string());

    CHECK(loaded.kind == "svm");
    CHECK(loaded.classes == model.classes);
    CHECK(loaded.feature_names == model.feature_names);
    CHECK(loaded.svm.gamma_ == model.svm.gamma_);
    CHECK(loaded.svm.mean_ == model.svm.mean_);
    CHECK(loaded.svm.scale_ == model.svm.scale_);
    REQUIRE(loaded.svm.binaries_.size() == model.svm.binaries_.size());
    for (std::size_t c = 0; c < model.svm.binaries_.size(); ++c) {
        CHECK(loaded.svm.binaries_[c].bias == model.svm.binaries_[c].bias);
        CHECK(loaded.svm.binaries_[c].coef == model.svm.binaries_[c].coef);
        CHECK(loaded.svm.binaries_[c].support == model.svm.binaries_[c].support);
    }

    Rng rng(502);
    for (int i = 0; i < 40; ++i) {
        const std::vector<double> q{rng.normal(3.0, 4.0), rng.normal(3.0, 4.0)};
        CHECK(loaded.predict_one(q) == model.predict_one(q));
    }
}

TEST_CASE("model io: a single-class table yields a constant model") {
    FeatureTable table;
    table.feature_names = {"f0"};
    table.x = {{0.0}, {1.0}, {2.0}};
    table.labels = {"only", "only", "only"};
    table.splits = {"train", "train", "train"};

    ClassifierParams params; // rf by default
    const TrainedModel model = train_classifier(table, params);
    CHECK(model.constant_class == "only");
    CHECK(model.predict_one({123.0}) == "only");
    const auto preds = model.predict_table(table);
    CHECK(preds == std::vector<std::string>{"only", "only", "only"});

    const auto path = tmp_dir() / "const.json";
    save_model(path.string(), model);
    const TrainedModel loaded = load_model(path.string());
    CHECK(loaded.constant_class == "only");
    CHECK(loaded.classes == std::vector<std::string>{"only"});
    CHECK(loaded.predict_one({-1.0}) == "only");
}

TEST_CASE("model io: prediction rejects mismatched inputs") {
    const FeatureTable table = blob_table(13, 10);
    ClassifierParams params;
    params.rf.n_trees = 5;
    const TrainedModel model = train_classifier(table, params);

    FeatureTable other = table;
    other.feature_names = {"f0", "weird"};
    CHECK_THROWS_AS(model.predict_table(other), std::invalid_argument);
    CHECK_THROWS_AS(model.predict_one({1.0, 2.0, 3.0}), std::invalid_argument);

    FeatureTable empty;
    empty.feature_names = {"f0"};
    CHECK_THROWS_AS(train_classifier(empty, params), std::invalid_argument);

    ClassifierParams bad_kind;
    bad_kind.kind = "zip";
    CHECK_THROWS_AS(train_classifier(table, bad_kind), std::invalid_argument);
}

TEST_CASE("model io: malformed model files are rejected") {
    const auto dir = tmp_dir();
    CHECK_THROWS_AS(load_model((dir / "missing.json").string()), std::runtime_error);

    const auto wrong_format = dir / "format.json";
    spit(wrong_format, R"({"format":"something-else","version":1})");
    CHECK_THROWS_AS(load_model(wrong_format.string()), std::runtime_error);

    const auto wrong_version = dir / "version.json";
    spit(wrong_version, R"({"format":"diffsim-model","version":2})");
    CHECK_THROWS_AS(load_model(wrong_version.string()), std::runtime_error);

    const auto wrong_kind = dir / "kind.json";
    spit(wrong_kind,
         R"({"format":"diffsim-model","version":1,"kind":"zip",)"
         R"("classes":["a","b"],"feature_names":["f0"]})");
    CHECK_THROWS_AS(load_model(wrong_kind.string()), std::runtime_error);
}

TEST_CASE("model io: classifier params round-trip through json") {
    ClassifierParams p;
    p.kind = "svm";
    p.rf.n_trees = 250;
    p.rf.max_features = MaxFeaturesRule::kFrac50;
    p.rf.max_depth = 7;
    p.rf.class_weights.mode = WeightMode::kExplicit;
    p.rf.class_weights.explicit_weights = {{"a", 2.0}, {"b", 0.5}};
    p.rf.seed = 99;
    p.rf.min_samples_split = 5;
    p.svm.c = 3.5;
    p.svm.gamma = 0.125;
    p.svm.class_weights.mode = WeightMode::kBalanced;
    p.svm.tolerance = 1e-4;
    p.svm.max_iterations = 5000;
    p.svm.cache_mb = 64;
    p.svm.standardize = false;

    const ClassifierParams q = classifier_params_from_json(classifier_params_to_json(p));
    CHECK(q.kind == "svm");
    CHECK(q.rf.n_trees == 250);
    CHECK(q.rf.max_features == MaxFeaturesRule::kFrac50);
    CHECK(q.rf.max_depth == 7);
    CHECK(q.rf.class_weights.mode == WeightMode::kExplicit);
    CHECK(q.rf.class_weights.explicit_weights == p.rf.class_weights.explicit_weights);
    CHECK(q.rf.seed == 99);
    CHECK(q.rf.min_samples_split == 5);
    CHECK(q.svm.c == 3.5);
    CHECK(q.svm.gamma == 0.125);
    CHECK(q.svm.class_weights.mode == WeightMode::kBalanced);
    CHECK(q.svm.tolerance == 1e-4);
    CHECK(q.svm.max_iterations == 5000);
    CHECK(q.svm.cache_mb == 64);
    CHECK(q.svm.standardize == false);
}

TEST_CASE("model io: params json accepts partial documents and rejects junk") {
    const ClassifierParams defaults = classifier_params_from_json("{}");
    CHECK(defaults.kind == "rf");
    CHECK(defaults.rf.n_trees == RfParams{}.n_trees);
    CHECK(defaults.svm.c == SvmParams{}.c);

    // Only one field overridden; null max_depth means unlimited.
    const ClassifierParams partial = classifier_params_from_json(
        R"({"rf": {"max_depth": null, "n_trees": 3}})");
    CHECK(partial.rf.max_depth == 0);
    CHECK(partial.rf.n_trees == 3);
    CHECK(partial.rf.max_features == MaxFeaturesRule::kSqrt);

    CHECK_THROWS_AS(
        classifier_params_from_json(R"({"rf": {"class_weights": "heavy"}})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        classifier_params_from_json(R"({"rf": {"class_weights": [1, 2]}})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        classifier_params_from_json(R"({"rf": {"max_features": "all"}})"),
        std::invalid_argument);
    CHECK_THROWS(classifier_params_from_json("{nope"));
}
