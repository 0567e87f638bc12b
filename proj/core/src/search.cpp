#include "diffsim/search/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace diffsim {

namespace {

const std::vector<int> kGlcmDistancePool{1, 2, 4, 5, 8};
const std::vector<int> kGlcmAnglePool{0, 45, 90, 135};
const std::vector<int> kLbpPoints{4, 8, 16, 24};
const std::vector<int> kLbpRadii{1, 2, 3};
const std::vector<int> kRfTrees{10, 100, 1000};
const std::vector<MaxFeaturesRule> kRfMaxFeatures{
    MaxFeaturesRule::kSqrt, MaxFeaturesRule::kFrac25, MaxFeaturesRule::kFrac50,
    MaxFeaturesRule::kFrac75};
const std::vector<int> kRfDepths{0, 2, 4, 6, 8, 10, 20};

ClassWeights explicit_weights(double neg, double pos) {
    ClassWeights w;
    w.mode = WeightMode::kExplicit;
    w.explicit_weights = {{"blank", neg},
                          {"no-crystal", neg},
                          {"weak", pos},
                          {"good", pos},
                          {"strong", pos}};
    return w;
}

// Nonempty subset of pool, uniform over the 2^k - 1 possibilities,
// returned in pool order.
std::vector<int> sample_subset(Rng& rng, const std::vector<int>& pool) {
    const std::uint64_t mask =
        rng.uniform_int((std::uint64_t{1} << pool.size()) - 1) + 1;
    std::vector<int> out;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask & (std::uint64_t{1} << i))
            out.push_back(pool[i]);
    return out;
}

bool is_subset_of(const std::vector<int>& vals, const std::vector<int>& pool) {
    if (vals.empty())
        return false;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i > 0 && vals[i] <= vals[i - 1])
            return false; // require strictly ascending canonical form
        if (std::find(pool.begin(), pool.end(), vals[i]) == pool.end())
            return false;
    }
    return true;
}

bool weights_equal(const ClassWeights& a, const ClassWeights& b) {
    return a.mode == b.mode && a.explicit_weights == b.explicit_weights;
}

template <typename T>
bool in_grid(const std::vector<T>& grid, const T& v) {
    return std::find(grid.begin(), grid.end(), v) != grid.end();
}

} // namespace

const std::vector<double>& svm_c_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g{1.0};
        for (int x = -5; x <= 15; x += 2)
            g.push_back(std::ldexp(1.0, x));
        return g;
    }();
    return grid;
}

const std::vector<double>& svm_gamma_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g{0.0}; // auto sentinel: 1/n_features
        for (int x = -15; x <= 3; x += 2)
            g.push_back(std::ldexp(1.0, x));
        return g;
    }();
    return grid;
}

const std::vector<ClassWeights>& class_weight_options() {
    static const std::vector<ClassWeights> options = [] {
        std::vector<ClassWeights> o;
        o.emplace_back(); // none
        ClassWeights balanced;
        balanced.mode = WeightMode::kBalanced;
        o.push_back(balanced);
        o.push_back(explicit_weights(0.35, 0.1));
        o.push_back(explicit_weights(0.3, 0.133));
        o.push_back(explicit_weights(0.25, 0.166));
        return o;
    }();
    return options;
}

PipelineConfig PipelineSpace::sample(Rng& rng) const {
    if (!allow_glcm && !allow_lbp)
        throw std::logic_error("search space allows no extractor");
    PipelineConfig cfg;

    const bool use_glcm =
        allow_glcm && (!allow_lbp || rng.uniform_int(2) == 0);
    if (use_glcm) {
        cfg.extractor.kind = ExtractorKind::kGlcm;
        cfg.extractor.glcm.distances = sample_subset(rng, kGlcmDistancePool);
        cfg.extractor.glcm.angles_deg = sample_subset(rng, kGlcmAnglePool);
    } else {
        cfg.extractor.kind = ExtractorKind::kLbp;
        cfg.extractor.lbp.points =
            kLbpPoints[rng.uniform_int(kLbpPoints.size())];
        cfg.extractor.lbp.radius =
            static_cast<double>(kLbpRadii[rng.uniform_int(kLbpRadii.size())]);
    }

    cfg.classifier.kind = classifier_kind;
    if (classifier_kind == "rf") {
        cfg.classifier.rf.n_trees = kRfTrees[rng.uniform_int(kRfTrees.size())];
        cfg.classifier.rf.max_features =
            kRfMaxFeatures[rng.uniform_int(kRfMaxFeatures.size())];
        cfg.classifier.rf.max_depth = kRfDepths[rng.uniform_int(kRfDepths.size())];
        cfg.classifier.rf.class_weights =
            class_weight_options()[rng.uniform_int(class_weight_options().size())];
        cfg.classifier.rf.seed = rng.next();
    } else if (classifier_kind == "svm") {
        cfg.classifier.svm.c = svm_c_grid()[rng.uniform_int(svm_c_grid().size())];
        cfg.classifier.svm.gamma =
            svm_gamma_grid()[rng.uniform_int(svm_gamma_grid().size())];
        cfg.classifier.svm.class_weights =
            class_weight_options()[rng.uniform_int(class_weight_options().size())];
    } else {
        throw std::logic_error("unknown classifier kind: " + classifier_kind);
    }
    return cfg;
}

bool PipelineSpace::contains(const PipelineConfig& cfg) const {
    if (cfg.extractor.kind == ExtractorKind::kGlcm) {
        if (!allow_glcm)
            return false;
        if (!is_subset_of(cfg.extractor.glcm.distances, kGlcmDistancePool) ||
            !is_subset_of(cfg.extractor.glcm.angles_deg, kGlcmAnglePool))
            return false;
    } else {
        if (!allow_lbp)
            return false;
        if (!in_grid(kLbpPoints, cfg.extractor.lbp.points))
            return false;
        const int r = static_cast<int>(cfg.extractor.lbp.radius);
        if (static_cast<double>(r) != cfg.extractor.lbp.radius ||
            !in_grid(kLbpRadii, r))
            return false;
    }

    if (cfg.classifier.kind != classifier_kind)
        return false;
    const auto& weight_ok = [](const ClassWeights& w) {
        for (const auto& option : class_weight_options())
            if (weights_equal(option, w))
                return true;
        return false;
    };
    if (classifier_kind == "rf") {
        const RfParams& p = cfg.classifier.rf;
        return in_grid(kRfTrees, p.n_trees) && in_grid(kRfDepths, p.max_depth) &&
               in_grid(kRfMaxFeatures, p.max_features) && weight_ok(p.class_weights);
    }
    const SvmParams& p = cfg.classifier.svm;
    return in_grid(svm_c_grid(), p.c) && in_grid(svm_gamma_grid(), p.gamma) &&
           weight_ok(p.class_weights);
}

PipelineConfig preset_rf_glcm() {
    PipelineConfig cfg;
    cfg.extractor.kind = ExtractorKind::kGlcm;
    cfg.extractor.glcm.distances = {1, 2, 5, 8};
    cfg.extractor.glcm.angles_deg = {45, 135};
    cfg.classifier.kind = "rf";
    cfg.classifier.rf.n_trees = 100;
    cfg.classifier.rf.max_features = MaxFeaturesRule::kSqrt;
    cfg.classifier.rf.max_depth = 20;
    cfg.classifier.rf.class_weights = ClassWeights{}; // none
    return cfg;
}

PipelineConfig preset_svm_glcm() {
    PipelineConfig cfg;
    cfg.extractor.kind = ExtractorKind::kGlcm;
    cfg.extractor.glcm.distances = {1, 5, 8};
    cfg.extractor.glcm.angles_deg = {0, 90, 135};
    cfg.classifier.kind = "svm";
    cfg.classifier.svm.c = 32.0;
    cfg.classifier.svm.gamma = 0.5;
    cfg.classifier.svm.class_weights = explicit_weights(0.25, 0.166);
    return cfg;
}

namespace {

nlohmann::json extractor_to_json(const ExtractorConfig& e) {
    if (e.kind == ExtractorKind::kGlcm)
        return {{"kind", "glcm"},
                {"distances", e.glcm.distances},
                {"angles", e.glcm.angles_deg},
                {"levels", e.glcm.levels}};
    return {{"kind", "lbp"}, {"points", e.lbp.points}, {"radius", e.lbp.radius}};
}

ExtractorConfig extractor_from_json(const nlohmann::json& j) {
    ExtractorConfig e;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "glcm") {
        e.kind = ExtractorKind::kGlcm;
        e.glcm.distances = j.at("distances").get<std::vector<int>>();
        e.glcm.angles_deg = j.at("angles").get<std::vector<int>>();
        if (j.contains("levels"))
            e.glcm.levels = j.at("levels").get<int>();
    } else if (kind == "lbp") {
        e.kind = ExtractorKind::kLbp;
        e.lbp.points = j.at("points").get<int>();
        e.lbp.radius = j.at("radius").get<double>();
    } else {
        throw std::invalid_argument("unknown extractor kind: " + kind);
    }
    return e;
}

} // namespace

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
    nlohmann::json j;
    j["extractor"] = extractor_to_json(cfg.extractor);
    j["classifier"] = nlohmann::json::parse(classifier_params_to_json(cfg.classifier));
    return j.dump();
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PipelineConfig cfg;
    cfg.extractor = extractor_from_json(j.at("extractor"));
    cfg.classifier = classifier_params_from_json(j.at("classifier").dump());
    return cfg;
}

void write_trial_log(const std::string& path,
                     const std::vector<Trial<PipelineConfig>>& trials) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write trial log: " + path);
    for (const auto& t : trials) {
        nlohmann::ordered_json j;
        j["trial"] = t.index;
        j["sampler"] = t.sampler;
        j["round"] = t.round;
        j["budget"] = t.budget;
        j["status"] = t.ok ? "ok" : "failed";
        j["score"] = t.ok ? nlohmann::json(t.score) : nlohmann::json(nullptr);
        j["error"] = t.error;
        j["config"] = nlohmann::json::parse(pipeline_config_to_json(t.config));
        out << j.dump() << '\n';
    }
}

} // namespace diffsim
