#include "diffsim/ml/model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace diffsim {

using nlohmann::json;

namespace {

std::vector<std::string> sorted_unique_labels(const std::vector<std::string>& labels) {
    std::vector<std::string> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

int class_index(const std::vector<std::string>& classes, const std::string& label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
        throw std::invalid_argument("label outside class list: " + label);
    return static_cast<int>(it - classes.begin());
}

} // namespace

std::string TrainedModel::predict_one(const std::vector<double>& x) const {
    if (!constant_class.empty())
        return constant_class;
    if (x.size() != feature_names.size())
        throw std::invalid_argument("feature vector length mismatch");
    const int c = kind == "rf" ? rf.predict(x) : svm.predict(x);
    return classes[c];
}

std::vector<std::string> TrainedModel::predict_table(const FeatureTable& table) const {
    if (table.feature_names != feature_names)
        throw std::invalid_argument(
            "feature schema mismatch between model and input table");
    std::vector<std::string> out;
    out.reserve(table.rows());
    for (const auto& row : table.x)
        out.push_back(predict_one(row));
    return out;
}

TrainedModel train_classifier(const FeatureTable& train, const ClassifierParams& params) {
    if (train.rows() == 0)
        throw std::invalid_argument("empty training table");
    if (params.kind != "rf" && params.kind != "svm")
        throw std::invalid_argument("classifier kind must be rf or svm");

    TrainedModel model;
    model.kind = params.kind;
    model.feature_names = train.feature_names;
    model.classes = sorted_unique_labels(train.labels);

    if (model.classes.size() < 2) {
        std::fprintf(stderr,
                     "train: single-class input, producing a constant model\n");
        model.constant_class = model.classes[0];
        return model;
    }

    std::vector<int> y;
    y.reserve(train.rows());
    for (const auto& label : train.labels)
        y.push_back(class_index(model.classes, label));

    if (params.kind == "rf")
        model.rf = RandomForest::train(train.x, y, model.classes, params.rf);
    else
        model.svm = SvmModel::train(train.x, y, model.classes, params.svm);
    return model;
}

namespace {

json class_weights_to_json(const ClassWeights& w) {
    switch (w.mode) {
    case WeightMode::kNone: return "none";
    case WeightMode::kBalanced: return "balanced";
    case WeightMode::kExplicit: return json(w.explicit_weights);
    }
    return "none";
}

ClassWeights class_weights_from_json(const json& j) {
    ClassWeights w;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "none")
            w.mode = WeightMode::kNone;
        else if (s == "balanced")
            w.mode = WeightMode::kBalanced;
        else
            throw std::invalid_argument("unknown class_weights value: " + s);
    } else if (j.is_object()) {
        w.mode = WeightMode::kExplicit;
        for (const auto& [key, value] : j.items())
            w.explicit_weights[key] = value.get<double>();
    } else {
        throw std::invalid_argument("class_weights must be a string or an object");
    }
    return w;
}

MaxFeaturesRule max_features_from_string(const std::string& s) {
    if (s == "sqrt")
        return MaxFeaturesRule::kSqrt;
    if (s == "0.25")
        return MaxFeaturesRule::kFrac25;
    if (s == "0.5")
        return MaxFeaturesRule::kFrac50;
    if (s == "0.75")
        return MaxFeaturesRule::kFrac75;
    throw std::invalid_argument("unknown max_features value: " + s);
}

json rf_params_to_json(const RfParams& p) {
    return json{{"n_trees", p.n_trees},
                {"max_features", max_features_name(p.max_features)},
                {"max_depth", p.max_depth},
                {"class_weights", class_weights_to_json(p.class_weights)},
                {"seed", p.seed},
                {"min_samples_split", p.min_samples_split}};
}

RfParams rf_params_from_json(const json& j) {
    RfParams p;
    if (j.contains("n_trees"))
        p.n_trees = j.at("n_trees").get<int>();
    if (j.contains("max_features"))
        p.max_features = max_features_from_string(j.at("max_features").get<std::string>());
    if (j.contains("max_depth")) {
        // null means unlimited, stored as 0.
        p.max_depth = j.at("max_depth").is_null() ? 0 : j.at("max_depth").get<int>();
    }
    if (j.contains("class_weights"))
        p.class_weights = class_weights_from_json(j.at("class_weights"));
    if (j.contains("seed"))
        p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("min_samples_split"))
        p.min_samples_split = j.at("min_samples_split").get<int>();
    return p;
}

json svm_params_to_json(const SvmParams& p) {
    return json{{"C", p.c},
                {"gamma", p.gamma},
                {"class_weights", class_weights_to_json(p.class_weights)},
                {"tolerance", p.tolerance},
                {"max_iterations", p.max_iterations},
                {"cache_mb", p.cache_mb},
                {"standardize", p.standardize}};
}

SvmParams svm_params_from_json(const json& j) {
    SvmParams p;
    if (j.contains("C"))
        p.c = j.at("C").get<double>();
    if (j.contains("gamma"))
        p.gamma = j.at("gamma").get<double>();
    if (j.contains("class_weights"))
        p.class_weights = class_weights_from_json(j.at("class_weights"));
    if (j.contains("tolerance"))
        p.tolerance = j.at("tolerance").get<double>();
    if (j.contains("max_iterations"))
        p.max_iterations = j.at("max_iterations").get<long>();
    if (j.contains("cache_mb"))
        p.cache_mb = j.at("cache_mb").get<std::size_t>();
    if (j.contains("standardize"))
        p.standardize = j.at("standardize").get<bool>();
    return p;
}

} // namespace

ClassifierParams classifier_params_from_json(const std::string& text) {
    const json j = json::parse(text);
    ClassifierParams p;
    if (j.contains("kind"))
        p.kind = j.at("kind").get<std::string>();
    if (j.contains("rf"))
        p.rf = rf_params_from_json(j.at("rf"));
    if (j.contains("svm"))
        p.svm = svm_params_from_json(j.at("svm"));
    return p;
}

std::string classifier_params_to_json(const ClassifierParams& params) {
    json j;
    j["kind"] = params.kind;
    j["rf"] = rf_params_to_json(params.rf);
    j["svm"] = svm_params_to_json(params.svm);
    return j.dump(2) + "\n";
}

void save_model(const std::string& path, const TrainedModel& model) {
    json j;
    j["format"] = "diffsim-model";
    j["version"] = 1;
    j["kind"] = model.kind;
    j["classes"] = model.classes;
    j["feature_names"] = model.feature_names;
    if (!model.constant_class.empty())
        j["constant_class"] = model.constant_class;
    if (model.kind == "rf" && model.constant_class.empty()) {
        json trees = json::array();
        for (const auto& tree : model.rf.trees()) {
            json nodes = json::array();
            for (const auto& n : tree.nodes)
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class});
            trees.push_back(std::move(nodes));
        }
        j["rf"] = {{"n_classes", model.rf.n_classes()}, {"trees", std::move(trees)}};
    } else if (model.kind == "svm" && model.constant_class.empty()) {
        json binaries = json::array();
        for (const auto& bin : model.svm.binaries_)
            binaries.push_back({{"bias", bin.bias},
                                {"coef", bin.coef},
                                {"support", bin.support}});
        j["svm"] = {{"gamma", model.svm.gamma_},
                    {"mean", model.svm.mean_},
                    {"scale", model.svm.scale_},
                    {"binaries", std::move(binaries)}};
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write model: " + path);
    out << j.dump() << '\n';
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open model: " + path);
    const json j = json::parse(in);
    if (j.value("format", "") != "diffsim-model")
        throw std::runtime_error("not a model file: " + path);
    if (j.value("version", 0) != 1)
        throw std::runtime_error("unsupported model version in " + path);

    TrainedModel model;
    model.kind = j.at("kind").get<std::string>();
    model.classes = j.at("classes").get<std::vector<std::string>>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.constant_class = j.value("constant_class", "");
    if (!model.constant_class.empty())
        return model;

    if (model.kind == "rf") {
        const json& rf = j.at("rf");
        model.rf.n_classes_ = rf.at("n_classes").get<int>();
        for (const auto& tree_json : rf.at("trees")) {
            DecisionTree tree;
            for (const auto& n : tree_json) {
                TreeNode node;
                node.feature = n.at(0).get<int>();
                node.threshold = n.at(1).get<double>();
                node.left = n.at(2).get<int>();
                node.right = n.at(3).get<int>();
                node.leaf_class = n.at(4).get<int>();
                tree.nodes.push_back(node);
            }
            model.rf.trees_.push_back(std::move(tree));
        }
    } else if (model.kind == "svm") {
        const json& svm = j.at("svm");
        model.svm.gamma_ = svm.at("gamma").get<double>();
        model.svm.mean_ = svm.at("mean").get<std::vector<double>>();
        model.svm.scale_ = svm.at("scale").get<std::vector<double>>();
        for (const auto& bin_json : svm.at("binaries")) {
            BinarySvm bin;
            bin.bias = bin_json.at("bias").get<double>();
            bin.coef = bin_json.at("coef").get<std::vector<double>>();
            bin.support =
                bin_json.at("support").get<std::vector<std::vector<double>>>();
            model.svm.binaries_.push_back(std::move(bin));
        }
    } else {
        throw std::runtime_error("unknown model kind in " + path);
    }
    return model;
}

} // namespace diffsim
