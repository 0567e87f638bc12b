#pragma once
#include <string>
#include <vector>

#include "diffsim/features/extractor.hpp"
#include "diffsim/ml/random_forest.hpp"
#include "diffsim/ml/svm.hpp"

namespace diffsim {

struct ClassifierParams {
    std::string kind = "rf"; // "rf" | "svm"
    RfParams rf;
    SvmParams svm;
};

// A trained classifier plus everything needed to refuse bad inputs:
// the sorted class list and the feature schema it was fitted on.
struct TrainedModel {
    std::string kind;
    std::vector<std::string> classes;
    std::vector<std::string> feature_names;
    std::string constant_class; // set when training saw a single class
    RandomForest rf;
    SvmModel svm;

    std::string predict_one(const std::vector<double>& x) const;
    // Validates the table's schema against feature_names, then predicts
    // every row.
    std::vector<std::string> predict_table(const FeatureTable& table) const;
};

// Labels are taken from the table; class order is the sorted unique
// label list.  A single-class table yields a constant model (warning on
// stderr) rather than an error.
TrainedModel train_classifier(const FeatureTable& train, const ClassifierParams& params);

// Versioned JSON serialization.
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

// params.json for the train CLI:
// {"kind": "rf"|"svm", "rf": {...}, "svm": {...}} — sections optional.
ClassifierParams classifier_params_from_json(const std::string& text);
std::string classifier_params_to_json(const ClassifierParams& params);

} // namespace diffsim
