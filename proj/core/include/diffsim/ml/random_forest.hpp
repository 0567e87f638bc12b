#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "diffsim/ml/weights.hpp"

namespace diffsim {

enum class MaxFeaturesRule { kSqrt, kFrac25, kFrac50, kFrac75 };
const char* max_features_name(MaxFeaturesRule r);
// Candidate-feature count for a node: sqrt -> max(1, floor(sqrt(n))),
// fractions -> max(1, floor(frac * n)).
int resolve_max_features(MaxFeaturesRule r, int n_features);

struct RfParams {
    int n_trees = 10;
    MaxFeaturesRule max_features = MaxFeaturesRule::kSqrt;
    int max_depth = 0; // 0 = unlimited
    ClassWeights class_weights;
    std::uint64_t seed = 0;
    int min_samples_split = 2;
};

struct TreeNode {
    int feature = -1;      // -1 marks a leaf
    double threshold = 0;  // x[feature] <= threshold goes left
    int left = -1, right = -1;
    int leaf_class = -1;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // root at index 0
    int predict(const std::vector<double>& x) const;
};

// CART with Gini impurity on bootstrap samples.  Candidate features per
// node follow the shuffled-scan rule: features are visited in random
// order and only non-constant ones count against the max_features
// budget, so a split is always found when any informative feature
// exists.  Ties everywhere break toward the smallest class index.
class RandomForest {
public:
    // y holds indices into class_labels (sorted label list); the labels
    // are needed to resolve explicit (label-keyed) class weights.
    static RandomForest train(const std::vector<std::vector<double>>& x,
                              const std::vector<int>& y,
                              const std::vector<std::string>& class_labels,
                              const RfParams& params);

    int predict(const std::vector<double>& x) const; // majority vote
    const std::vector<DecisionTree>& trees() const { return trees_; }
    int n_classes() const { return n_classes_; }

    std::vector<DecisionTree> trees_; // exposed for serialization
    int n_classes_ = 0;
};

} // namespace diffsim
