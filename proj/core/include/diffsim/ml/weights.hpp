#pragma once
#include <map>
#include <string>
#include <vector>

namespace diffsim {

enum class WeightMode { kNone, kBalanced, kExplicit };

struct ClassWeights {
    WeightMode mode = WeightMode::kNone;
    // Used only in explicit mode; keyed by class label so the caller
    // never depends on class ordering.
    std::map<std::string, double> explicit_weights;
};

// Per-class-index weights for `classes` (sorted label list) given the
// training counts.  none -> all 1; balanced -> n / (k * count_c);
// explicit -> looked up by label (missing label or nonpositive weight
// is an error).
std::vector<double> resolve_class_weights(const ClassWeights& w,
                                          const std::vector<std::string>& classes,
                                          const std::vector<std::size_t>& counts);

} // namespace diffsim
