#include "diffsim/ml/weights.hpp"

#include <stdexcept>

namespace diffsim {

std::vector<double> resolve_class_weights(const ClassWeights& w,
                                          const std::vector<std::string>& classes,
                                          const std::vector<std::size_t>& counts) {
    const std::size_t k = classes.size();
    std::vector<double> out(k, 1.0);
    switch (w.mode) {
    case WeightMode::kNone:
        return out;
    case WeightMode::kBalanced: {
        std::size_t n = 0;
        for (const auto c : counts)
            n += c;
        for (std::size_t i = 0; i < k; ++i) {
            if (counts[i] == 0)
                throw std::invalid_argument("balanced weights need every class present");
            out[i] = static_cast<double>(n) /
                     (static_cast<double>(k) * static_cast<double>(counts[i]));
        }
        return out;
    }
    case WeightMode::kExplicit:
        for (std::size_t i = 0; i < k; ++i) {
            const auto it = w.explicit_weights.find(classes[i]);
            if (it == w.explicit_weights.end())
                throw std::invalid_argument("missing explicit weight for class '" +
                                            classes[i] + "'");
            if (it->second <= 0.0)
                throw std::invalid_argument("class weights must be positive");
            out[i] = it->second;
        }
        return out;
    }
    return out;
}

} // namespace diffsim
