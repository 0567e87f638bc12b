#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "diffsim/ml/weights.hpp"

namespace diffsim {

struct SvmParams {
    double c = 1.0;
    double gamma = 0.0; // 0 = auto (1/n_features), resolved at training
    ClassWeights class_weights;
    double tolerance = 1e-3;    // KKT violation stop threshold
    long max_iterations = 1000000; // SMO pair updates per binary problem
    std::size_t cache_mb = 256; // Gram matrix / row cache bound
    bool standardize = true;    // z-score features internally
};

// One one-vs-rest subproblem: support vectors in standardized space
// with coefficients alpha_i * y_i and the bias term.
struct BinarySvm {
    std::vector<std::vector<double>> support;
    std::vector<double> coef;
    double bias = 0.0;
    long iterations = 0;
    // Dual objective sampled every 100 SMO steps (diagnostic; must be
    // non-decreasing).
    std::vector<double> dual_trace;
};

// Soft-margin RBF SVM, one-vs-rest, trained by SMO with maximal-
// violating-pair working-set selection.  Ties in the argmax over
// decision values break toward the smallest class index.
class SvmModel {
public:
    static SvmModel train(const std::vector<std::vector<double>>& x,
                          const std::vector<int>& y,
                          const std::vector<std::string>& class_labels,
                          const SvmParams& params);

    int predict(const std::vector<double>& x) const;
    // Decision value of one one-vs-rest subproblem on a raw input.
    double decision(int cls, const std::vector<double>& x) const;
    int n_classes() const { return static_cast<int>(binaries_.size()); }

    double gamma_ = 0.0; // resolved value actually used
    std::vector<double> mean_, scale_;
    std::vector<BinarySvm> binaries_;
};

} // namespace diffsim
