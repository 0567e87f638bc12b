#pragma once
#include <optional>
#include <string>
#include <vector>

namespace diffsim {

// Rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<long>> counts;

    long row_sum(std::size_t i) const;
    long col_sum(std::size_t j) const;
    long trace() const;
    long total() const;
};

// Metrics with zero denominators are undefined, not zero.
struct ClassMetrics {
    std::optional<double> precision;
    std::optional<double> recall;
};

struct Evaluation {
    ConfusionMatrix matrix;
    std::vector<ClassMetrics> per_class;
    std::optional<double> accuracy;
};

ConfusionMatrix confusion_matrix(const std::vector<std::string>& y_true,
                                 const std::vector<std::string>& y_pred,
                                 const std::vector<std::string>& classes);

Evaluation evaluate_matrix(ConfusionMatrix m);
Evaluation evaluate(const std::vector<std::string>& y_true,
                    const std::vector<std::string>& y_pred,
                    const std::vector<std::string>& classes);

// Accuracy of the induced 2-class problem: `negative_classes` versus
// everything else (diffraction vs no diffraction).
std::optional<double> binary_collapse(
    const ConfusionMatrix& m,
    const std::vector<std::string>& negative_classes = {"blank", "no-crystal"});

// Report with the confusion matrix, per-class precision/recall, overall
// and binary-collapse accuracy; undefined metrics serialize as null.
std::string evaluation_report_json(const Evaluation& ev,
                                   std::optional<double> binary_accuracy);

} // namespace diffsim
