#include "diffsim/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace diffsim {

long ConfusionMatrix::row_sum(std::size_t i) const {
    long s = 0;
    for (const long v : counts[i])
        s += v;
    return s;
}

long ConfusionMatrix::col_sum(std::size_t j) const {
    long s = 0;
    for (const auto& row : counts)
        s += row[j];
    return s;
}

long ConfusionMatrix::trace() const {
    long s = 0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        s += counts[i][i];
    return s;
}

long ConfusionMatrix::total() const {
    long s = 0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        s += row_sum(i);
    return s;
}

ConfusionMatrix confusion_matrix(const std::vector<std::string>& y_true,
                                 const std::vector<std::string>& y_pred,
                                 const std::vector<std::string>& classes) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("y_true and y_pred length mismatch");
    ConfusionMatrix m;
    m.classes = classes;
    m.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));
    const auto index = [&classes](const std::string& label) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end())
            throw std::invalid_argument("label outside class list: " + label);
        return static_cast<std::size_t>(it - classes.begin());
    };
    for (std::size_t k = 0; k < y_true.size(); ++k)
        ++m.counts[index(y_true[k])][index(y_pred[k])];
    return m;
}

Evaluation evaluate_matrix(ConfusionMatrix m) {
    Evaluation ev;
    const std::size_t k = m.classes.size();
    ev.per_class.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        const long rs = m.row_sum(c);
        const long cs = m.col_sum(c);
        if (rs > 0)
            ev.per_class[c].recall = static_cast<double>(m.counts[c][c]) / rs;
        if (cs > 0)
            ev.per_class[c].precision = static_cast<double>(m.counts[c][c]) / cs;
    }
    const long total = m.total();
    if (total > 0)
        ev.accuracy = static_cast<double>(m.trace()) / total;
    ev.matrix = std::move(m);
    return ev;
}

Evaluation evaluate(const std::vector<std::string>& y_true,
                    const std::vector<std::string>& y_pred,
                    const std::vector<std::string>& classes) {
    return evaluate_matrix(confusion_matrix(y_true, y_pred, classes));
}

std::optional<double> binary_collapse(const ConfusionMatrix& m,
                                      const std::vector<std::string>& negative_classes) {
    const auto is_negative = [&](const std::string& label) {
        return std::find(negative_classes.begin(), negative_classes.end(), label) !=
               negative_classes.end();
    };
    long correct = 0, total = 0;
    for (std::size_t i = 0; i < m.classes.size(); ++i)
        for (std::size_t j = 0; j < m.classes.size(); ++j) {
            total += m.counts[i][j];
            if (is_negative(m.classes[i]) == is_negative(m.classes[j]))
                correct += m.counts[i][j];
        }
    if (total == 0)
        return std::nullopt;
    return static_cast<double>(correct) / total;
}

std::string evaluation_report_json(const Evaluation& ev,
                                   std::optional<double> binary_accuracy) {
    nlohmann::ordered_json j;
    j["classes"] = ev.matrix.classes;
    j["confusion_matrix"] = ev.matrix.counts;
    nlohmann::ordered_json per_class;
    for (std::size_t c = 0; c < ev.matrix.classes.size(); ++c) {
        nlohmann::ordered_json metrics;
        if (ev.per_class[c].precision)
            metrics["precision"] = *ev.per_class[c].precision;
        else
            metrics["precision"] = nullptr;
        if (ev.per_class[c].recall)
            metrics["recall"] = *ev.per_class[c].recall;
        else
            metrics["recall"] = nullptr;
        per_class[ev.matrix.classes[c]] = metrics;
    }
    j["per_class"] = per_class;
    if (ev.accuracy)
        j["accuracy"] = *ev.accuracy;
    else
        j["accuracy"] = nullptr;
    if (binary_accuracy)
        j["binary_accuracy"] = *binary_accuracy;
    else
        j["binary_accuracy"] = nullptr;
    return j.dump(2) + "\n";
}

} // namespace diffsim
