#pragma once
#include <thread>

#include <CLI11.hpp>

namespace diffsim::cli {

void setup_generate(CLI::App& app);
void setup_features(CLI::App& app);
void setup_train(CLI::App& app);
void setup_eval(CLI::App& app);
void setup_search(CLI::App& app);
void setup_preprocess(CLI::App& app);
void setup_calibrate(CLI::App& app);

// 0 or negative selects every available core.
inline int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace diffsim::cli
