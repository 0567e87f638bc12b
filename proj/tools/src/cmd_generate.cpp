#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "commands.hpp"
#include "diffsim/config.hpp"
#include "diffsim/dataset.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string config;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t count = 0;
    int threads = 0;
    bool quiet = false;
};

void run(const Options& opt) {
    const SimConfig cfg =
        opt.config.empty() ? default_config() : load_config(opt.config);
    std::filesystem::create_directories(opt.out);

    const int threads = resolve_threads(opt.threads);
    const auto t0 = std::chrono::steady_clock::now();
    auto progress = [&](std::size_t done, std::size_t total) {
        if (opt.quiet)
            return;
        if (done % 50 == 0 || done == total)
            std::cerr << "\rgenerate: " << done << '/' << total << std::flush;
    };
    const auto entries =
        generate_dataset(cfg, opt.seed, opt.out, opt.count, threads, progress);
    const auto t1 = std::chrono::steady_clock::now();
    if (!opt.quiet)
        std::cerr << '\n';

    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cout << "wrote " << entries.size() << " images to " << opt.out << " in "
              << secs << " s (" << threads << " threads)\n";
}

} // namespace

void setup_generate(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "generate", "Render a labeled synthetic dataset (PGM + JSONL manifest)");
    cmd->add_option("--config", opt->config, "Simulation config JSON (defaults used when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt->seed, "Master seed; fixes every image byte-for-byte");
    cmd->add_option("--out", opt->out, "Output directory")->required();
    cmd->add_option("--count", opt->count, "Number of images (classes cycle round-robin)")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opt->threads, "Worker threads (0 = all cores)");
    cmd->add_flag("--quiet", opt->quiet, "Suppress progress output");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
