#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "diffsim/config.hpp"
#include "diffsim/dataset.hpp"
#include "diffsim/render.hpp"
#include "diffsim/search/search.hpp"

namespace diffsim::cli {

namespace {

struct Options {
    std::string config;
    std::uint64_t seed = 1;
    int shots = 200;
    int class_pilot = 10;
    int threads = 0;
    std::string out;
};

double percentile(const std::vector<double>& sorted_vals, double p) {
    if (sorted_vals.empty())
        return 0.0;
    const double pos = p / 100.0 * static_cast<double>(sorted_vals.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted_vals.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted_vals[lo] * (1.0 - frac) + sorted_vals[hi] * frac;
}

void run(const Options& opt) {
    SimConfig cfg = opt.config.empty() ? default_config() : load_config(opt.config);
    const StructureFactorTable table = build_table(cfg);
    CrystalModel crystal = cfg.crystal;
    crystal.table = table;
    const int threads = resolve_threads(opt.threads);

    // Unconstrained crystal shots: the budget distribution the class
    // bands will be cut from.  Uses the same per-index seed scheme as
    // the generator so the pilot matches production statistics.
    std::vector<double> budgets(static_cast<std::size_t>(opt.shots));
    detail::parallel_indices(budgets.size(), threads, [&](std::size_t i) {
        const std::uint64_t image_seed =
            hash_words({opt.seed, stream::kImage, static_cast<std::uint64_t>(i)});
        Rng shot_rng = Rng::from_words({image_seed, stream::kShot});
        ShotParams shot = sample_shot(shot_rng, cfg.beam);
        shot.size_scale = sample_size_scale(shot_rng, crystal);
        const ImageF bragg =
            render_bragg(cfg.geometry, cfg.beam, crystal, shot, image_seed);
        double sum = 0;
        for (const double v : bragg.data)
            sum += v;
        budgets[i] = sum;
    });

    std::vector<double> positive;
    for (const double b : budgets)
        if (b > 0)
            positive.push_back(b);
    std::sort(positive.begin(), positive.end());
    if (positive.size() < 10)
        throw std::runtime_error("too few diffracting pilot shots; check the beam");

    ClassBands bands = cfg.classes;
    bands.weak_lo = percentile(positive, 1.0);
    bands.weak_hi = percentile(positive, 33.0);
    bands.good_hi = percentile(positive, 66.0);
    bands.strong_hi = percentile(positive, 99.0);
    cfg.classes = bands;

    // Per-class pixel statistics under the suggested bands: verifies
    // that class means are ordered and nothing saturates.
    const ImageF gain_map =
        make_gain_map(cfg.geometry.width_px, cfg.geometry.height_px,
                      cfg.noise.calibration_seed, cfg.noise.gain_map_rms);
    const std::size_t per_class = static_cast<std::size_t>(opt.class_pilot);
    std::vector<double> class_mean(kNumClasses, 0.0);
    std::vector<int> class_max(kNumClasses, 0);
    std::vector<double> class_attempts(kNumClasses, 0.0);
    detail::parallel_indices(per_class * kNumClasses, threads, [&](std::size_t i) {
        const auto cls = static_cast<ImageClass>(i % kNumClasses);
        const GeneratedImage img =
            generate_image(cfg, table, gain_map, opt.seed, i, cls);
        double mean = 0;
        int peak = 0;
        for (const auto v : img.pixels.data) {
            mean += v;
            peak = std::max(peak, static_cast<int>(v));
        }
        mean /= static_cast<double>(img.pixels.data.size());
        const auto c = static_cast<std::size_t>(cls);
        class_mean[c] += mean / static_cast<double>(per_class);
        class_max[c] = std::max(class_max[c], peak);
        class_attempts[c] += img.attempts / static_cast<double>(per_class);
    });

    nlohmann::ordered_json report;
    report["shots"] = opt.shots;
    report["positive_budget_shots"] = positive.size();
    report["budget_percentiles"] = {{"p1", bands.weak_lo},
                                    {"p33", bands.weak_hi},
                                    {"p66", bands.good_hi},
                                    {"p99", bands.strong_hi}};
    report["suggested_bands"] = {{"weak_lo", bands.weak_lo},
                                 {"weak_hi", bands.weak_hi},
                                 {"good_hi", bands.good_hi},
                                 {"strong_hi", bands.strong_hi}};
    nlohmann::ordered_json means, maxes, attempts;
    for (int c = 0; c < kNumClasses; ++c) {
        const char* name = class_name(static_cast<ImageClass>(c));
        means[name] = class_mean[static_cast<std::size_t>(c)];
        maxes[name] = class_max[static_cast<std::size_t>(c)];
        attempts[name] = class_attempts[static_cast<std::size_t>(c)];
    }
    report["class_pixel_mean_8bit"] = means;
    report["class_pixel_max_8bit"] = maxes;
    report["class_mean_attempts"] = attempts;
    std::cout << report.dump(2) << '\n';

    if (!opt.out.empty()) {
        save_config(opt.out, cfg);
        std::cout << "wrote calibrated config to " << opt.out << '\n';
    }
}

} // namespace

void setup_calibrate(CLI::App& app) {
    auto opt = std::make_shared<Options>();
    auto* cmd = app.add_subcommand(
        "calibrate",
        "Pilot run: derive class budget bands and report per-class pixel stats");
    cmd->add_option("--config", opt->config, "Base config JSON (defaults when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt->seed, "Pilot seed");
    cmd->add_option("--shots", opt->shots, "Unconstrained crystal shots to sample")
        ->check(CLI::Range(10, 1000000));
    cmd->add_option("--class-pilot", opt->class_pilot,
                    "Images per class for the pixel statistics")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opt->threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", opt->out, "Write the adjusted config JSON here");
    cmd->callback([opt] { run(*opt); });
}

} // namespace diffsim::cli
