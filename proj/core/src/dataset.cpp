#include "diffsim/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "diffsim/background.hpp"
#include "diffsim/detector.hpp"
#include "diffsim/pgm.hpp"
#include "diffsim/render.hpp"

namespace diffsim {

namespace {
constexpr const char* kClassNames[kNumClasses] = {"blank", "no-crystal", "weak",
                                                  "good", "strong"};
constexpr std::uint64_t kSplitSalt = 0x53504C4954ULL; // "SPLIT"
} // namespace

const char* class_name(ImageClass c) {
    return kClassNames[static_cast<int>(c)];
}

std::optional<ImageClass> class_from_name(const std::string& name) {
    for (int i = 0; i < kNumClasses; ++i)
        if (name == kClassNames[i])
            return static_cast<ImageClass>(i);
    return std::nullopt;
}

ImageClass class_for_index(std::uint64_t index) {
    return static_cast<ImageClass>(index % kNumClasses);
}

namespace {

// Budget band for a diffracting class; half-open [lo, hi).
bool budget_in_band(const ClassBands& bands, ImageClass cls, double budget) {
    switch (cls) {
    case ImageClass::kWeak:
        return budget >= bands.weak_lo && budget < bands.weak_hi;
    case ImageClass::kGood:
        return budget >= bands.weak_hi && budget < bands.good_hi;
    case ImageClass::kStrong:
        return budget >= bands.good_hi && budget < bands.strong_hi;
    default:
        return true;
    }
}

} // namespace

GeneratedImage generate_image(const SimConfig& cfg, const StructureFactorTable& table,
                              const ImageF& gain_map, std::uint64_t master_seed,
                              std::uint64_t index, ImageClass cls) {
    GeneratedImage out;
    out.label = cls;
    out.image_seed = hash_words({master_seed, stream::kImage, index});

    CrystalModel crystal = cfg.crystal;
    crystal.table = table;

    Rng shot_rng = Rng::from_words({out.image_seed, stream::kShot});
    const bool has_crystal = cls == ImageClass::kWeak || cls == ImageClass::kGood ||
                             cls == ImageClass::kStrong;

    ImageF bragg;
    for (int attempt = 0;; ++attempt) {
        if (attempt > cfg.classes.max_retries)
            throw std::runtime_error(
                std::string("no shot satisfied the budget band for class '") +
                class_name(cls) + "' after " +
                std::to_string(cfg.classes.max_retries) + " attempts");
        out.attempts = attempt + 1;
        out.shot = sample_shot(shot_rng, cfg.beam);
        if (cls == ImageClass::kBlank)
            out.shot.fluence = 0.0; // shutter closed
        if (!has_crystal) {
            out.budget_photons = 0.0;
            break;
        }
        out.shot.size_scale = sample_size_scale(shot_rng, crystal);
        bragg = render_bragg(cfg.geometry, cfg.beam, crystal, out.shot, out.image_seed);
        out.budget_photons =
            std::accumulate(bragg.data.begin(), bragg.data.end(), 0.0);
        if (budget_in_band(cfg.classes, cls, out.budget_photons))
            break;
    }

    ImageF expected = render_background(cfg.geometry, cfg.beam, cfg.background, out.shot);
    if (has_crystal)
        for (std::size_t i = 0; i < expected.size(); ++i)
            expected.data[i] += bragg.data[i];

    const ImageF blurred = apply_psf(expected, cfg.noise.psf_fwhm_px);
    const ImageU16 adu = detector_readout(blurred, cfg.noise, gain_map, out.image_seed);
    out.pixels = compress_sqrt(adu);
    return out;
}

std::array<std::size_t, 3> split_counts(std::size_t n, const SplitFractions& f) {
    const double fr[3] = {f.train, f.val, f.test};
    std::array<std::size_t, 3> counts{};
    double rem[3];
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = n * fr[i];
        counts[i] = static_cast<std::size_t>(exact);
        rem[i] = exact - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    // Hand out the leftovers by largest fractional remainder; ties fall
    // to the earlier split (train, val, test order).
    while (assigned < n) {
        int best = 0;
        for (int i = 1; i < 3; ++i)
            if (rem[i] > rem[best])
                best = i;
        ++counts[best];
        rem[best] -= 1.0;
        ++assigned;
    }
    return counts;
}

std::vector<std::string> assign_splits(const std::vector<ImageClass>& labels,
                                       const SplitFractions& fractions,
                                       std::uint64_t seed) {
    static constexpr const char* kSplitNames[3] = {"train", "val", "test"};
    std::vector<std::string> out(labels.size());
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == static_cast<ImageClass>(c))
                members.push_back(i);
        // Hash-keyed order decorrelates split membership from index.
        std::sort(members.begin(), members.end(),
                  [seed](std::size_t a, std::size_t b) {
                      const auto ka = hash_words({seed, kSplitSalt, a});
                      const auto kb = hash_words({seed, kSplitSalt, b});
                      return ka != kb ? ka < kb : a < b;
                  });
        const auto counts = split_counts(members.size(), fractions);
        std::size_t pos = 0;
        for (int s = 0; s < 3; ++s)
            for (std::size_t j = 0; j < counts[s]; ++j)
                out[members[pos++]] = kSplitNames[s];
    }
    return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write manifest: " + path);
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["index"] = e.index;
        j["file"] = e.file;
        j["label"] = e.label;
        j["split"] = e.split;
        j["budget_photons"] = e.budget_photons;
        j["fluence"] = e.fluence;
        j["wavelength_A"] = e.wavelength_A;
        // 64-bit seeds do not fit in a double; keep them as strings.
        j["image_seed"] = std::to_string(e.image_seed);
        out << j.dump() << '\n';
    }
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = nlohmann::json::parse(line);
        ManifestEntry e;
        e.index = j.at("index").get<std::uint64_t>();
        e.file = j.at("file").get<std::string>();
        e.label = j.at("label").get<std::string>();
        e.split = j.at("split").get<std::string>();
        e.budget_photons = j.at("budget_photons").get<double>();
        e.fluence = j.at("fluence").get<double>();
        e.wavelength_A = j.at("wavelength_A").get<double>();
        e.image_seed = std::stoull(j.at("image_seed").get<std::string>());
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<ManifestEntry> generate_dataset(
    const SimConfig& cfg, std::uint64_t master_seed, const std::string& out_dir,
    std::size_t count, int threads,
    const std::function<void(std::size_t, std::size_t)>& progress) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const StructureFactorTable table = build_table(cfg);
    const ImageF gain_map = make_gain_map(cfg.geometry.width_px, cfg.geometry.height_px,
                                          cfg.noise.calibration_seed,
                                          cfg.noise.gain_map_rms);

    std::vector<ManifestEntry> entries(count);
    std::vector<ImageClass> labels(count);
    for (std::size_t i = 0; i < count; ++i)
        labels[i] = class_for_index(i);
    const auto splits = assign_splits(labels, cfg.splits, master_seed);

    if (threads < 1)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                auto img = generate_image(cfg, table, gain_map, master_seed, i, labels[i]);
                char name[32];
                std::snprintf(name, sizeof(name), "img_%06zu.pgm", i);
                write_pgm((fs::path(out_dir) / name).string(), img.pixels);
                ManifestEntry e;
                e.index = i;
                e.file = name;
                e.label = class_name(img.label);
                e.split = splits[i];
                e.budget_photons = img.budget_photons;
                e.fluence = img.shot.fluence;
                e.wavelength_A = img.shot.wavelength_A;
                e.image_seed = img.image_seed;
                entries[i] = std::move(e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress)
                progress(d, count);
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);

    write_manifest((fs::path(out_dir) / "manifest.jsonl").string(), entries);
    save_config((fs::path(out_dir) / "config.json").string(), cfg);
    return entries;
}

} // namespace diffsim
