#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diffsim/config.hpp"
#include "diffsim/image.hpp"

namespace diffsim {

// blank        beam off, nothing on the detector but readout noise
// no-crystal   beam on, background only
// weak/good/strong   diffracting crystal, binned by total expected
//                    Bragg photons (half-open bands from ClassBands)
enum class ImageClass { kBlank = 0, kNoCrystal, kWeak, kGood, kStrong };
inline constexpr int kNumClasses = 5;

const char* class_name(ImageClass c);
std::optional<ImageClass> class_from_name(const std::string& name);

// Classes are assigned round-robin so an image depends only on its index.
ImageClass class_for_index(std::uint64_t index);

struct GeneratedImage {
    ImageU8 pixels;
    ImageClass label = ImageClass::kBlank;
    double budget_photons = 0; // total expected Bragg photons
    ShotParams shot;
    std::uint64_t image_seed = 0;
    int attempts = 1; // shots sampled until the budget landed in band
};

// Full per-image pipeline, deterministic in (cfg, master_seed, index).
// Budget classes resample the shot until the budget falls in the class
// band; throws after cfg.classes.max_retries misses.
GeneratedImage generate_image(const SimConfig& cfg, const StructureFactorTable& table,
                              const ImageF& gain_map, std::uint64_t master_seed,
                              std::uint64_t index, ImageClass cls);

struct ManifestEntry {
    std::uint64_t index = 0;
    std::string file;
    std::string label;
    std::string split;
    double budget_photons = 0;
    double fluence = 0;
    double wavelength_A = 0;
    std::uint64_t image_seed = 0;
};

// Largest-remainder apportionment of n into (train, val, test).
std::array<std::size_t, 3> split_counts(std::size_t n, const SplitFractions& f);

// Per-class largest-remainder counts; members ordered by a seed-keyed
// hash so the assignment is deterministic but uncorrelated with index.
std::vector<std::string> assign_splits(const std::vector<ImageClass>& labels,
                                       const SplitFractions& fractions,
                                       std::uint64_t seed);

// One JSON object per line, fixed key order:
// index, file, label, split, budget_photons, fluence, wavelength_A, image_seed.
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::string& path);

// Renders `count` images (classes round-robin) into out_dir as PGM files
// plus manifest.jsonl and the effective config.json.  Output bytes are
// identical for any thread count.
std::vector<ManifestEntry> generate_dataset(
    const SimConfig& cfg, std::uint64_t master_seed, const std::string& out_dir,
    std::size_t count, int threads,
    const std::function<void(std::size_t done, std::size_t total)>& progress = {});

} // namespace diffsim
