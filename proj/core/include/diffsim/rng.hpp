#pragma once
#include <array>
#include <cstdint>
#include <initializer_list>

namespace diffsim {

// Named substream tags.  A stream is identified by hashing an ordered
// word list, e.g. {master_seed, stream::kShot, image_index} or
// {image_seed, stream::kPoisson, pixel_index}.
namespace stream {
inline constexpr std::uint64_t kShot = 1;      // orientation / wavelength / fluence
inline constexpr std::uint64_t kMosaic = 2;    // domain misorientations
inline constexpr std::uint64_t kSpectral = 3;  // extra wavelength samples
inline constexpr std::uint64_t kPoisson = 4;   // photon counting, per pixel
inline constexpr std::uint64_t kRead = 5;      // readout noise, per pixel
inline constexpr std::uint64_t kGain = 6;      // calibration gain map
inline constexpr std::uint64_t kImage = 7;     // master -> per-image seed
} // namespace stream

// SplitMix64 finalizer.  Also serves as the word hash used to derive
// independent named substreams from (seed, index, tag...) tuples.
std::uint64_t mix64(std::uint64_t x);

// Fold an ordered list of words into one well-mixed 64-bit value.
// Order matters: {a,b} and {b,a} land in unrelated streams.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words);

// xoshiro256++ with distribution samplers implemented in-repo so that
// streams are reproducible bit-for-bit regardless of standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Substream constructor: hash the words, then seed.  The convention
    // used throughout: {master_seed, image_index} for per-image streams,
    // {image_seed, tag, pixel_index} for per-pixel streams.
    static Rng from_words(std::initializer_list<std::uint64_t> words);

    std::uint64_t next();

    double uniform();                       // [0,1), 53-bit
    double uniform(double lo, double hi);   // [lo,hi)
    std::uint64_t uniform_int(std::uint64_t bound);  // [0,bound), unbiased

    double normal();                        // standard normal (Box-Muller)
    double normal(double mean, double sd);

    // Poisson: Knuth product below mean 10, transformed rejection (PTRD)
    // up to 1e6, rounded Gaussian above that.
    std::int64_t poisson(double mean);

private:
    std::array<std::uint64_t, 4> s_;
    double spare_ = 0.0;
    bool has_spare_ = false;

    std::int64_t poisson_knuth(double mean);
    std::int64_t poisson_ptrd(double mean);
};

} // namespace diffsim
