#include "diffsim/rng.hpp"

#include <cmath>

namespace diffsim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
    std::uint64_t acc = 0x6A09E667F3BCC909ULL; // sqrt(2) fraction bits
    for (std::uint64_t w : words)
        acc = mix64(acc ^ w);
    return acc;
}

Rng::Rng(std::uint64_t seed) {
    // Expand one word into the full 256-bit state via SplitMix64.
    std::uint64_t sm = seed;
    for (auto& word : s_)
        word = mix64(sm++);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = 1; // all-zero state is the one forbidden xoshiro state
}

Rng Rng::from_words(std::initializer_list<std::uint64_t> words) {
    return Rng(hash_words(words));
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
    if (bound < 2)
        return 0;
    // Rejection above the largest multiple of bound to avoid modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = next();
    } while (x > limit);
    return x % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; 1-u keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double Rng::normal(double mean, double sd) {
    return mean + sd * normal();
}

std::int64_t Rng::poisson(double mean) {
    if (mean <= 0.0)
        return 0;
    if (mean < 10.0)
        return poisson_knuth(mean);
    if (mean <= 1e6)
        return poisson_ptrd(mean);
    const double x = std::round(normal(mean, std::sqrt(mean)));
    return x < 0.0 ? 0 : static_cast<std::int64_t>(x);
}

std::int64_t Rng::poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

// Hoermann's PTRD transformed-rejection sampler, valid for mean >= 10.
std::int64_t Rng::poisson_ptrd(double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mean);

    for (;;) {
        double v = uniform();
        double u;
        if (v <= 0.86 * v_r) {
            // Fast path: inverse of the dominating density, no rejection.
            u = v / v_r - 0.43;
            return static_cast<std::int64_t>(
                std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
        }
        if (v >= v_r) {
            u = uniform() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = uniform() * v_r;
        }
        const double us = 0.5 - std::fabs(u);
        if (us < 0.013 && v > us)
            continue;
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        if (k >= 10.0) {
            if (std::log(v * smu) <= (k + 0.5) * std::log(mean / k) - mean -
                                         std::log(std::sqrt(2.0 * M_PI)) + k -
                                         (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k)
                return static_cast<std::int64_t>(k);
        } else if (k >= 0.0) {
            if (std::log(v) <= k * log_mu - mean - std::lgamma(k + 1.0))
                return static_cast<std::int64_t>(k);
        }
    }
}

} // namespace diffsim
