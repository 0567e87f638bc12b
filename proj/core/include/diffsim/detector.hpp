#pragma once
#include <cstdint>

#include "diffsim/image.hpp"
#include "diffsim/rng.hpp"

namespace diffsim {

// Separable Gaussian point-spread blur on the expected-photon image.
// sigma = fwhm / 2.3548, kernel truncated at 4 sigma, zero padding at
// the borders.  fwhm <= 0 is the identity.
ImageF apply_psf(const ImageF& in, double fwhm_px);

// Per-pixel multiplicative gain calibration error, mean 1.  Fixed by the
// calibration seed, independent of any image: the same map is applied to
// every shot of a dataset, like a real miscalibrated detector.
ImageF make_gain_map(int width, int height, std::uint64_t calibration_seed,
                     double rms);

struct NoiseModel {
    double gain_adu_per_photon = 1.0; // one pixel level change per photon
    double gain_map_rms = 0.04;        // per-pixel calibration error
    double read_noise_adu = 3.0;
    double offset_adu = 10.0;
    double psf_fwhm_px = 1.0;
    int saturation_adu = 65025;
    std::uint64_t calibration_seed = 0xCA11B8A7E; // gain-map seed
};

// Counting + readout: ADU = Poisson(mean) * gain * gain_map + N(0, read)
// + offset, rounded half away from zero, clamped to [0, saturation].
// Per-pixel substreams make the result independent of evaluation order.
ImageU16 detector_readout(const ImageF& expected_photons, const NoiseModel& noise,
                          const ImageF& gain_map, std::uint64_t image_seed);

// 16 -> 8 bit: round(sqrt(adu)); the saturation value 65025 maps to 255.
ImageU8 compress_sqrt(const ImageU16& in);
std::uint8_t compress_sqrt_value(std::uint16_t adu);

} // namespace diffsim
