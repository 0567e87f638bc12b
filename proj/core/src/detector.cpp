#include "diffsim/detector.hpp"

#include <cmath>
#include <vector>

namespace diffsim {

ImageF apply_psf(const ImageF& in, double fwhm_px) {
    if (fwhm_px <= 0.0)
        return in;
    const double sigma = fwhm_px / 2.3548;
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    if (radius < 1)
        return in;
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        kernel[j + radius] = std::exp(-0.5 * j * j / (sigma * sigma));
        sum += kernel[j + radius];
    }
    for (double& k : kernel)
        k /= sum;

    // Horizontal then vertical pass; out-of-frame samples read as zero.
    ImageF tmp(in.width, in.height);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                const int xx = x + j;
                if (xx >= 0 && xx < in.width)
                    acc += kernel[j + radius] * in.at(xx, y);
            }
            tmp.at(x, y) = acc;
        }
    ImageF out(in.width, in.height);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                const int yy = y + j;
                if (yy >= 0 && yy < in.height)
                    acc += kernel[j + radius] * tmp.at(x, yy);
            }
            out.at(x, y) = acc;
        }
    return out;
}

ImageF make_gain_map(int width, int height, std::uint64_t calibration_seed,
                     double rms) {
    ImageF map(width, height, 1.0);
    if (rms <= 0.0)
        return map;
    for (std::size_t i = 0; i < map.size(); ++i) {
        Rng rng = Rng::from_words({calibration_seed, stream::kGain, i});
        map.data[i] = rng.normal(1.0, rms);
    }
    return map;
}

ImageU16 detector_readout(const ImageF& expected_photons, const NoiseModel& noise,
                          const ImageF& gain_map, std::uint64_t image_seed) {
    ImageU16 out(expected_photons.width, expected_photons.height);
    const double sat = static_cast<double>(noise.saturation_adu);
    for (std::size_t i = 0; i < expected_photons.size(); ++i) {
        Rng count_rng = Rng::from_words({image_seed, stream::kPoisson, i});
        Rng read_rng = Rng::from_words({image_seed, stream::kRead, i});
        const auto photons = count_rng.poisson(expected_photons.data[i]);
        double adu = static_cast<double>(photons) * noise.gain_adu_per_photon *
                         gain_map.data[i] +
                     read_rng.normal(0.0, noise.read_noise_adu) + noise.offset_adu;
        adu = std::round(adu); // half away from zero
        if (adu < 0.0)
            adu = 0.0;
        if (adu > sat)
            adu = sat;
        out.data[i] = static_cast<std::uint16_t>(adu);
    }
    return out;
}

std::uint8_t compress_sqrt_value(std::uint16_t adu) {
    const double v = std::round(std::sqrt(static_cast<double>(adu)));
    return static_cast<std::uint8_t>(v > 255.0 ? 255.0 : v);
}

ImageU8 compress_sqrt(const ImageU16& in) {
    ImageU8 out(in.width, in.height);
    for (std::size_t i = 0; i < in.size(); ++i)
        out.data[i] = compress_sqrt_value(in.data[i]);
    return out;
}

} // namespace diffsim
