#include "diffsim/preprocess.hpp"

#include <cmath>
#include <stdexcept>

#include "diffsim/detector.hpp"

namespace diffsim {

ImageU16 scale_to_mean(const ImageU16& in, double target_mean) {
    double sum = 0.0;
    for (const auto v : in.data)
        sum += v;
    if (sum <= 0.0)
        return in;
    const double factor = target_mean * static_cast<double>(in.size()) / sum;
    ImageU16 out(in.width, in.height);
    for (std::size_t i = 0; i < in.size(); ++i) {
        double v = std::round(in.data[i] * factor);
        if (v < 0.0)
            v = 0.0;
        if (v > 65535.0)
            v = 65535.0;
        out.data[i] = static_cast<std::uint16_t>(v);
    }
    return out;
}

ImageU16 downsample_area(const ImageU16& in, int factor) {
    if (factor < 1)
        throw std::invalid_argument("downsample factor must be >= 1");
    if (factor == 1)
        return in;
    const int w = in.width / factor;
    const int h = in.height / factor;
    if (w < 1 || h < 1)
        throw std::invalid_argument("downsample factor exceeds image size");
    ImageU16 out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = 0; dy < factor; ++dy)
                for (int dx = 0; dx < factor; ++dx)
                    acc += in.at(x * factor + dx, y * factor + dy);
            out.at(x, y) = static_cast<std::uint16_t>(
                std::round(acc / (factor * factor)));
        }
    return out;
}

ImageU16 crop_window(const ImageU16& in, int x0, int y0, int w, int h) {
    if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > in.width || y0 + h > in.height)
        throw std::invalid_argument("crop window outside image");
    ImageU16 out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = in.at(x0 + x, y0 + y);
    return out;
}

ImageU8 preprocess_real(const ImageU16& in, double target_mean, int downsample,
                        int x0, int y0, int out_w, int out_h) {
    const ImageU16 scaled = scale_to_mean(in, target_mean);
    const ImageU16 small = downsample_area(scaled, downsample);
    const ImageU16 window = crop_window(small, x0, y0, out_w, out_h);
    ImageU8 out(window.width, window.height);
    for (std::size_t i = 0; i < window.size(); ++i)
        out.data[i] = compress_sqrt_value(window.data[i]);
    return out;
}

} // namespace diffsim
