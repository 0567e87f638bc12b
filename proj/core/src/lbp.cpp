#include "diffsim/features/lbp.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsim {

namespace {

struct NeighborTap {
    int ix, iy;     // integer corner offset (top-left of the 2x2 patch)
    double fx, fy;  // fractional position inside the patch
};

double quantize8(double v) {
    return std::round(v * 1e8) / 1e8;
}

} // namespace

std::vector<double> lbp_histogram(const ImageU8& img, const LbpParams& params) {
    const int P = params.points;
    const double R = params.radius;
    if (P < 4)
        throw std::invalid_argument("LBP needs at least 4 sampling points");
    if (R < 1.0)
        throw std::invalid_argument("LBP radius must be >= 1");

    std::vector<NeighborTap> taps(P);
    int margin = 0;
    for (int k = 0; k < P; ++k) {
        const double theta = 2.0 * M_PI * k / P;
        const double dx = quantize8(R * std::cos(theta));
        const double dy = quantize8(-R * std::sin(theta));
        NeighborTap& t = taps[k];
        t.ix = static_cast<int>(std::floor(dx));
        t.iy = static_cast<int>(std::floor(dy));
        t.fx = dx - t.ix;
        t.fy = dy - t.iy;
        margin = std::max({margin, -t.ix, t.ix + 1, -t.iy, t.iy + 1});
    }
    if (img.width < 2 * margin + 1 || img.height < 2 * margin + 1)
        throw std::invalid_argument("image too small for LBP neighborhood");

    std::vector<double> hist(P + 2, 0.0);
    double count = 0.0;
    for (int y = margin; y < img.height - margin; ++y) {
        for (int x = margin; x < img.width - margin; ++x) {
            const int center = img.at(x, y);
            unsigned bits = 0;
            for (int k = 0; k < P; ++k) {
                const NeighborTap& t = taps[k];
                const int x0 = x + t.ix, y0 = y + t.iy;
                const double i00 = img.at(x0, y0) > center ? 1.0 : 0.0;
                const double i10 = img.at(x0 + 1, y0) > center ? 1.0 : 0.0;
                const double i01 = img.at(x0, y0 + 1) > center ? 1.0 : 0.0;
                const double i11 = img.at(x0 + 1, y0 + 1) > center ? 1.0 : 0.0;
                const double v = (1.0 - t.fx) * (1.0 - t.fy) * i00 +
                                 t.fx * (1.0 - t.fy) * i10 +
                                 (1.0 - t.fx) * t.fy * i01 + t.fx * t.fy * i11;
                if (v >= 0.5)
                    bits |= 1u << k;
            }
            // Uniformity: circular 0<->1 transitions.
            int transitions = 0;
            for (int k = 0; k < P; ++k) {
                const unsigned a = (bits >> k) & 1u;
                const unsigned b = (bits >> ((k + 1) % P)) & 1u;
                transitions += static_cast<int>(a ^ b);
            }
            const int bin = transitions <= 2
                                ? static_cast<int>(__builtin_popcount(bits))
                                : P + 1;
            hist[bin] += 1.0;
            count += 1.0;
        }
    }
    if (count > 0.0)
        for (double& h : hist)
            h /= count;
    return hist;
}

} // namespace diffsim
