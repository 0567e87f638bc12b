#include "diffsim/features/glcm.hpp"

#include <cmath>
#include <stdexcept>

namespace diffsim {

std::vector<double> glcm_matrix(const ImageU8& img, int distance, int angle_deg,
                                int levels, bool symmetric, bool normalized) {
    if (distance < 1)
        throw std::invalid_argument("co-occurrence distance must be >= 1");
    if (levels < 2)
        throw std::invalid_argument("need at least 2 gray levels");

    int dx, dy;
    switch (angle_deg) {
    case 0: dx = distance; dy = 0; break;
    case 45: dx = distance; dy = -distance; break;
    case 90: dx = 0; dy = -distance; break;
    case 135: dx = -distance; dy = -distance; break;
    default:
        throw std::invalid_argument("angle must be one of 0, 45, 90, 135");
    }

    std::vector<double> mat(static_cast<std::size_t>(levels) * levels, 0.0);
    const int x_lo = dx < 0 ? -dx : 0;
    const int x_hi = dx > 0 ? img.width - dx : img.width;
    const int y_lo = dy < 0 ? -dy : 0;
    const int y_hi = dy > 0 ? img.height - dy : img.height;
    // Empty pair window: the offset walks off the image in this direction.
    if (x_lo >= x_hi || y_lo >= y_hi)
        throw std::invalid_argument("co-occurrence distance exceeds image size");
    double total = 0.0;
    for (int y = y_lo; y < y_hi; ++y)
        for (int x = x_lo; x < x_hi; ++x) {
            const int i = img.at(x, y) * levels / 256;
            const int j = img.at(x + dx, y + dy) * levels / 256;
            mat[static_cast<std::size_t>(i) * levels + j] += 1.0;
            total += 1.0;
            if (symmetric) {
                mat[static_cast<std::size_t>(j) * levels + i] += 1.0;
                total += 1.0;
            }
        }
    if (normalized && total > 0.0)
        for (double& v : mat)
            v /= total;
    return mat;
}

HaralickFeatures haralick(const std::vector<double>& p, int levels) {
    HaralickFeatures f;
    // Marginals in one pass; for a symmetric matrix both marginals agree
    // but the formulas below stay correct either way.
    std::vector<double> pi(levels, 0.0), pj(levels, 0.0);
    for (int i = 0; i < levels; ++i) {
        const double* row = &p[static_cast<std::size_t>(i) * levels];
        for (int j = 0; j < levels; ++j) {
            const double v = row[j];
            if (v == 0.0)
                continue;
            const int d = i - j;
            f.contrast += d * d * v;
            f.dissimilarity += std::abs(d) * v;
            f.homogeneity += v / (1.0 + d * d);
            f.angular_second_moment += v * v;
            pi[i] += v;
            pj[j] += v;
        }
    }
    f.energy = std::sqrt(f.angular_second_moment);

    double mu_i = 0, mu_j = 0;
    for (int i = 0; i < levels; ++i) {
        mu_i += i * pi[i];
        mu_j += i * pj[i];
    }
    double var_i = 0, var_j = 0;
    for (int i = 0; i < levels; ++i) {
        var_i += (i - mu_i) * (i - mu_i) * pi[i];
        var_j += (i - mu_j) * (i - mu_j) * pj[i];
    }
    const double denom = std::sqrt(var_i * var_j);
    if (denom <= 0.0) {
        f.correlation = 1.0; // degenerate: no gray-level variation
        return f;
    }
    double cov = 0.0;
    for (int i = 0; i < levels; ++i) {
        const double* row = &p[static_cast<std::size_t>(i) * levels];
        for (int j = 0; j < levels; ++j)
            if (row[j] != 0.0)
                cov += (i - mu_i) * (j - mu_j) * row[j];
    }
    f.correlation = cov / denom;
    return f;
}

} // namespace diffsim
