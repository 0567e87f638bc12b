#pragma once
#include <vector>

#include "diffsim/image.hpp"

namespace diffsim {

struct GlcmParams {
    std::vector<int> distances{5};
    std::vector<int> angles_deg{0}; // subset of {0, 45, 90, 135}
    int levels = 256;
    bool symmetric = true;
    bool normalized = true;
};

// Co-occurrence matrix for one (distance, angle) pair, row-major
// levels x levels.  Angles follow the usual image convention (x right,
// y down, angles counterclockwise): 0 -> (+d,0), 45 -> (+d,-d),
// 90 -> (0,-d), 135 -> (-d,-d).  Symmetric mode adds the transpose;
// normalized mode divides by the total count.
std::vector<double> glcm_matrix(const ImageU8& img, int distance, int angle_deg,
                                int levels = 256, bool symmetric = true,
                                bool normalized = true);

struct HaralickFeatures {
    double contrast = 0;
    double dissimilarity = 0;
    double homogeneity = 0;
    double angular_second_moment = 0;
    double energy = 0;
    double correlation = 0;
};

// The six scalar summaries of a normalized co-occurrence matrix.  A
// degenerate matrix (zero marginal variance) has correlation 1.
HaralickFeatures haralick(const std::vector<double>& p, int levels);

} // namespace diffsim
