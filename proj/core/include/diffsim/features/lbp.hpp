#pragma once
#include <vector>

#include "diffsim/image.hpp"

namespace diffsim {

struct LbpParams {
    int points = 24;
    double radius = 3.0;
};

// Rotation-invariant uniform ("riu2") local binary pattern histogram,
// points+2 bins normalized to sum 1: bins 0..points count uniform codes
// by number of set bits, the last bin collects non-uniform codes.
//
// Neighbor sampling interpolates the thresholded indicator,
// 1[neighbor > center], bilinearly, and sets the bit when the
// interpolated value reaches 0.5.  Interpolating indicators instead of
// gray values keeps the operator exactly invariant under monotone
// gray-level remapping; sampling offsets are quantized to 1e-8 so
// quarter-turn symmetric neighbor sets are numerically exact.
std::vector<double> lbp_histogram(const ImageU8& img, const LbpParams& params);

} // namespace diffsim
