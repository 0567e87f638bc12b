#pragma once
#include <cstdint>

#include "diffsim/crystal.hpp"
#include "diffsim/geometry.hpp"
#include "diffsim/image.hpp"

namespace diffsim {

// FWHM (in fractional Miller units) of the main peak of the N-slit
// grating intensity sin^2(pi N x) / sin^2(pi x), found by bisection.
// N = 1 has no peak; its width is defined as 1 (the whole zone).
double tophat_fwhm(int n_cells);

// Box profile standing in for one axis of the grating: same FWHM, and
// the same full-period integral (= N), hence height N / width.
struct TophatProfile {
    double half_width; // in fractional Miller units
    double height;
    explicit TophatProfile(int n_cells);
};

// Intensity lattice factor: product of three identical box profiles
// evaluated at the fractional distance to the nearest lattice point.
double lattice_factor_tophat(const TophatProfile& p, double dh, double dk, double dl);

// Expected Bragg photons per pixel (no background, no noise).
// image_seed feeds the mosaic-domain and spectral substreams; everything
// else comes from the explicit shot parameters.
ImageF render_bragg(const DetectorGeometry& det, const BeamModel& beam,
                    const CrystalModel& crystal, const ShotParams& shot,
                    std::uint64_t image_seed);

} // namespace diffsim
