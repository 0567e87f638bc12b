#pragma once
#include "diffsim/geometry.hpp"
#include "diffsim/image.hpp"

namespace diffsim {

// Smooth scattering background: water ring (Gaussian in d-spacing), air
// scatter (exponential falloff in 2theta), and a flat term.  Amplitudes
// are expected photons per pixel at nominal fluence, beam centre value;
// the whole pattern scales with shot fluence and with the cos^3(2theta)
// obliquity so it vanishes for beam-off shots.
struct BackgroundModel {
    double water_amp = 32.0;
    double water_d_A = 3.4;     // ring centre
    double water_sigma_A = 0.5; // Gaussian width in d
    double air_amp = 12.0;
    double air_tau_deg = 15.0;  // 1/e angle of the air-scatter falloff
    double flat_amp = 4.0;
};

ImageF render_background(const DetectorGeometry& det, const BeamModel& beam,
                         const BackgroundModel& bg, const ShotParams& shot);

} // namespace diffsim
