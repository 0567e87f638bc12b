#include "diffsim/background.hpp"

#include <cmath>

namespace diffsim {

ImageF render_background(const DetectorGeometry& det, const BeamModel& beam,
                         const BackgroundModel& bg, const ShotParams& shot) {
    ImageF img(det.width_px, det.height_px);
    if (shot.fluence <= 0.0)
        return img;
    const double rel_fluence = shot.fluence / beam.fluence_mean;
    for (int y = 0; y < det.height_px; ++y) {
        for (int x = 0; x < det.width_px; ++x) {
            const Vec3 pos = lab_position_mm(det, x + 0.5, y + 0.5);
            const double airpath = pos.norm();
            const double cos_tt = det.distance_mm / airpath;
            const double two_theta = std::acos(std::fmin(1.0, cos_tt));
            const double sin_theta = std::sin(0.5 * two_theta);

            double level = bg.flat_amp;
            level += bg.air_amp *
                     std::exp(-two_theta * 180.0 / M_PI / bg.air_tau_deg);
            if (sin_theta > 0.0) {
                const double d = shot.wavelength_A / (2.0 * sin_theta);
                const double dd = d - bg.water_d_A;
                level += bg.water_amp *
                         std::exp(-dd * dd / (2.0 * bg.water_sigma_A * bg.water_sigma_A));
            }
            img.at(x, y) = rel_fluence * level * cos_tt * cos_tt * cos_tt;
        }
    }
    return img;
}

} // namespace diffsim
