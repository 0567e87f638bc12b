#include "diffsim/render.hpp"

#include <cmath>
#include <vector>

namespace diffsim {

double tophat_fwhm(int n_cells) {
    if (n_cells <= 1)
        return 1.0;
    const double n = n_cells;
    const auto grating = [n](double x) {
        const double s = std::sin(M_PI * x);
        const double sn = std::sin(M_PI * n * x);
        return (sn * sn) / (s * s);
    };
    // Peak value is N^2 at x = 0; first zero at x = 1/N brackets the
    // half-maximum crossing.
    const double half = 0.5 * n * n;
    double lo = 1e-12, hi = 1.0 / n;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (grating(mid) > half ? lo : hi) = mid;
    }
    return lo + hi; // 2 * x_half
}

TophatProfile::TophatProfile(int n_cells) {
    const double w = tophat_fwhm(n_cells);
    half_width = 0.5 * w;
    height = static_cast<double>(n_cells < 1 ? 1 : n_cells) / w;
}

double lattice_factor_tophat(const TophatProfile& p, double dh, double dk, double dl) {
    if (std::fabs(dh) >= p.half_width || std::fabs(dk) >= p.half_width ||
        std::fabs(dl) >= p.half_width)
        return 0.0;
    return p.height * p.height * p.height;
}

ImageF render_bragg(const DetectorGeometry& det, const BeamModel& beam,
                    const CrystalModel& crystal, const ShotParams& shot,
                    std::uint64_t image_seed) {
    ImageF img(det.width_px, det.height_px);
    if (shot.fluence <= 0.0)
        return img; // beam off or fully attenuated

    const TophatProfile prof(crystal.cells_per_edge);
    const double hw = prof.half_width;

    // Rotated real-space basis vectors per mosaic domain.  Fractional
    // Miller coordinates of a scattering vector q are then plain dot
    // products: h = a_lab . q, since B^-1 R^T = (R A)^T.
    Rng mosaic = Rng::from_words({image_seed, stream::kMosaic});
    const Mat3 basis = crystal.cell.real_basis_A();
    const int n_domains = crystal.mosaic_domains < 1 ? 1 : crystal.mosaic_domains;
    std::vector<Vec3> a_lab(n_domains), b_lab(n_domains), c_lab(n_domains);
    for (int d = 0; d < n_domains; ++d) {
        const Mat3 rot =
            sample_mosaic_rotation(mosaic, crystal.mosaic_cap_deg) * shot.orientation;
        a_lab[d] = rot * basis.col(0);
        b_lab[d] = rot * basis.col(1);
        c_lab[d] = rot * basis.col(2);
    }

    std::vector<double> wavelengths;
    if (beam.spectral_samples <= 1) {
        wavelengths.push_back(shot.wavelength_A);
    } else {
        Rng spectral = Rng::from_words({image_seed, stream::kSpectral});
        for (int i = 0; i < beam.spectral_samples; ++i)
            wavelengths.push_back(spectral.normal(
                shot.wavelength_A, beam.wavelength_rms_frac * shot.wavelength_A));
    }

    const int os = det.oversample < 1 ? 1 : det.oversample;
    const double steps =
        static_cast<double>(os) * os * n_domains * wavelengths.size();
    const double pixel_area_mm2 = det.pixel_mm * det.pixel_mm;
    constexpr double r_e_sqr_m2 = 7.94079248e-30; // classical electron radius^2
    const double beam_area_m2 =
        (beam.beam_size_um * 1e-6) * (beam.beam_size_um * 1e-6);
    const double flux_per_m2 = shot.fluence / beam_area_m2;
    // The shot's crystal volume scales the intensity by the cubed edge
    // fraction; height^3 is common to every accepted lattice point.
    const double volume_scale =
        shot.size_scale * shot.size_scale * shot.size_scale;
    const double scale = r_e_sqr_m2 * flux_per_m2 * crystal.size_rescale() *
                         volume_scale * prof.height * prof.height * prof.height /
                         steps;

    const double dist2 = det.distance_mm * det.distance_mm;
    for (int y = 0; y < det.height_px; ++y) {
        for (int x = 0; x < det.width_px; ++x) {
            double acc = 0.0;
            for (int sy = 0; sy < os; ++sy) {
                for (int sx = 0; sx < os; ++sx) {
                    const double px = x + (sx + 0.5) / os;
                    const double py = y + (sy + 0.5) / os;
                    const Vec3 pos = lab_position_mm(det, px, py);
                    const double airpath = pos.norm();
                    const double cos_tt = det.distance_mm / airpath; // cos(2theta)
                    const double omega =
                        pixel_area_mm2 * cos_tt * cos_tt * cos_tt / dist2;
                    const double polar = 0.5 * (1.0 + cos_tt * cos_tt); // unpolarized
                    const Vec3 s_hat = pos / airpath;

                    double f2_sum = 0.0;
                    for (double wl : wavelengths) {
                        const Vec3 q{s_hat.x / wl, s_hat.y / wl,
                                     (s_hat.z - 1.0) / wl};
                        for (int d = 0; d < n_domains; ++d) {
                            const double h = a_lab[d].dot(q);
                            const double h0 = std::ceil(h - 0.5);
                            if (std::fabs(h - h0) >= hw)
                                continue;
                            const double k = b_lab[d].dot(q);
                            const double k0 = std::ceil(k - 0.5);
                            if (std::fabs(k - k0) >= hw)
                                continue;
                            const double l = c_lab[d].dot(q);
                            const double l0 = std::ceil(l - 0.5);
                            if (std::fabs(l - l0) >= hw)
                                continue;
                            f2_sum += crystal.table.f2(static_cast<int>(h0),
                                                       static_cast<int>(k0),
                                                       static_cast<int>(l0));
                        }
                    }
                    acc += omega * polar * f2_sum;
                }
            }
            img.at(x, y) = scale * acc;
        }
    }
    return img;
}

} // namespace diffsim
