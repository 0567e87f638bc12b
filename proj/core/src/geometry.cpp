#include "diffsim/geometry.hpp"

namespace diffsim {

Mat3 Mat3::identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
}

Mat3 Mat3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 r;
    r.m[0][0] = c0.x; r.m[0][1] = c1.x; r.m[0][2] = c2.x;
    r.m[1][0] = c0.y; r.m[1][1] = c1.y; r.m[1][2] = c2.y;
    r.m[2][0] = c0.z; r.m[2][1] = c1.z; r.m[2][2] = c2.z;
    return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i][j] = m[j][i];
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 Mat3::inverse() const {
    const double d = det();
    Mat3 r;
    r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return r;
}

Mat3 rotation_from_quaternion(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    Mat3 r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - w * z);
    r.m[0][2] = 2 * (x * z + w * y);
    r.m[1][0] = 2 * (x * y + w * z);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - w * x);
    r.m[2][0] = 2 * (x * z - w * y);
    r.m[2][1] = 2 * (y * z + w * x);
    r.m[2][2] = 1 - 2 * (x * x + y * y);
    return r;
}

Mat3 rotation_about_axis(const Vec3& axis_unit, double angle_rad) {
    const double h = 0.5 * angle_rad;
    const double s = std::sin(h);
    return rotation_from_quaternion(std::cos(h), s * axis_unit.x, s * axis_unit.y,
                                    s * axis_unit.z);
}

double rotation_angle_rad(const Mat3& r) {
    const double tr = r.m[0][0] + r.m[1][1] + r.m[2][2];
    double c = (tr - 1.0) / 2.0;
    c = std::fmax(-1.0, std::fmin(1.0, c));
    return std::acos(c);
}

Mat3 sample_uniform_rotation(Rng& rng) {
    // Four iid Gaussians normalized give a Haar-uniform unit quaternion.
    const double w = rng.normal();
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    return rotation_from_quaternion(w, x, y, z);
}

Vec3 sample_unit_vector(Rng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const double r = std::sqrt(std::fmax(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Mat3 sample_mosaic_rotation(Rng& rng, double cap_diameter_deg) {
    const double a_max = 0.5 * cap_diameter_deg * M_PI / 180.0;
    if (a_max <= 0.0)
        return Mat3::identity();
    const Vec3 axis = sample_unit_vector(rng);
    // Haar measure on the ball of radius a_max: CDF(a) = (a - sin a) / C.
    const double u = rng.uniform();
    const double target = u * (a_max - std::sin(a_max));
    double a = a_max * std::cbrt(u); // small-angle guess, CDF ~ a^3/6
    double lo = 0.0, hi = a_max;
    for (int it = 0; it < 60; ++it) {
        const double f = (a - std::sin(a)) - target;
        (f > 0 ? hi : lo) = a;
        const double df = 1.0 - std::cos(a);
        double step = df > 1e-18 ? a - f / df : 0.5 * (lo + hi);
        if (step <= lo || step >= hi)
            step = 0.5 * (lo + hi); // Newton left the bracket; bisect
        if (std::fabs(step - a) < 1e-15)
            break;
        a = step;
    }
    return rotation_about_axis(axis, a);
}

Vec3 lab_position_mm(const DetectorGeometry& det, double px, double py) {
    return {(px - det.center_x_px) * det.pixel_mm,
            (py - det.center_y_px) * det.pixel_mm, det.distance_mm};
}

Vec3 scattering_vector_invA(const DetectorGeometry& det, double px, double py,
                            double wavelength_A) {
    const Vec3 s_hat = lab_position_mm(det, px, py).normalized();
    const Vec3 s0_hat{0, 0, 1};
    return (s_hat - s0_hat) / wavelength_A;
}

double element_solid_angle(const DetectorGeometry& det, double px, double py,
                           double area_mm2) {
    const Vec3 p = lab_position_mm(det, px, py);
    const double cos_tt = det.distance_mm / p.norm();
    return area_mm2 * cos_tt * cos_tt * cos_tt / (det.distance_mm * det.distance_mm);
}

ShotParams sample_shot(Rng& rng, const BeamModel& beam) {
    ShotParams s;
    s.orientation = sample_uniform_rotation(rng);
    s.wavelength_A =
        rng.normal(beam.wavelength_A, beam.wavelength_rms_frac * beam.wavelength_A);
    s.fluence = std::fmax(0.0, rng.normal(beam.fluence_mean, beam.fluence_rms));
    return s;
}

} // namespace diffsim
