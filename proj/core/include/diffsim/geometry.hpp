#pragma once
#include <cmath>

#include "diffsim/rng.hpp"

namespace diffsim {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this / norm(); }
};

inline Vec3 operator*(double k, const Vec3& v) { return v * k; }

// Row-major 3x3 matrix; enough linear algebra for rotations and bases.
struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    static Mat3 identity();
    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

    Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    Vec3 operator*(const Vec3& v) const;
    Mat3 operator*(const Mat3& o) const;
    Mat3 transpose() const;
    double det() const;
    Mat3 inverse() const; // cofactor inverse; caller guarantees det != 0
};

// Unit quaternion -> rotation matrix (input need not be normalized).
Mat3 rotation_from_quaternion(double w, double x, double y, double z);
Mat3 rotation_about_axis(const Vec3& axis_unit, double angle_rad);

// Angle of a rotation matrix in [0, pi], from the trace.
double rotation_angle_rad(const Mat3& r);

// Haar-uniform random rotation (quaternion from four Gaussians).
Mat3 sample_uniform_rotation(Rng& rng);

// Uniform point on the unit sphere.
Vec3 sample_unit_vector(Rng& rng);

// Rotation drawn uniformly (Haar measure) from the geodesic ball of
// misorientation <= cap_diameter_deg / 2: axis uniform on the sphere,
// angle with density proportional to sin^2(a/2), inverted numerically.
Mat3 sample_mosaic_rotation(Rng& rng, double cap_diameter_deg);

// Flat detector normal to the beam (+z), origin at the panel corner.
// Pixel (px, py) = (fast, slow) indices; beam centre in pixel units.
struct DetectorGeometry {
    int width_px = 512;
    int height_px = 512;
    double pixel_mm = 0.172;
    double distance_mm = 80.0;
    double center_x_px = 256.0;
    double center_y_px = 256.0;
    int oversample = 2; // subpixel grid per axis for Bragg rendering
};

struct BeamModel {
    double fluence_mean = 1e12;        // photons per shot
    double fluence_rms = 1e11;         // shot-to-shot RMS, clamped at zero
    double wavelength_A = 1.5;
    double wavelength_rms_frac = 0.005;
    int spectral_samples = 1;          // wavelengths averaged per shot
    double beam_size_um = 30.0;        // square footprint edge, sets flux density
};

// Lab-frame position of a continuous pixel coordinate, in mm.
Vec3 lab_position_mm(const DetectorGeometry& det, double px, double py);

// q = (s_hat - s0_hat) / lambda toward pixel (px, py); units 1/Angstrom,
// so |q| = 2 sin(theta) / lambda directly matches reciprocal-space d* .
Vec3 scattering_vector_invA(const DetectorGeometry& det, double px, double py,
                            double wavelength_A);

// Solid angle of a detector element of area_mm2 centred at (px, py):
// the point approximation area * cos^3(2theta) / distance^2.
double element_solid_angle(const DetectorGeometry& det, double px, double py,
                           double area_mm2);

// Per-shot randomness: crystal orientation, wavelength, integrated fluence,
// and how much crystalline material the delivery jet put in the beam.
struct ShotParams {
    Mat3 orientation;   // lab = orientation * crystal frame
    double wavelength_A = 1.5;
    double fluence = 0;      // photons, >= 0
    double size_scale = 1.0; // crystal edge fraction; Bragg intensity ~ cube
};

// Draw order is fixed (orientation, wavelength, fluence) so that streams
// line up across image classes.
ShotParams sample_shot(Rng& rng, const BeamModel& beam);

} // namespace diffsim
