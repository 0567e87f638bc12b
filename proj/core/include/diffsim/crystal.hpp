#pragma once
#include <cstdint>
#include <string>
#include <unordered_map>

#include "diffsim/geometry.hpp"

namespace diffsim {

// Triclinic-capable unit cell; defaults to the 80 Angstrom cube used by
// the synthetic dataset.
struct UnitCell {
    double a_A = 80.0, b_A = 80.0, c_A = 80.0;
    double alpha_deg = 90.0, beta_deg = 90.0, gamma_deg = 90.0;

    // Real-space basis as columns (a, b, c); a along +x, b in the xy plane.
    Mat3 real_basis_A() const;
    // Reciprocal basis B with columns (a*, b*, c*): B^T * A = I, no 2pi.
    Mat3 reciprocal_basis_invA() const;
    double volume_A3() const;
    double d_spacing_A(int h, int k, int l) const; // 1/|B h|
};

// Squared structure-factor magnitudes keyed by Miller index.  Friedel
// pairs share one entry: keys are canonicalized so the first nonzero
// index is positive.  Missing reflections read as zero.
class StructureFactorTable {
public:
    void set(int h, int k, int l, double f2);
    double f2(int h, int k, int l) const;
    std::size_t size() const { return map_.size(); }

    const std::unordered_map<std::uint64_t, double>& entries() const { return map_; }
    static void unpack_key(std::uint64_t key, int& h, int& k, int& l);

private:
    std::unordered_map<std::uint64_t, double> map_;
};

// Random intensities with a Wilson-like resolution falloff:
// F2 ~ Exponential(mean = f2_scale * exp(-wilson_b / (2 d^2))) for every
// canonical reflection with d >= d_min, excluding (0,0,0).  Deterministic
// in the seed: reflections are visited in a fixed lexicographic order.
StructureFactorTable synth_wilson_table(std::uint64_t seed, const UnitCell& cell,
                                        double d_min_A, double f2_scale,
                                        double wilson_b_A2);

// Plain-text reflection list: "h k l F2" per line, '#' comments.
StructureFactorTable load_hkl(const std::string& path);
void save_hkl(const std::string& path, const StructureFactorTable& table);

// Everything the renderer needs to know about the sample.
struct CrystalModel {
    UnitCell cell;
    int cells_per_edge = 10;       // N in the lattice-factor tophat
    double sim_size_um = 0.1;      // size actually rendered
    double target_size_um = 30.0;  // physical size being emulated
    int mosaic_domains = 50;
    double mosaic_cap_deg = 0.5;   // full diameter of the misorientation cap
    // Shot-to-shot spread of the crystal volume in the beam: the edge
    // fraction is drawn log-uniform in [min, max] per shot.
    double size_jitter_min = 0.2;
    double size_jitter_max = 1.0;
    StructureFactorTable table;

    // Intensity scale recovering the target crystal volume: (target/sim)^3.
    double size_rescale() const {
        const double r = target_size_um / sim_size_um;
        return r * r * r;
    }
};

// Log-uniform edge fraction in [size_jitter_min, size_jitter_max]; a
// degenerate interval returns its value without consuming randomness.
double sample_size_scale(Rng& rng, const CrystalModel& crystal);

} // namespace diffsim
