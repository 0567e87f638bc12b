#pragma once
#include <cstdint>
#include <string>

#include "diffsim/background.hpp"
#include "diffsim/crystal.hpp"
#include "diffsim/detector.hpp"
#include "diffsim/geometry.hpp"

namespace diffsim {

// Synthetic reflection-table parameters (used when no hkl_file is given).
struct StructureFactorParams {
    std::uint64_t seed = 7;
    double d_min_A = 2.0;
    double f2_scale = 2e6; // mean F^2 at low resolution, electrons^2
    double wilson_b_A2 = 30.0;
    std::string hkl_file; // when set, load this instead of synthesizing
};

// Class-defining ranges of the per-image budget (total expected Bragg
// photons).  Half-open bands: weak [weak_lo, weak_hi), good [weak_hi,
// good_hi), strong [good_hi, strong_hi).  Defaults come from a pilot
// calibration (1st/33rd/66th/99th percentiles of 200 unconstrained
// shots), so each band is hit roughly every third attempt.
struct ClassBands {
    double weak_lo = 1.5e6;
    double weak_hi = 7.5e6;
    double good_hi = 4.0e7;
    double strong_hi = 1.8e8;
    int max_retries = 1000; // resampling attempts before giving up
};

struct SplitFractions {
    double train = 0.4;
    double val = 0.096;
    double test = 0.504;
};

struct SimConfig {
    DetectorGeometry geometry;
    BeamModel beam;
    CrystalModel crystal; // table left empty; built from sf below
    StructureFactorParams sf;
    BackgroundModel background;
    NoiseModel noise;
    ClassBands classes;
    SplitFractions splits;
};

SimConfig default_config();
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);
void save_config(const std::string& path, const SimConfig& cfg);
std::string config_to_json(const SimConfig& cfg);

// Reflection table per the config: loaded from sf.hkl_file when given,
// otherwise synthesized deterministically from sf.seed.
StructureFactorTable build_table(const SimConfig& cfg);

} // namespace diffsim
