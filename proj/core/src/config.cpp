#include "diffsim/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace diffsim {

using nlohmann::json;

SimConfig default_config() {
    return SimConfig{};
}

namespace {

// Overlay pattern: start from defaults, override only the keys present.
template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

void parse_geometry(const json& j, DetectorGeometry& g) {
    get_if(j, "width_px", g.width_px);
    get_if(j, "height_px", g.height_px);
    get_if(j, "pixel_mm", g.pixel_mm);
    get_if(j, "distance_mm", g.distance_mm);
    get_if(j, "center_x_px", g.center_x_px);
    get_if(j, "center_y_px", g.center_y_px);
    get_if(j, "oversample", g.oversample);
}

void parse_beam(const json& j, BeamModel& b) {
    get_if(j, "fluence_mean", b.fluence_mean);
    get_if(j, "fluence_rms", b.fluence_rms);
    get_if(j, "wavelength_A", b.wavelength_A);
    get_if(j, "wavelength_rms_frac", b.wavelength_rms_frac);
    get_if(j, "spectral_samples", b.spectral_samples);
    get_if(j, "beam_size_um", b.beam_size_um);
}

void parse_crystal(const json& j, CrystalModel& c, StructureFactorParams& sf) {
    get_if(j, "a_A", c.cell.a_A);
    get_if(j, "b_A", c.cell.b_A);
    get_if(j, "c_A", c.cell.c_A);
    get_if(j, "alpha_deg", c.cell.alpha_deg);
    get_if(j, "beta_deg", c.cell.beta_deg);
    get_if(j, "gamma_deg", c.cell.gamma_deg);
    get_if(j, "cells_per_edge", c.cells_per_edge);
    get_if(j, "sim_size_um", c.sim_size_um);
    get_if(j, "target_size_um", c.target_size_um);
    get_if(j, "mosaic_domains", c.mosaic_domains);
    get_if(j, "mosaic_cap_deg", c.mosaic_cap_deg);
    get_if(j, "size_jitter_min", c.size_jitter_min);
    get_if(j, "size_jitter_max", c.size_jitter_max);
    get_if(j, "sf_seed", sf.seed);
    get_if(j, "sf_d_min_A", sf.d_min_A);
    get_if(j, "sf_f2_scale", sf.f2_scale);
    get_if(j, "sf_wilson_b_A2", sf.wilson_b_A2);
    get_if(j, "hkl_file", sf.hkl_file);
}

void parse_background(const json& j, BackgroundModel& b) {
    get_if(j, "water_amp", b.water_amp);
    get_if(j, "water_d_A", b.water_d_A);
    get_if(j, "water_sigma_A", b.water_sigma_A);
    get_if(j, "air_amp", b.air_amp);
    get_if(j, "air_tau_deg", b.air_tau_deg);
    get_if(j, "flat_amp", b.flat_amp);
}

void parse_noise(const json& j, NoiseModel& n) {
    get_if(j, "gain_adu_per_photon", n.gain_adu_per_photon);
    get_if(j, "gain_map_rms", n.gain_map_rms);
    get_if(j, "read_noise_adu", n.read_noise_adu);
    get_if(j, "offset_adu", n.offset_adu);
    get_if(j, "psf_fwhm_px", n.psf_fwhm_px);
    get_if(j, "saturation_adu", n.saturation_adu);
    get_if(j, "calibration_seed", n.calibration_seed);
}

void parse_classes(const json& j, ClassBands& c) {
    get_if(j, "weak_lo", c.weak_lo);
    get_if(j, "weak_hi", c.weak_hi);
    get_if(j, "good_hi", c.good_hi);
    get_if(j, "strong_hi", c.strong_hi);
    get_if(j, "max_retries", c.max_retries);
}

void parse_splits(const json& j, SplitFractions& s) {
    get_if(j, "train", s.train);
    get_if(j, "val", s.val);
    get_if(j, "test", s.test);
}

} // namespace

SimConfig parse_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    SimConfig cfg = default_config();
    if (j.contains("geometry"))
        parse_geometry(j.at("geometry"), cfg.geometry);
    if (j.contains("beam"))
        parse_beam(j.at("beam"), cfg.beam);
    if (j.contains("crystal"))
        parse_crystal(j.at("crystal"), cfg.crystal, cfg.sf);
    if (j.contains("background"))
        parse_background(j.at("background"), cfg.background);
    if (j.contains("noise"))
        parse_noise(j.at("noise"), cfg.noise);
    if (j.contains("classes"))
        parse_classes(j.at("classes"), cfg.classes);
    if (j.contains("splits"))
        parse_splits(j.at("splits"), cfg.splits);
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    return parse_config(std::string(std::istreambuf_iterator<char>(in), {}));
}

std::string config_to_json(const SimConfig& cfg) {
    json j;
    j["geometry"] = {{"width_px", cfg.geometry.width_px},
                     {"height_px", cfg.geometry.height_px},
                     {"pixel_mm", cfg.geometry.pixel_mm},
                     {"distance_mm", cfg.geometry.distance_mm},
                     {"center_x_px", cfg.geometry.center_x_px},
                     {"center_y_px", cfg.geometry.center_y_px},
                     {"oversample", cfg.geometry.oversample}};
    j["beam"] = {{"fluence_mean", cfg.beam.fluence_mean},
                 {"fluence_rms", cfg.beam.fluence_rms},
                 {"wavelength_A", cfg.beam.wavelength_A},
                 {"wavelength_rms_frac", cfg.beam.wavelength_rms_frac},
                 {"spectral_samples", cfg.beam.spectral_samples},
                 {"beam_size_um", cfg.beam.beam_size_um}};
    j["crystal"] = {{"a_A", cfg.crystal.cell.a_A},
                    {"b_A", cfg.crystal.cell.b_A},
                    {"c_A", cfg.crystal.cell.c_A},
                    {"alpha_deg", cfg.crystal.cell.alpha_deg},
                    {"beta_deg", cfg.crystal.cell.beta_deg},
                    {"gamma_deg", cfg.crystal.cell.gamma_deg},
                    {"cells_per_edge", cfg.crystal.cells_per_edge},
                    {"sim_size_um", cfg.crystal.sim_size_um},
                    {"target_size_um", cfg.crystal.target_size_um},
                    {"mosaic_domains", cfg.crystal.mosaic_domains},
                    {"mosaic_cap_deg", cfg.crystal.mosaic_cap_deg},
                    {"size_jitter_min", cfg.crystal.size_jitter_min},
                    {"size_jitter_max", cfg.crystal.size_jitter_max},
                    {"sf_seed", cfg.sf.seed},
                    {"sf_d_min_A", cfg.sf.d_min_A},
                    {"sf_f2_scale", cfg.sf.f2_scale},
                    {"sf_wilson_b_A2", cfg.sf.wilson_b_A2},
                    {"hkl_file", cfg.sf.hkl_file}};
    j["background"] = {{"water_amp", cfg.background.water_amp},
                       {"water_d_A", cfg.background.water_d_A},
                       {"water_sigma_A", cfg.background.water_sigma_A},
                       {"air_amp", cfg.background.air_amp},
                       {"air_tau_deg", cfg.background.air_tau_deg},
                       {"flat_amp", cfg.background.flat_amp}};
    j["noise"] = {{"gain_adu_per_photon", cfg.noise.gain_adu_per_photon},
                  {"gain_map_rms", cfg.noise.gain_map_rms},
                  {"read_noise_adu", cfg.noise.read_noise_adu},
                  {"offset_adu", cfg.noise.offset_adu},
                  {"psf_fwhm_px", cfg.noise.psf_fwhm_px},
                  {"saturation_adu", cfg.noise.saturation_adu},
                  {"calibration_seed", cfg.noise.calibration_seed}};
    j["classes"] = {{"weak_lo", cfg.classes.weak_lo},
                    {"weak_hi", cfg.classes.weak_hi},
                    {"good_hi", cfg.classes.good_hi},
                    {"strong_hi", cfg.classes.strong_hi},
                    {"max_retries", cfg.classes.max_retries}};
    j["splits"] = {{"train", cfg.splits.train},
                   {"val", cfg.splits.val},
                   {"test", cfg.splits.test}};
    return j.dump(2) + "\n";
}

void save_config(const std::string& path, const SimConfig& cfg) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write config: " + path);
    out << config_to_json(cfg);
}

StructureFactorTable build_table(const SimConfig& cfg) {
    if (!cfg.sf.hkl_file.empty())
        return load_hkl(cfg.sf.hkl_file);
    return synth_wilson_table(cfg.sf.seed, cfg.crystal.cell, cfg.sf.d_min_A,
                              cfg.sf.f2_scale, cfg.sf.wilson_b_A2);
}

} // namespace diffsim
