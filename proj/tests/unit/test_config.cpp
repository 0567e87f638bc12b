#include <doctest.h>

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "diffsim/config.hpp"

using namespace diffsim;

namespace {

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("config: serialization round trips to the identical string") {
    const SimConfig cfg = default_config();
    const std::string text = config_to_json(cfg);
    const SimConfig back = parse_config(text);
    CHECK(config_to_json(back) == text);
}

TEST_CASE("config: a sparse overlay keeps every other default") {
    const SimConfig cfg = parse_config(R"({"beam": {"wavelength_A": 2.0}})");
    CHECK(cfg.beam.wavelength_A == 2.0);
    CHECK(cfg.beam.fluence_mean == 1e12);
    CHECK(cfg.geometry.width_px == 512);
    CHECK(cfg.crystal.cell.a_A == 80.0);
    CHECK(cfg.classes.weak_lo == 1.5e6);
    CHECK(cfg.splits.train == 0.4);
}

TEST_CASE("config: unknown keys are ignored") {
    const SimConfig cfg = parse_config(
        R"({"beam": {"wavelength_A": 1.2, "color": "blue"}, "venue": {"city": 1}})");
    CHECK(cfg.beam.wavelength_A == 1.2);
    CHECK(cfg.geometry.width_px == 512);
}

TEST_CASE("config: file save/load preserves awkward doubles") {
    SimConfig cfg = default_config();
    cfg.geometry.width_px = 128;
    cfg.geometry.pixel_mm = 0.1720000000000003;
    cfg.sf.hkl_file = "refls.hkl";
    cfg.splits.train = 0.5;
    cfg.noise.calibration_seed = 0xDEADBEEFCAFEull;

    const std::string path = tmp("diffsim_test_config.json");
    save_config(path, cfg);
    const SimConfig back = load_config(path);
    CHECK(back.geometry.width_px == 128);
    CHECK(back.geometry.pixel_mm == 0.1720000000000003);
    CHECK(back.sf.hkl_file == "refls.hkl");
    CHECK(back.splits.train == 0.5);
    CHECK(back.noise.calibration_seed == 0xDEADBEEFCAFEull);
    CHECK(config_to_json(back) == config_to_json(cfg));
    std::filesystem::remove(path);
}

TEST_CASE("config: build_table synthesizes unless an hkl file is named") {
    SimConfig cfg = default_config();
    cfg.sf.d_min_A = 10.0; // keep the table small
    const StructureFactorTable direct = synth_wilson_table(
        cfg.sf.seed, cfg.crystal.cell, cfg.sf.d_min_A, cfg.sf.f2_scale,
        cfg.sf.wilson_b_A2);
    CHECK(build_table(cfg).entries() == direct.entries());

    StructureFactorTable small;
    small.set(1, 2, 3, 11.0);
    small.set(-4, 0, 2, 7.5);
    const std::string path = tmp("diffsim_test_build.hkl");
    save_hkl(path, small);
    cfg.sf.hkl_file = path;
    CHECK(build_table(cfg).entries() == small.entries());
    std::filesystem::remove(path);
}

TEST_CASE("config: malformed input is rejected") {
    CHECK_THROWS_AS(parse_config("{nope"), nlohmann::json::exception);
    CHECK_THROWS_AS(parse_config(R"({"beam": {"fluence_mean": "lots"}})"),
                    nlohmann::json::exception);
    CHECK_THROWS_AS(load_config(tmp("diffsim_test_no_such_config.json")),
                    std::runtime_error);
}
