#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffsim/features/extractor.hpp"
#include "diffsim/pgm.hpp"
#include "diffsim/rng.hpp"

using namespace diffsim;

namespace {

namespace fs = std::filesystem;

ImageU8 random_image(int w, int h, std::uint64_t seed) {
    ImageU8 img(w, h);
    Rng rng(seed);
    for (auto& v : img.data)
        v = static_cast<std::uint8_t>(rng.uniform_int(256));
    return img;
}

ExtractorConfig glcm_config() {
    ExtractorConfig cfg;
    cfg.kind = ExtractorKind::kGlcm;
    cfg.glcm.distances = {1, 2};
    cfg.glcm.angles_deg = {0, 90};
    cfg.glcm.levels = 256;
    return cfg;
}

} // namespace

TEST_CASE("extractor: schema identifiers spell out the parameters") {
    CHECK(glcm_config().schema_id() == "glcm:d=1,2:a=0,90:levels=256");

    ExtractorConfig lbp;
    lbp.kind = ExtractorKind::kLbp;
    CHECK(lbp.schema_id() == "lbp:p=24:r=3");
    lbp.lbp.points = 8;
    lbp.lbp.radius = 2.5;
    CHECK(lbp.schema_id() == "lbp:p=8:r=2.5");

    ExtractorConfig one;
    one.kind = ExtractorKind::kGlcm;
    one.glcm.distances = {5};
    one.glcm.angles_deg = {135};
    one.glcm.levels = 64;
    CHECK(one.schema_id() == "glcm:d=5:a=135:levels=64");
}

TEST_CASE("extractor: feature names run distances outer, angles inner") {
    const auto names = glcm_config().feature_names();
    REQUIRE(names.size() == 2 * 2 * 6);
    CHECK(names[0] == "glcm_d1_a0_contrast");
    CHECK(names[1] == "glcm_d1_a0_dissimilarity");
    CHECK(names[2] == "glcm_d1_a0_homogeneity");
    CHECK(names[3] == "glcm_d1_a0_asm");
    CHECK(names[4] == "glcm_d1_a0_energy");
    CHECK(names[5] == "glcm_d1_a0_correlation");
    CHECK(names[6] == "glcm_d1_a90_contrast");
    CHECK(names[12] == "glcm_d2_a0_contrast");
    CHECK(names[23] == "glcm_d2_a90_correlation");

    ExtractorConfig lbp;
    lbp.kind = ExtractorKind::kLbp;
    lbp.lbp.points = 8;
    lbp.lbp.radius = 1.5;
    const auto lbp_names = lbp.feature_names();
    REQUIRE(lbp_names.size() == 10);
    CHECK(lbp_names.front() == "lbp_p8_r1.5_bin0");
    CHECK(lbp_names.back() == "lbp_p8_r1.5_bin9");
}

TEST_CASE("extractor: vectors equal the hand-composed statistics") {
    const ImageU8 img = random_image(32, 32, 11);
    const ExtractorConfig cfg = glcm_config();
    const FeatureVector v = extract_features(img, cfg);
    REQUIRE(v.schema_id == cfg.schema_id());
    REQUIRE(v.values.size() == 24);

    std::size_t at = 0;
    for (const int d : {1, 2})
        for (const int a : {0, 90}) {
            const auto f = haralick(glcm_matrix(img, d, a, 256), 256);
            REQUIRE(v.values[at++] == f.contrast);
            REQUIRE(v.values[at++] == f.dissimilarity);
            REQUIRE(v.values[at++] == f.homogeneity);
            REQUIRE(v.values[at++] == f.angular_second_moment);
            REQUIRE(v.values[at++] == f.energy);
            REQUIRE(v.values[at++] == f.correlation);
        }

    ExtractorConfig lbp;
    lbp.kind = ExtractorKind::kLbp;
    lbp.lbp.points = 16;
    lbp.lbp.radius = 2.0;
    const FeatureVector lv = extract_features(img, lbp);
    CHECK(lv.values == lbp_histogram(img, lbp.lbp));
}

TEST_CASE("features: CSV round trip is value-exact") {
    FeatureTable table;
    table.feature_names = {"f0", "f1", "f2"};
    table.x = {{M_PI, 1e-17, -3.5e8},
               {0.1, -0.30000000000000004, 1234567890.123456},
               {0.0, -0.0, 1e-300}};
    table.labels = {"blank", "weak", "good"};
    table.splits = {"train", "val", "test"};

    const std::string path =
        (fs::temp_directory_path() / "diffsim_test_features.csv").string();
    write_feature_csv(path, table);
    const FeatureTable back = read_feature_csv(path);
    REQUIRE(back.feature_names == table.feature_names);
    REQUIRE(back.rows() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(back.x[i] == table.x[i]);
        REQUIRE(back.labels[i] == table.labels[i]);
        REQUIRE(back.splits[i] == table.splits[i]);
    }

    std::ifstream in(path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "f0,f1,f2,label,split");
    fs::remove(path);
}

TEST_CASE("features: filter_split keeps rows of one split only") {
    FeatureTable table;
    table.feature_names = {"f"};
    table.x = {{1.0}, {2.0}, {3.0}, {4.0}};
    table.labels = {"a", "b", "c", "d"};
    table.splits = {"train", "test", "train", "val"};

    const FeatureTable train = table.filter_split("train");
    REQUIRE(train.rows() == 2);
    CHECK(train.feature_names == table.feature_names);
    CHECK(train.x[0][0] == 1.0);
    CHECK(train.x[1][0] == 3.0);
    CHECK(train.labels == std::vector<std::string>{"a", "c"});
    CHECK(table.filter_split("val").rows() == 1);
    CHECK(table.filter_split("nope").rows() == 0);
}

TEST_CASE("features: malformed CSVs are rejected") {
    const std::string path =
        (fs::temp_directory_path() / "diffsim_test_features_bad.csv").string();

    std::ofstream(path) << "f0,f1\n1,2\n"; // header lacks label,split
    CHECK_THROWS_AS(read_feature_csv(path), std::runtime_error);

    std::ofstream(path) << "f0,split,label\n1,train,x\n"; // wrong order
    CHECK_THROWS_AS(read_feature_csv(path), std::runtime_error);

    std::ofstream(path) << "f0,f1,label,split\n1,2,weak\n"; // short row
    CHECK_THROWS_AS(read_feature_csv(path), std::runtime_error);

    std::ofstream(path) << "";
    CHECK_THROWS_AS(read_feature_csv(path), std::runtime_error);

    CHECK_THROWS_AS(read_feature_csv(path + ".does-not-exist"),
                    std::runtime_error);
    fs::remove(path);
}

TEST_CASE("features: dataset extraction follows manifest order") {
    const fs::path dir = fs::temp_directory_path() / "diffsim_test_feat_ds";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::vector<ManifestEntry> entries(6);
    std::vector<ImageU8> images;
    const char* labels[] = {"blank", "no-crystal", "weak", "good", "strong", "weak"};
    const char* splits[] = {"train", "test", "test", "val", "train", "train"};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        images.push_back(random_image(24, 24, 400 + i));
        char name[32];
        std::snprintf(name, sizeof(name), "img_%06zu.pgm", i);
        write_pgm((dir / name).string(), images.back());
        entries[i].index = i;
        entries[i].file = name;
        entries[i].label = labels[i];
        entries[i].split = splits[i];
    }

    const ExtractorConfig cfg = glcm_config();
    const FeatureTable t1 = extract_dataset_features(dir.string(), entries, cfg, 1);
    const FeatureTable t3 = extract_dataset_features(dir.string(), entries, cfg, 3);
    REQUIRE(t1.rows() == entries.size());
    REQUIRE(t1.feature_names == cfg.feature_names());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        REQUIRE(t1.x[i] == extract_features(images[i], cfg).values);
        REQUIRE(t1.labels[i] == entries[i].label);
        REQUIRE(t1.splits[i] == entries[i].split);
        REQUIRE(t3.x[i] == t1.x[i]);
    }
    fs::remove_all(dir);
}
