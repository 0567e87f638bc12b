#pragma once
#include <string>
#include <vector>

#include "diffsim/dataset.hpp"
#include "diffsim/features/glcm.hpp"
#include "diffsim/features/lbp.hpp"

namespace diffsim {

enum class ExtractorKind { kGlcm, kLbp };

struct ExtractorConfig {
    ExtractorKind kind = ExtractorKind::kGlcm;
    GlcmParams glcm;
    LbpParams lbp;

    // Human-readable identifier of extractor + parameters; stored with
    // trained models so prediction can reject mismatched features.
    std::string schema_id() const;
    std::vector<std::string> feature_names() const;
};

struct FeatureVector {
    std::vector<double> values;
    std::string schema_id;
};

// GLCM vectors are ordered distances-outer, angles-inner, with the six
// summaries (contrast, dissimilarity, homogeneity, asm, energy,
// correlation) innermost.  LBP vectors are the points+2 histogram bins.
FeatureVector extract_features(const ImageU8& img, const ExtractorConfig& cfg);

struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> x;
    std::vector<std::string> labels;
    std::vector<std::string> splits;

    std::size_t rows() const { return x.size(); }
    // Row subset with the given split name ("train", "val", "test").
    FeatureTable filter_split(const std::string& split) const;
};

// CSV layout: feature columns in schema order, then "label", "split".
void write_feature_csv(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::string& path);

// Reads every manifest image from dataset_dir and extracts features,
// parallel over images, row order = manifest order.
FeatureTable extract_dataset_features(const std::string& dataset_dir,
                                      const std::vector<ManifestEntry>& entries,
                                      const ExtractorConfig& cfg, int threads);

} // namespace diffsim
