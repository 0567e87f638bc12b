#pragma once
#include <string>
#include <vector>

#include "diffsim/features/extractor.hpp"
#include "diffsim/ml/model.hpp"
#include "diffsim/search/search.hpp"

namespace diffsim {

// One joint draw: exactly one feature extractor and one classifier
// configuration.
struct PipelineConfig {
    ExtractorConfig extractor;
    ClassifierParams classifier;
};

// The default searchable grids:
//   GLCM   distances: nonempty subset of {1,2,4,5,8}
//          angles:    nonempty subset of {0,45,90,135}
//   LBP    points in {4,8,16,24}; radius in {1,2,3} (radius 0 is
//          degenerate and not searchable)
//   RF     trees {10,100,1000}; max_features {sqrt,0.25,0.5,0.75};
//          depth {unlimited,2,4,6,8,10,20}; class weights (5 options)
//   SVM    C in {1} u {2^x : x odd, -5..15}; gamma in {auto} u
//          {2^x : x odd, -15..3}; class weights (5 options)
// Class-weight options: none, balanced, and three explicit vectors over
// (blank, no-crystal, weak, good, strong).
struct PipelineSpace {
    using Config = PipelineConfig;

    std::string classifier_kind = "rf"; // "rf" | "svm"
    bool allow_glcm = true;
    bool allow_lbp = true;

    PipelineConfig sample(Rng& rng) const;
    bool contains(const PipelineConfig& cfg) const;
};

// Grids exposed for validation and tests.
const std::vector<double>& svm_c_grid();
const std::vector<double>& svm_gamma_grid(); // includes the 0 = auto sentinel
const std::vector<ClassWeights>& class_weight_options();

// Best-found configurations shipped as ready-to-use presets
// (GLCM+RF and GLCM+SVM).
PipelineConfig preset_rf_glcm();
PipelineConfig preset_svm_glcm();

std::string pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const std::string& text);

// One JSON object per line; "sampler" distinguishes random/halving and
// leaves room for future model-based samplers.
void write_trial_log(const std::string& path,
                     const std::vector<Trial<PipelineConfig>>& trials);

} // namespace diffsim
