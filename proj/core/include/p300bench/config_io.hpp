#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "p300bench/averaging.hpp"
#include "p300bench/cnn.hpp"
#include "p300bench/features.hpp"
#include "p300bench/lda.hpp"
#include "p300bench/pipeline.hpp"
#include "p300bench/preprocess.hpp"
#include "p300bench/splits.hpp"
#include "p300bench/svm.hpp"
#include "p300bench/synth.hpp"

// JSON round-trips for every configuration struct. Readers start from `base`
// and override only the keys present; unknown keys and wrongly typed values
// are configuration errors naming the offending key.

namespace p300 {

nlohmann::json config_to_json(const SynthConfig& c);
nlohmann::json config_to_json(const PreprocessConfig& c);
nlohmann::json config_to_json(const FeatureConfig& c);
nlohmann::json config_to_json(const LdaConfig& c);
nlohmann::json config_to_json(const SvmConfig& c);
nlohmann::json config_to_json(const CnnConfig& c);
nlohmann::json config_to_json(const SplitPlan& c);
nlohmann::json config_to_json(const AveragingConfig& c);

SynthConfig synth_config_from_json(const nlohmann::json& j, const SynthConfig& base = {});
PreprocessConfig preprocess_config_from_json(const nlohmann::json& j, const PreprocessConfig& base = {});
FeatureConfig feature_config_from_json(const nlohmann::json& j, const FeatureConfig& base = {});
LdaConfig lda_config_from_json(const nlohmann::json& j, const LdaConfig& base = {});
SvmConfig svm_config_from_json(const nlohmann::json& j, const SvmConfig& base = {});
CnnConfig cnn_config_from_json(const nlohmann::json& j, const CnnConfig& base = {});
SplitPlan split_plan_from_json(const nlohmann::json& j, const SplitPlan& base = {});
AveragingConfig averaging_config_from_json(const nlohmann::json& j, const AveragingConfig& base = {});

/// {"name", "type", "features", "standardize", "lda" | "svm" | "cnn"}.
nlohmann::json model_spec_to_json(const ModelSpec& spec);
/// "type" selects the defaults; without `base` the result starts from default_model(type).
ModelSpec model_spec_from_json(const nlohmann::json& j);
ModelSpec model_spec_from_json(const nlohmann::json& j, const ModelSpec& base);

/// Parses "300-1000" or "300:1000" (milliseconds) into a windowed-means window.
FeatureConfig parse_window(const std::string& text, FeatureConfig base = {});

}  // namespace p300
