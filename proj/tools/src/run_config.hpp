#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

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

namespace p300::cli {

/// Everything a command may need. `seed` is the master seed; resolve() copies
/// it into the synthesis and split configs.
struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t predict_calls = 1000;
    SynthConfig synth;
    PreprocessConfig preprocess;
    FeatureConfig features;
    LdaConfig lda;
    SvmConfig svm;
    CnnConfig cnn;
    SplitPlan splits;
    AveragingConfig averaging;
    /// Explicit model list; empty means one default model per kind built from the sections above.
    std::vector<ModelSpec> models;

    void resolve();
    void validate() const;

    /// Models of the requested kind ("lda", "svm", "cnn" or "all").
    std::vector<ModelSpec> select_models(const std::string& which) const;
};

nlohmann::json to_json(const RunConfig& c);
/// Starts from defaults; unknown keys at any level are configuration errors.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// "section.key = default" lines for --help.
std::string describe_config_keys();

}  // namespace p300::cli
