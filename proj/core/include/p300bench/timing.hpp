#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/epochs.hpp"
#include "p300bench/pipeline.hpp"

namespace p300 {

struct TimingOptions {
    std::size_t predict_calls = 1000;
    std::vector<std::size_t> scaling_sizes{1000, 2000, 4000, 8000};
    std::size_t scaling_repeats = 15;
    std::uint64_t seed = 0;
};

struct ModelTiming {
    std::string model;
    double train_seconds = 0.0;
    double predict_median_ms = 0.0;  ///< one pattern per call, features included
    std::size_t predict_calls = 0;
};

struct ScalingPoint {
    std::size_t patterns = 0;
    double seconds = 0.0;  ///< median over repeats
};

struct TimingReport {
    std::vector<ModelTiming> models;
    std::vector<ScalingPoint> lda_scaling;  ///< batch LDA scoring on feature rows
    double lda_scaling_r2 = 0.0;
};

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

/// Fits every model once on `train` (CNN early stopping on `val`) and times
/// single-pattern prediction on epochs cycled from `test`. The LDA scaling
/// series uses the first LDA model, or a default one when none is listed.
TimingReport bench_timing(const std::vector<ModelSpec>& models, const EpochSet& train, const EpochSet& val,
                          const EpochSet& test, const TimingOptions& options = {});

nlohmann::json to_json(const TimingReport& report);

}  // namespace p300
