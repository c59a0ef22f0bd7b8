#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/averaging.hpp"
#include "p300bench/cnn.hpp"
#include "p300bench/epochs.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/pipeline.hpp"
#include "p300bench/splits.hpp"

namespace p300 {

struct ModelResult {
    std::string model;
    std::vector<MetricSet> validation;  ///< one per CV iteration
    std::vector<MetricSet> holdout;
    /// [iteration][k - 1]; empty unless averaging was requested.
    std::vector<std::vector<std::optional<MetricSet>>> averaging;
    /// CNN only: per-iteration training logs.
    std::vector<std::vector<EpochRecord>> training_logs;
    /// Wall-clock fit time per iteration. Not part of the serialized report.
    std::vector<double> train_seconds;
};

struct EvalReport {
    nlohmann::json config;  ///< snapshot supplied by the caller
    std::size_t n_epochs = 0;
    std::size_t n_holdout = 0;
    std::size_t n_iterations = 0;
    std::size_t k_max = 0;  ///< 0 when no averaging was run
    std::vector<ModelResult> models;
    std::vector<std::string> warnings;
};

struct EvalOptions {
    std::size_t threads = 1;  ///< 0: one per hardware thread
    std::optional<AveragingConfig> averaging;
    nlohmann::json config_snapshot;
    /// Called after each finished iteration with a one-line note.
    std::function<void(const std::string&)> progress;
};

/// Monte-Carlo cross-validation with a fixed holdout.
///
/// Iteration i fits every model on its train fold only, then scores the
/// validation fold and the holdout set (and, when requested, averaged holdout
/// epochs). Model randomness comes from per-iteration child streams of the
/// master seed, so results do not depend on the thread count. Any failing
/// iteration aborts the run.
EvalReport run_benchmark(const EpochSet& set, const std::vector<ModelSpec>& models, const SplitPlan& plan,
                         const EvalOptions& options = {});

/// Stream for model `m` in iteration `i`.
SeededRng model_rng(std::uint64_t master_seed, std::size_t iteration, std::size_t model);

}  // namespace p300
