#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/evaluation.hpp"
#include "p300bench/metrics.hpp"

namespace p300 {

/// Mean and sample (n - 1) standard deviation. sd is NaN for n < 2, mean is NaN for n = 0.
struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

struct MetricSummary {
    Summary accuracy, precision, recall;
    std::optional<Summary> auc;  ///< empty if any run had an undefined AUC
};

MetricSummary summarize(std::span<const MetricSet> runs);
/// Skips undefined entries; all summaries have n = 0 when none are defined.
MetricSummary summarize(std::span<const std::optional<MetricSet>> runs);

nlohmann::json to_json(const MetricSet& m);
nlohmann::json to_json(const MetricSummary& s);

/// Per-iteration lists, aggregates and the per-k averaging table. Timings are
/// deliberately absent so that equal seeds give byte-identical output.
nlohmann::json report_to_json(const EvalReport& report);

/// Writes report.json, iterations.csv, aggregate.csv and, when present,
/// averaging.csv and training_log.csv. Returns the written file names.
std::vector<std::string> write_report(const EvalReport& report, const std::filesystem::path& dir);

/// Wall-clock fit times per model and iteration.
nlohmann::json train_times_json(const EvalReport& report);

}  // namespace p300
