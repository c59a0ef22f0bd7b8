#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace p300 {

/// Class label: 1 = target, 0 = non-target.
using Label = std::uint8_t;

/// Classification quality with "target" as the positive class.
struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;  ///< 0 when nothing was predicted as target
    double recall = 0.0;     ///< 0 when there are no targets
    std::optional<double> auc;  ///< empty when only one class is present

    friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

/// Mann-Whitney AUC with average ranks for tied scores.
std::optional<double> auc_mann_whitney(std::span<const double> scores, std::span<const Label> labels);

/// Confusion-matrix metrics at `threshold` (predict target iff score > threshold) plus AUC.
MetricSet compute_metrics(std::span<const double> scores, std::span<const Label> labels, double threshold);

/// Decision thresholds used throughout the toolkit.
inline constexpr double kLinearThreshold = 0.0;      // LDA / SVM decision values
inline constexpr double kProbabilityThreshold = 0.5;  // CNN target probability

}  // namespace p300
