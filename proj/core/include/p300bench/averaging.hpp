#pragma once

#include <optional>
#include <vector>

#include "p300bench/epochs.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/pipeline.hpp"

namespace p300 {

struct AveragingConfig {
    std::size_t k_max = 6;
    /// Only group epochs that share a subject id.
    bool within_subject = false;

    void validate() const;
};

/// Averages consecutive same-class epochs in groups of k, keeping the original
/// order within each class and dropping a final short group. Groups are
/// emitted in the order of their first epoch, so k = 1 returns `set` unchanged.
/// The subject id of a group is its first epoch's id.
EpochSet average_groups(const EpochSet& set, std::size_t k, bool within_subject = false);

/// Metrics of the unchanged pipeline on averaged holdout epochs for k = 1..k_max.
/// Entry k - 1 is empty when either class has no complete group at that k.
std::vector<std::optional<MetricSet>> averaging_eval(const Pipeline& pipeline, const EpochSet& holdout,
                                                     const AveragingConfig& cfg);

}  // namespace p300
