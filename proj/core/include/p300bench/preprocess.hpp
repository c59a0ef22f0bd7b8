#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "p300bench/epochs.hpp"

namespace p300 {

struct Marker {
    std::size_t onset_sample = 0;
    Label label = 0;
    std::int32_t subject_id = -1;
};

/// Continuous multichannel signal, [channel][point] in microvolts, with stimulus markers.
struct ContinuousRecording {
    std::size_t n_channels = 0;
    std::size_t n_points = 0;
    double sampling_rate_hz = 1000.0;
    std::vector<std::string> channel_names;
    std::vector<double> data;
    std::vector<Marker> markers;
};

struct PreprocessConfig {
    double prestim_ms = 200.0;
    double poststim_ms = 1000.0;
    double baseline_start_ms = -200.0;  ///< inclusive
    double baseline_end_ms = 0.0;       ///< exclusive
    double rejection_threshold_uv = 100.0;

    void validate() const;
};

struct ExtractionResult {
    EpochSet epochs;
    std::size_t skipped_markers = 0;  ///< too close to a recording edge
};

struct RejectionReport {
    std::size_t n_input = 0;
    std::size_t n_rejected = 0;
    double rejection_rate = 0.0;
    std::vector<std::size_t> rejected_indices;  ///< ascending
};

/// Cuts one epoch per marker: samples [onset - prestim, onset + poststim).
/// Markers whose window leaves the recording are skipped, never padded.
ExtractionResult extract_epochs(const ContinuousRecording& rec, const PreprocessConfig& cfg);

/// Subtracts, per epoch and channel, the mean over the baseline window
/// [baseline_start_ms, baseline_end_ms).
EpochSet baseline_correct(EpochSet set, const PreprocessConfig& cfg);

/// Drops every epoch with max |x[c, t]| > threshold (strict). Survivors keep
/// their relative order. Meant to run after baseline correction.
std::pair<EpochSet, RejectionReport> reject_artifacts(const EpochSet& set, const PreprocessConfig& cfg);

}  // namespace p300
