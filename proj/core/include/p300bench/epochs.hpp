#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "p300bench/metrics.hpp"

namespace p300 {

/// A set of fixed-shape multichannel epochs with per-epoch labels.
///
/// Amplitudes are microvolts stored [epoch][channel][sample]. Time zero (the
/// stimulus onset) sits at sample prestim_samples().
struct EpochSet {
    std::size_t n_channels = 0;
    std::size_t n_samples = 0;
    double sampling_rate_hz = 1000.0;
    double prestim_ms = 200.0;
    std::vector<std::string> channel_names;
    std::vector<Label> labels;
    std::vector<std::int32_t> subject_ids;  ///< -1 when unknown
    std::vector<double> data;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t epoch_size() const noexcept { return n_channels * n_samples; }

    std::span<const double> epoch(std::size_t e) const noexcept {
        return {data.data() + e * epoch_size(), epoch_size()};
    }
    std::span<double> epoch(std::size_t e) noexcept { return {data.data() + e * epoch_size(), epoch_size()}; }
    std::span<const double> channel(std::size_t e, std::size_t c) const noexcept {
        return {data.data() + e * epoch_size() + c * n_samples, n_samples};
    }
    double& at(std::size_t e, std::size_t c, std::size_t t) noexcept { return data[e * epoch_size() + c * n_samples + t]; }
    double at(std::size_t e, std::size_t c, std::size_t t) const noexcept {
        return data[e * epoch_size() + c * n_samples + t];
    }

    /// Sample index of stimulus onset.
    std::size_t prestim_samples() const noexcept;
    /// Sample index of a time in ms relative to onset (may be negative or past the end).
    std::int64_t sample_at_ms(double ms) const noexcept;

    std::size_t count_label(Label l) const noexcept;

    /// Same header, no epochs.
    EpochSet empty_like() const;
    EpochSet subset(std::span<const std::size_t> indices) const;
    void append(std::span<const double> waveform, Label label, std::int32_t subject_id = -1);

    /// Throws DataError when header counts, labels or amplitudes break the invariants.
    void validate() const;

    friend bool operator==(const EpochSet&, const EpochSet&) = default;
};

/// Default names: Fz, Cz, Pz for three channels, otherwise ch1..chN.
std::vector<std::string> default_channel_names(std::size_t n_channels);

}  // namespace p300
