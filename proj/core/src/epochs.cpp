#include "p300bench/epochs.hpp"

#include <algorithm>
#include <cmath>

#include "p300bench/error.hpp"

namespace p300 {

std::size_t EpochSet::prestim_samples() const noexcept {
    return static_cast<std::size_t>(std::llround(prestim_ms * sampling_rate_hz / 1000.0));
}

std::int64_t EpochSet::sample_at_ms(double ms) const noexcept {
    return static_cast<std::int64_t>(prestim_samples()) +
           static_cast<std::int64_t>(std::llround(ms * sampling_rate_hz / 1000.0));
}

std::size_t EpochSet::count_label(Label l) const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

EpochSet EpochSet::empty_like() const {
    EpochSet out;
    out.n_channels = n_channels;
    out.n_samples = n_samples;
    out.sampling_rate_hz = sampling_rate_hz;
    out.prestim_ms = prestim_ms;
    out.channel_names = channel_names;
    return out;
}

EpochSet EpochSet::subset(std::span<const std::size_t> indices) const {
    EpochSet out = empty_like();
    out.labels.reserve(indices.size());
    out.subject_ids.reserve(indices.size());
    out.data.reserve(indices.size() * epoch_size());
    for (std::size_t idx : indices) {
        if (idx >= size()) throw_runtime("epoch index out of range");
        out.append(epoch(idx), labels[idx], subject_ids[idx]);
    }
    return out;
}

void EpochSet::append(std::span<const double> waveform, Label label, std::int32_t subject_id) {
    if (waveform.size() != epoch_size()) throw_runtime("epoch shape mismatch");
    data.insert(data.end(), waveform.begin(), waveform.end());
    labels.push_back(label);
    subject_ids.push_back(subject_id);
}

void EpochSet::validate() const {
    if (n_channels == 0 || n_samples == 0) throw_data("epoch set has zero channels or samples");
    if (!(sampling_rate_hz > 0.0) || !std::isfinite(sampling_rate_hz)) throw_data("sampling rate must be positive");
    if (!(prestim_ms >= 0.0) || !std::isfinite(prestim_ms)) throw_data("prestimulus interval must be non-negative");
    if (channel_names.size() != n_channels) throw_data("channel name count does not match channel count");
    if (subject_ids.size() != labels.size()) throw_data("subject id count does not match epoch count");
    if (data.size() != labels.size() * epoch_size()) throw_data("data size does not match header counts");
    for (Label l : labels)
        if (l > 1) throw_data("labels must be 0 or 1");
    for (double v : data)
        if (!std::isfinite(v)) throw_data("invalid amplitude");
}

std::vector<std::string> default_channel_names(std::size_t n_channels) {
    if (n_channels == 3) return {"Fz", "Cz", "Pz"};
    std::vector<std::string> names;
    for (std::size_t c = 0; c < n_channels; ++c) names.push_back("ch" + std::to_string(c + 1));
    return names;
}

}  // namespace p300
