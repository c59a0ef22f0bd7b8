#include "p300bench/preprocess.hpp"

#include <cmath>

#include "p300bench/error.hpp"

namespace p300 {

void PreprocessConfig::validate() const {
    if (!(prestim_ms > 0.0) || !(poststim_ms > 0.0)) throw_config("preprocess: prestim_ms and poststim_ms must be > 0");
    if (!(baseline_start_ms < baseline_end_ms)) throw_config("preprocess: baseline window must be non-empty");
    if (!(rejection_threshold_uv > 0.0)) throw_config("preprocess: rejection_threshold_uv must be > 0");
}

ExtractionResult extract_epochs(const ContinuousRecording& rec, const PreprocessConfig& cfg) {
    cfg.validate();
    if (rec.data.size() != rec.n_channels * rec.n_points) throw_data("recording data size does not match header");

    const auto pre = static_cast<std::size_t>(std::llround(cfg.prestim_ms * rec.sampling_rate_hz / 1000.0));
    const auto post = static_cast<std::size_t>(std::llround(cfg.poststim_ms * rec.sampling_rate_hz / 1000.0));

    ExtractionResult result;
    EpochSet& set = result.epochs;
    set.n_channels = rec.n_channels;
    set.n_samples = pre + post;
    set.sampling_rate_hz = rec.sampling_rate_hz;
    set.prestim_ms = cfg.prestim_ms;
    set.channel_names = rec.channel_names.empty() ? default_channel_names(rec.n_channels) : rec.channel_names;

    std::vector<double> waveform(set.epoch_size());
    for (const Marker& m : rec.markers) {
        if (m.onset_sample < pre || m.onset_sample + post > rec.n_points) {
            ++result.skipped_markers;
            continue;
        }
        const std::size_t first = m.onset_sample - pre;
        for (std::size_t c = 0; c < rec.n_channels; ++c) {
            const double* src = rec.data.data() + c * rec.n_points + first;
            std::copy(src, src + set.n_samples, waveform.begin() + static_cast<std::ptrdiff_t>(c * set.n_samples));
        }
        set.append(waveform, m.label, m.subject_id);
    }
    return result;
}

EpochSet baseline_correct(EpochSet set, const PreprocessConfig& cfg) {
    cfg.validate();
    const std::int64_t begin = set.sample_at_ms(cfg.baseline_start_ms);
    const std::int64_t end = set.sample_at_ms(cfg.baseline_end_ms);
    if (begin < 0 || end > static_cast<std::int64_t>(set.n_samples) || begin >= end)
        throw_config("preprocess: baseline window lies outside the epoch");
    const auto b = static_cast<std::size_t>(begin);
    const auto e = static_cast<std::size_t>(end);

    for (std::size_t ep = 0; ep < set.size(); ++ep) {
        for (std::size_t c = 0; c < set.n_channels; ++c) {
            double* x = &set.at(ep, c, 0);
            double sum = 0.0;
            for (std::size_t t = b; t < e; ++t) sum += x[t];
            const double mean = sum / static_cast<double>(e - b);
            for (std::size_t t = 0; t < set.n_samples; ++t) x[t] -= mean;
        }
    }
    return set;
}

std::pair<EpochSet, RejectionReport> reject_artifacts(const EpochSet& set, const PreprocessConfig& cfg) {
    cfg.validate();
    RejectionReport report;
    report.n_input = set.size();
    std::vector<std::size_t> kept;
    kept.reserve(set.size());
    for (std::size_t e = 0; e < set.size(); ++e) {
        bool reject = false;
        for (double v : set.epoch(e)) {
            if (std::abs(v) > cfg.rejection_threshold_uv) {
                reject = true;
                break;
            }
        }
        (reject ? report.rejected_indices : kept).push_back(e);
    }
    report.n_rejected = report.rejected_indices.size();
    report.rejection_rate =
        report.n_input == 0 ? 0.0 : static_cast<double>(report.n_rejected) / static_cast<double>(report.n_input);
    return {set.subset(kept), report};
}

}  // namespace p300
