#include "p300bench/synth.hpp"

#include <cmath>
#include <numeric>

#include "p300bench/error.hpp"
#include "p300bench/rng.hpp"

namespace p300 {

namespace {
// Keeps the synthesis stream apart from split and model streams drawn from the same seed.
constexpr std::uint64_t kSynthStream = 0x73796e746865ULL;  // "synthe"
}  // namespace

void SynthConfig::validate() const {
    if (n_channels == 0 || n_samples == 0) throw_config("synth: channel and sample counts must be >= 1");
    if (!(sampling_rate_hz > 0.0)) throw_config("synth: sampling_rate_hz must be > 0");
    if (!(prestim_ms >= 0.0)) throw_config("synth: prestim_ms must be >= 0");
    if (!(p300_amplitude_uv >= 0.0) || !(latency_jitter_ms >= 0.0) || !(p300_width_ms >= 0.0) ||
        !(noise_std_uv >= 0.0))
        throw_config("synth: amplitudes, widths and standard deviations must be >= 0");
    if (channel_gains.size() != n_channels) throw_config("synth: channel_gains must have one entry per channel");
    const double poststim_ms = static_cast<double>(n_samples) * 1000.0 / sampling_rate_hz - prestim_ms;
    if (p300_latency_ms < 0.0 || p300_latency_ms > poststim_ms)
        throw_config("synth: p300_latency_ms must lie inside the poststimulus window");
}

EpochSet synthesize(const SynthConfig& cfg) {
    cfg.validate();

    EpochSet set;
    set.n_channels = cfg.n_channels;
    set.n_samples = cfg.n_samples;
    set.sampling_rate_hz = cfg.sampling_rate_hz;
    set.prestim_ms = cfg.prestim_ms;
    set.channel_names = default_channel_names(cfg.n_channels);
    set.labels.assign(cfg.n_epochs, 0);
    set.subject_ids.assign(cfg.n_epochs, -1);
    set.data.assign(cfg.n_epochs * set.epoch_size(), 0.0);

    const SeededRng root(splitmix64(cfg.seed ^ kSynthStream));
    std::vector<std::size_t> order(cfg.n_epochs);
    std::iota(order.begin(), order.end(), 0);
    SeededRng label_rng = root.child(0);
    label_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 0; i < cfg.n_epochs / 2; ++i) set.labels[order[i]] = 1;

    const double onset = static_cast<double>(set.prestim_samples());
    const double ms_per_sample = 1000.0 / cfg.sampling_rate_hz;
    for (std::size_t e = 0; e < cfg.n_epochs; ++e) {
        SeededRng rng = root.child(e + 1);
        auto ep = set.epoch(e);
        if (set.labels[e] == 1) {
            const double latency = cfg.p300_latency_ms + cfg.latency_jitter_ms * rng.normal();
            const double two_w2 = 2.0 * cfg.p300_width_ms * cfg.p300_width_ms;
            for (std::size_t t = 0; t < cfg.n_samples; ++t) {
                const double dt = (static_cast<double>(t) - onset) * ms_per_sample - latency;
                const double bump = two_w2 > 0.0 ? cfg.p300_amplitude_uv * std::exp(-dt * dt / two_w2)
                                                 : (dt == 0.0 ? cfg.p300_amplitude_uv : 0.0);
                for (std::size_t c = 0; c < cfg.n_channels; ++c) ep[c * cfg.n_samples + t] += cfg.channel_gains[c] * bump;
            }
        }
        if (cfg.noise_std_uv > 0.0)
            for (double& v : ep) v += cfg.noise_std_uv * rng.normal();
    }
    return set;
}

}  // namespace p300
