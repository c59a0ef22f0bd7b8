#pragma once

#include <cstdint>
#include <vector>

#include "p300bench/epochs.hpp"

namespace p300 {

/// Parameters of the synthetic P300-like generator. Defaults mimic a delayed
/// parietal-dominant P300 of a child cohort; every value is tunable.
struct SynthConfig {
    std::size_t n_epochs = 2000;
    std::size_t n_channels = 3;
    std::size_t n_samples = 1200;
    double sampling_rate_hz = 1000.0;
    double prestim_ms = 200.0;
    double p300_amplitude_uv = 8.0;
    double p300_latency_ms = 500.0;
    double latency_jitter_ms = 50.0;
    double p300_width_ms = 80.0;
    double noise_std_uv = 12.0;
    std::vector<double> channel_gains{0.7, 1.0, 0.9};
    std::uint64_t seed = 1;

    void validate() const;
};

/// Balanced synthetic epochs: floor(n/2) targets at seeded random positions.
///
/// Targets carry gain[c] * A * exp(-(t - L)^2 / (2 w^2)) with a per-epoch
/// latency L ~ N(latency, jitter); every epoch gets i.i.d. Gaussian noise.
EpochSet synthesize(const SynthConfig& cfg);

}  // namespace p300
