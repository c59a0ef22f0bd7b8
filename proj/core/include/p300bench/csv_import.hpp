#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "p300bench/epochs.hpp"

namespace p300 {

/// Header fields that the delimited-text convention cannot carry itself.
struct CsvMeta {
    std::size_t n_channels = 3;
    std::size_t n_samples = 1200;
    double sampling_rate_hz = 1000.0;
    double prestim_ms = 200.0;
    std::vector<std::string> channel_names;  ///< empty: default_channel_names()
};

/// One row per epoch with channels concatenated channel-major (all samples of
/// the first channel, then the second, ...). Fields are separated by commas,
/// semicolons or whitespace. The labels file holds one 0/1 per line, optionally
/// followed by a subject id.
EpochSet import_csv(const std::filesystem::path& data_path, const std::filesystem::path& labels_path,
                    const CsvMeta& meta);

/// Inverse of import_csv; amplitudes are written as f32 with 9 significant digits.
void export_csv(const EpochSet& set, const std::filesystem::path& data_path,
                const std::filesystem::path& labels_path);

}  // namespace p300
