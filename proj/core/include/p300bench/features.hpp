#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/epochs.hpp"
#include "p300bench/matrix.hpp"

namespace p300 {

enum class FeatureMode {
    windowed_means,  ///< per-channel means over equal sub-windows
    raw,             ///< every sample of every channel, flattened channel-major
};

struct FeatureConfig {
    FeatureMode mode = FeatureMode::windowed_means;
    double window_start_ms = 300.0;  ///< inclusive, relative to stimulus onset
    double window_end_ms = 1000.0;   ///< exclusive
    std::size_t n_intervals = 20;

    void validate() const;
    std::string label() const;  ///< e.g. "wm[300-1000]" or "raw"

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct FeatureMatrix {
    Matrix values;  ///< one row per epoch
    std::vector<Label> labels;
    std::vector<std::string> names;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t n_features() const noexcept { return values.cols(); }
    FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
};

/// Half-open sample ranges of the windowed-means intervals.
///
/// Interval i spans [s + round(i*len/n), s + round((i+1)*len/n)) where s and
/// len are the window start and length in samples and ties round up, so the
/// ranges tile the window exactly. Throws "window out of range" when the
/// window leaves the poststimulus part of the epoch.
std::vector<std::pair<std::size_t, std::size_t>> wm_intervals(const EpochSet& set, const FeatureConfig& cfg);

/// Windowed-means features ordered channel-major, then interval.
FeatureMatrix extract_wm(const EpochSet& set, const FeatureConfig& cfg);
/// Raw epochs flattened to n_channels * n_samples columns.
FeatureMatrix extract_raw(const EpochSet& set);
/// Dispatches on cfg.mode.
FeatureMatrix extract_features(const EpochSet& set, const FeatureConfig& cfg);

void write_features_csv(const FeatureMatrix& fm, const std::filesystem::path& path);

/// Per-column z-scoring fitted on training rows only.
class Standardizer {
public:
    Standardizer() = default;

    /// Population (1/n) statistics. Columns with std < 1e-12 are frozen and map to 0.
    static Standardizer fit(const Matrix& train);

    Matrix apply(const Matrix& x) const;
    FeatureMatrix apply(const FeatureMatrix& fm) const;
    void apply_row(std::span<const double> in, std::span<double> out) const;

    std::span<const double> means() const noexcept { return mean_; }
    std::span<const double> stds() const noexcept { return std_; }
    std::size_t degenerate_columns() const noexcept { return degenerate_; }
    std::size_t size() const noexcept { return mean_.size(); }

    nlohmann::json to_json() const;
    static Standardizer from_json(const nlohmann::json& j);

private:
    std::vector<double> mean_;
    std::vector<double> std_;  ///< 0 marks a frozen column
    std::size_t degenerate_ = 0;
};

}  // namespace p300
