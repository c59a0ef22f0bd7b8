#include "p300bench/features.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "p300bench/error.hpp"
#include "p300bench/linalg.hpp"

namespace p300 {

namespace {

constexpr double kDegenerateStd = 1e-12;

std::string trim_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

void FeatureConfig::validate() const {
    if (mode == FeatureMode::raw) return;
    if (!(window_start_ms < window_end_ms)) throw_config("features: window_start_ms must be < window_end_ms");
    if (window_start_ms < 0.0) throw_config("features: window must lie in the poststimulus range");
    if (n_intervals < 1) throw_config("features: n_intervals must be >= 1");
}

std::string FeatureConfig::label() const {
    if (mode == FeatureMode::raw) return "raw";
    return "wm[" + trim_number(window_start_ms) + "-" + trim_number(window_end_ms) + "]";
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
    FeatureMatrix out;
    out.values = values.select_rows(indices);
    out.names = names;
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) out.labels.push_back(labels[i]);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> wm_intervals(const EpochSet& set, const FeatureConfig& cfg) {
    cfg.validate();
    const std::int64_t start = set.sample_at_ms(cfg.window_start_ms);
    const std::int64_t end = set.sample_at_ms(cfg.window_end_ms);
    if (start < static_cast<std::int64_t>(set.prestim_samples()) || end > static_cast<std::int64_t>(set.n_samples) ||
        end - start < static_cast<std::int64_t>(cfg.n_intervals))
        throw_config("window out of range");

    const auto s = static_cast<std::size_t>(start);
    const auto len = static_cast<std::size_t>(end - start);
    const std::size_t n = cfg.n_intervals;
    auto boundary = [&](std::size_t i) { return s + (2 * i * len + n) / (2 * n); };

    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(boundary(i), boundary(i + 1));
    return out;
}

FeatureMatrix extract_wm(const EpochSet& set, const FeatureConfig& cfg) {
    const auto intervals = wm_intervals(set, cfg);
    FeatureMatrix fm;
    fm.values = Matrix(set.size(), set.n_channels * intervals.size());
    fm.labels = set.labels;
    for (std::size_t c = 0; c < set.n_channels; ++c)
        for (std::size_t i = 0; i < intervals.size(); ++i)
            fm.names.push_back("ch" + std::to_string(c) + "_win" + std::to_string(i));

    for (std::size_t e = 0; e < set.size(); ++e) {
        auto row = fm.values.row(e);
        std::size_t f = 0;
        for (std::size_t c = 0; c < set.n_channels; ++c) {
            const auto x = set.channel(e, c);
            for (const auto& [b, en] : intervals) {
                double sum = 0.0;
                for (std::size_t t = b; t < en; ++t) sum += x[t];
                row[f++] = sum / static_cast<double>(en - b);
            }
        }
    }
    return fm;
}

FeatureMatrix extract_raw(const EpochSet& set) {
    FeatureMatrix fm;
    fm.values = Matrix(set.size(), set.epoch_size(), set.data);
    fm.labels = set.labels;
    for (std::size_t c = 0; c < set.n_channels; ++c)
        for (std::size_t t = 0; t < set.n_samples; ++t)
            fm.names.push_back("ch" + std::to_string(c) + "_t" + std::to_string(t));
    return fm;
}

FeatureMatrix extract_features(const EpochSet& set, const FeatureConfig& cfg) {
    return cfg.mode == FeatureMode::raw ? extract_raw(set) : extract_wm(set, cfg);
}

void write_features_csv(const FeatureMatrix& fm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write " + path.string());
    out.precision(17);
    for (const auto& name : fm.names) out << name << ',';
    out << "label\n";
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        for (double v : fm.values.row(r)) out << v << ',';
        out << static_cast<int>(fm.labels[r]) << '\n';
    }
}

Standardizer Standardizer::fit(const Matrix& train) {
    if (train.rows() < 2) throw_runtime("standardizer needs at least two training rows");
    Standardizer s;
    s.mean_ = column_means(train);
    s.std_.assign(train.cols(), 0.0);
    for (std::size_t r = 0; r < train.rows(); ++r) {
        const auto row = train.row(r);
        for (std::size_t c = 0; c < train.cols(); ++c) {
            const double d = row[c] - s.mean_[c];
            s.std_[c] += d * d;
        }
    }
    for (double& sd : s.std_) {
        sd = std::sqrt(sd / static_cast<double>(train.rows()));
        if (sd < kDegenerateStd) {
            sd = 0.0;
            ++s.degenerate_;
        }
    }
    return s;
}

void Standardizer::apply_row(std::span<const double> in, std::span<double> out) const {
    if (in.size() != mean_.size()) throw_runtime("feature count does not match standardizer");
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = std_[c] == 0.0 ? 0.0 : (in[c] - mean_[c]) / std_[c];
}

Matrix Standardizer::apply(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) apply_row(x.row(r), out.row(r));
    return out;
}

FeatureMatrix Standardizer::apply(const FeatureMatrix& fm) const {
    FeatureMatrix out;
    out.values = apply(fm.values);
    out.labels = fm.labels;
    out.names = fm.names;
    return out;
}

nlohmann::json Standardizer::to_json() const {
    return {{"mean", mean_}, {"std", std_}};
}

Standardizer Standardizer::from_json(const nlohmann::json& j) {
    Standardizer s;
    j.at("mean").get_to(s.mean_);
    j.at("std").get_to(s.std_);
    if (s.mean_.size() != s.std_.size()) throw_data("standardizer mean/std length mismatch");
    for (double sd : s.std_)
        if (sd == 0.0) ++s.degenerate_;
    return s;
}

}  // namespace p300
