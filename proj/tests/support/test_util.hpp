#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>
#include <vector>

#include "p300bench/epochs.hpp"
#include "p300bench/rng.hpp"

namespace p300::testing {

/// Removed with its contents on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("p300bench_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Gaussian amplitudes, alternating labels unless `labels` is given.
inline EpochSet random_set(std::size_t n, std::size_t channels, std::size_t samples, std::uint64_t seed,
                           double prestim_ms = 0.0, double rate = 1000.0) {
    SeededRng rng(seed);
    EpochSet s;
    s.n_channels = channels;
    s.n_samples = samples;
    s.sampling_rate_hz = rate;
    s.prestim_ms = prestim_ms;
    s.channel_names = default_channel_names(channels);
    std::vector<double> w(channels * samples);
    for (std::size_t e = 0; e < n; ++e) {
        for (double& v : w) v = rng.normal(0.0, 10.0);
        s.append(w, static_cast<Label>(e % 2), static_cast<std::int32_t>(e / 4));
    }
    return s;
}

}  // namespace p300::testing
