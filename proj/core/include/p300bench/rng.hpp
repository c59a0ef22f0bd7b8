#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>

namespace p300 {

/// splitmix64 finalizer; used for seeding and for deriving child streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic pseudo-random generator: xoshiro256** seeded through splitmix64.
///
/// The integer stream is fixed for a given seed on every platform. Child
/// generators are seeded with splitmix64(seed ^ splitmix64(index + 1)) and are
/// treated as independent streams; parallel workers must each derive a child
/// instead of sharing one generator.
///
/// Also satisfies UniformRandomBitGenerator, but library code never passes it
/// to <random> distributions because their output is implementation-defined.
class SeededRng {
public:
    using result_type = std::uint64_t;

    explicit SeededRng(std::uint64_t seed = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer on [0, n); n must be > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;
    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

    SeededRng child(std::uint64_t index) const noexcept;

    template <typename T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
    std::optional<double> spare_normal_;
};

}  // namespace p300
