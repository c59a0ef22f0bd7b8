#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "p300bench/epochs.hpp"

namespace p300 {

// EPB v1 container, little-endian throughout:
//
//   "ERPB"                      4 bytes magic
//   u16 version (= 1)
//   u32 n_epochs
//   u16 n_channels
//   u32 n_samples
//   f32 sampling_rate_hz
//   f32 prestim_ms
//   n_channels x 8 bytes        channel names, ASCII, right-padded with spaces
//   n_epochs x u8               labels
//   n_epochs x i32              subject ids
//   n_epochs*n_channels*n_samples x f32   amplitudes [epoch][channel][sample]
//
// Amplitudes are narrowed to f32 on write. Reading a file and writing it back
// reproduces it byte for byte.

inline constexpr std::uint16_t kEpbVersion = 1;
inline constexpr std::size_t kEpbNameWidth = 8;

std::vector<std::uint8_t> encode_epb(const EpochSet& set);
EpochSet decode_epb(std::span<const std::uint8_t> bytes);

EpochSet read_epb(const std::filesystem::path& path);
void write_epb(const EpochSet& set, const std::filesystem::path& path);

}  // namespace p300
