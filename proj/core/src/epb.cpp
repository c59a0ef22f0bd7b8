#include "p300bench/epb.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "p300bench/error.hpp"

namespace p300 {

namespace {

constexpr char kMagic[4] = {'E', 'R', 'P', 'B'};
constexpr std::size_t kFixedHeaderBytes = 4 + 2 + 4 + 2 + 4 + 4 + 4;

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    template <typename T>
    void put(T value) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
    void put_f32(float value) { put(std::bit_cast<std::uint32_t>(value)); }
    void put_bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }

private:
    std::vector<std::uint8_t>& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw_data("corrupt file");
    }
    template <typename T>
    T get() {
        need(sizeof(T));
        using U = std::make_unsigned_t<T>;
        U u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }
    float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }
    std::span<const std::uint8_t> get_bytes(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_epb(const EpochSet& set) {
    set.validate();
    if (set.size() > std::numeric_limits<std::uint32_t>::max() ||
        set.n_channels > std::numeric_limits<std::uint16_t>::max() ||
        set.n_samples > std::numeric_limits<std::uint32_t>::max())
        throw_data("epoch set too large for EPB v1");

    std::vector<std::uint8_t> out;
    out.reserve(kFixedHeaderBytes + set.n_channels * kEpbNameWidth + set.size() * 5 + set.data.size() * 4);
    Writer w(out);
    w.put_bytes(kMagic, sizeof kMagic);
    w.put(kEpbVersion);
    w.put(static_cast<std::uint32_t>(set.size()));
    w.put(static_cast<std::uint16_t>(set.n_channels));
    w.put(static_cast<std::uint32_t>(set.n_samples));
    w.put_f32(static_cast<float>(set.sampling_rate_hz));
    w.put_f32(static_cast<float>(set.prestim_ms));
    for (const auto& name : set.channel_names) {
        if (name.size() > kEpbNameWidth) throw_data("channel name longer than 8 characters: " + name);
        char padded[kEpbNameWidth];
        std::memset(padded, ' ', kEpbNameWidth);
        std::memcpy(padded, name.data(), name.size());
        w.put_bytes(padded, kEpbNameWidth);
    }
    for (Label l : set.labels) w.put(static_cast<std::uint8_t>(l));
    for (std::int32_t s : set.subject_ids) w.put(s);
    for (double v : set.data) {
        const auto f = static_cast<float>(v);
        if (!std::isfinite(f)) throw_data("invalid amplitude");
        w.put_f32(f);
    }
    return out;
}

EpochSet decode_epb(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof kMagic + 2 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw_data("unrecognized container");
    Reader r(bytes);
    r.get_bytes(sizeof kMagic);
    if (r.get<std::uint16_t>() != kEpbVersion) throw_data("unrecognized container");

    EpochSet set;
    const std::uint32_t n_epochs = r.get<std::uint32_t>();
    set.n_channels = r.get<std::uint16_t>();
    set.n_samples = r.get<std::uint32_t>();
    set.sampling_rate_hz = r.get_f32();
    set.prestim_ms = r.get_f32();

    for (std::size_t c = 0; c < set.n_channels; ++c) {
        const auto raw = r.get_bytes(kEpbNameWidth);
        std::string name(raw.begin(), raw.end());
        name.erase(name.find_last_not_of(' ') + 1);
        set.channel_names.push_back(std::move(name));
    }
    const std::uint64_t n_values = std::uint64_t{n_epochs} * set.n_channels * set.n_samples;
    const std::uint64_t payload = std::uint64_t{n_epochs} * 5 + n_values * 4;
    if (r.remaining() != payload) throw_data("corrupt file");

    set.labels.resize(n_epochs);
    for (auto& l : set.labels) {
        l = r.get<std::uint8_t>();
        if (l > 1) throw_data("corrupt file");
    }
    set.subject_ids.resize(n_epochs);
    for (auto& s : set.subject_ids) s = r.get<std::int32_t>();
    set.data.resize(n_values);
    for (auto& v : set.data) {
        const float f = r.get_f32();
        if (!std::isfinite(f)) throw_data("invalid amplitude");
        v = f;
    }
    if (set.n_channels == 0 || set.n_samples == 0 || !(set.sampling_rate_hz > 0.0) || !(set.prestim_ms >= 0.0))
        throw_data("corrupt file");
    return set;
}

EpochSet read_epb(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw_data("cannot open " + path.string());
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw_data("cannot read " + path.string());
    return decode_epb(bytes);
}

void write_epb(const EpochSet& set, const std::filesystem::path& path) {
    const auto bytes = encode_epb(set);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_data("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_data("cannot write " + path.string());
}

}  // namespace p300
