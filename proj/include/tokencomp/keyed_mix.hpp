#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace tokencomp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive digest of (seed, operation name, input bytes). All mock
/// randomness is derived from such digests, never from global state.
class KeyedDigest {
public:
    KeyedDigest(std::uint64_t seed, std::string_view op) : state_(mix64(seed)) { absorb(op); }

    KeyedDigest& absorb(std::span<const std::uint8_t> bytes) {
        std::size_t i = 0;
        for (; i + 8 <= bytes.size(); i += 8) {
            std::uint64_t w;
            std::memcpy(&w, bytes.data() + i, 8);
            word(w);
        }
        std::uint64_t tail = 0;
        std::memcpy(&tail, bytes.data() + i, bytes.size() - i);
        word(tail ^ (static_cast<std::uint64_t>(bytes.size() - i) << 56));
        return *this;
    }
    KeyedDigest& absorb(std::string_view text) {
        return absorb(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    KeyedDigest& absorb(std::span<const double> values) {
        return absorb(std::span(reinterpret_cast<const std::uint8_t*>(values.data()), values.size_bytes()));
    }
    KeyedDigest& absorb(std::int64_t v) {
        word(static_cast<std::uint64_t>(v));
        return *this;
    }
    KeyedDigest& absorb(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        word(bits);
        return *this;
    }

    std::uint64_t value() const { return mix64(state_ ^ (count_ * 0xd6e8feb86659fd93ULL)); }

private:
    void word(std::uint64_t w) {
        state_ = mix64(state_ ^ mix64(w + count_ * 0x9e3779b97f4a7c15ULL));
        ++count_;
    }

    std::uint64_t state_;
    std::uint64_t count_ = 0;
};

/// Counter-based stream: the n-th draw is a pure function of (key, n).
class CounterStream {
public:
    explicit CounterStream(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t n) const { return mix64(key_ ^ mix64(n)); }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t n) const { return static_cast<double>(bits(n) >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller on draws 2n and 2n + 1.
    double normal(std::uint64_t n) const;

private:
    std::uint64_t key_;
};

}  // namespace tokencomp
