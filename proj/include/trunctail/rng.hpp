#pragma once

#include <cstdint>

namespace trunctail {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Combine a key with one more word; order-sensitive.
constexpr std::uint64_t mix_seed(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(key ^ mix64(word + 0x9e3779b97f4a7c15ULL));
}

// Counter-based stream: the j-th output is mix64(key + (j + 1) * golden),
// i.e. SplitMix64 seeded with `key`. Any element can be addressed directly,
// so streams never depend on the order in which work is scheduled.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t at(std::uint64_t index) const noexcept {
        return mix64(key_ + (index + 1) * kGolden);
    }

    constexpr std::uint64_t next() noexcept { return at(counter_++); }

    // Uniform on the open interval (0, 1): 53 random bits, centered in their cell.
    constexpr double uniform_at(std::uint64_t index) const noexcept {
        return (static_cast<double>(at(index) >> 11) + 0.5) * 0x1.0p-53;
    }

    constexpr double next_uniform() noexcept { return uniform_at(counter_++); }

    constexpr std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace trunctail
