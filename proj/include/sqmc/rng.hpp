#pragma once

#include <cstdint>
#include <limits>

namespace sqmc {

// SplitMix64 finalizer. Full-avalanche 64-bit mix, used both as the core of
// the counter-based generator and as the keyed hash behind Owen scrambling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Hash of a (key, word) pair with distinct mixing per position.
constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(key ^ (word * 0xd1b54a32d192ed03ULL));
}

// Counter-based generator: output n is a pure function of (seed, stream, n),
// so runs keyed by (run-seed, t) are reproducible and order-independent.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(seed) ^ mix64(mix64(stream) + 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<std::uint64_t>::max();
    }

    result_type operator()() noexcept { return hash_combine(key_, counter_++); }

    // Uniform on [0, 1), 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace sqmc
