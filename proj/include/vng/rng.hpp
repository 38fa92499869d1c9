#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace vng {

/// Counter-based generator: the i-th draw of stream s under seed k is
///   splitmix64(key + i * 0x9E3779B97F4A7C15),  key = splitmix64(k ^ splitmix64(s + 0x9E3779B97F4A7C15)),
/// where splitmix64 is the finalizer of Steele, Lea and Flood's SplitMix64.
/// Draws of one stream never depend on another stream, so path i of a batch
/// is a function of (seed, i) alone.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + kGolden))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t operator()() { return mix(key_ + (++counter_) * kGolden); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard exponential variate.
    double exponential() { return -std::log(uniform_pos()); }

    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace vng
