#pragma once

// Counter-based random streams keyed by (seed, stream id). A stream holds no
// shared state; the i-th draw of a stream is a pure function of its key and
// the counter, so any number of replications can run in any order and still
// reproduce bit-for-bit.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace negassoc {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : key_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next_u64() {
        ++counter_;
        return splitmix64(key_ ^ splitmix64(counter_));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes two draws per call.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Independent child stream; does not advance this one.
    Stream split(std::uint64_t child) const { return Stream(key_, child); }

    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace negassoc
