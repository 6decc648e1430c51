#pragma once

#include <cmath>
#include <cstdint>

namespace lf {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937 because the
// algorithm is a dozen lines and reproduces the same stream in any language,
// which keeps generated fixtures portable across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one value per pair of uniforms so the
    // consumption pattern stays position-independent.
    double next_normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Derives an independent stream; mixing through one step decorrelates
    // consecutive stream ids.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 mixer(seed ^ (0xA24BAED4963EE407ull * (stream_id + 1)));
        return SplitMix64(mixer.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace lf
