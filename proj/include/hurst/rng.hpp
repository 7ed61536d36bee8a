#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace hurst {

/// Deterministic 64-bit generator: splitmix64 (Steele, Lea & Flood 2014).
///
///   state' = state + 0x9E3779B97F4A7C15
///   output = mix(state')   with the published two-multiply finalizer
///
/// Chosen over std facilities because the full stream, including the
/// Gaussian and bounded-integer layers below, is pinned by this header and
/// reproducible from any language; std distributions are not specified.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), top 53 bits of the stream.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; never zero, safe under log().
    double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    /// Unbiased integer in [0, n) by rejection below 2^64 mod n.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    /// Standard normal via Box-Muller on (uniform_pos, uniform) pairs;
    /// the second member of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Stable sub-stream derivation so independent components of one seeded run
/// (e.g. the two legs of a superposition) never share a stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1))).next();
}

/// In-place Fisher-Yates permutation with unbiased index draws.
template <typename T>
void fisher_yates(std::vector<T>& xs, std::uint64_t seed) {
    SplitMix64 gen(seed);
    for (std::size_t i = xs.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(gen.bounded(i));
        std::swap(xs[i - 1], xs[j]);
    }
}

}  // namespace hurst
