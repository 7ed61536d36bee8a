#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hurst/errors.hpp"

namespace hurst {

/// Orthonormal Haar pyramid of a sampled series.
///
/// Level j is computed from the level j-1 approximation path: for each
/// consecutive sample pair,
///
///   detail        = (even - odd) / sqrt(2)
///   approximation = (even + odd) / sqrt(2)
///
/// An odd-length level retires its trailing sample to `carried` instead of
/// pairing it, so the per-octave coefficient count is n_j = floor(N / 2^j).
/// Energy is conserved: details + final approximation + carried samples sum
/// to the input energy (the transform is orthonormal and carried samples
/// pass through untouched).
struct WaveletDecomposition {
    std::vector<std::vector<double>> octaves;  ///< octaves[j-1] holds d(j, k), k = 0..n_j-1
    std::vector<double> approximation;         ///< approximation path after the last level
    std::vector<double> carried;               ///< odd-tail samples retired along the way
    double sample_interval = 1.0;              ///< lambda_0, seconds between samples
    std::string wavelet_id = "haar";

    std::size_t max_octave() const noexcept { return octaves.size(); }
    std::size_t count(std::size_t j) const { return octaves[j - 1].size(); }
    std::span<const double> details(std::size_t j) const { return octaves[j - 1]; }

    double detail_energy() const {
        double e = 0.0;
        for (const auto& level : octaves)
            for (double d : level) e += d * d;
        return e;
    }

    double approximation_energy() const {
        double e = 0.0;
        for (double a : approximation) e += a * a;
        for (double c : carried) e += c * c;
        return e;
    }
};

/// Per-octave moments S_n(j) = (1/n_j) sum_k |d(j,k)|^n.
struct MomentTable {
    int order = 2;
    std::vector<double> values;       ///< values[j-1] = S_n(j)
    std::vector<std::size_t> counts;  ///< counts[j-1] = n_j

    std::size_t max_octave() const noexcept { return values.size(); }
    double at(std::size_t j) const { return values[j - 1]; }
    std::size_t count(std::size_t j) const { return counts[j - 1]; }
};

/// Haar DWT over `max_octave` levels. Requires floor(N / 2^max_octave) >= 1,
/// i.e. at least one detail coefficient at the deepest octave.
inline WaveletDecomposition haar_dwt(std::span<const double> series, std::size_t max_octave,
                                     double sample_interval = 1.0) {
    if (max_octave < 1) throw ValidationError("max_octave", "must be >= 1");
    if (max_octave >= 63 || (series.size() >> max_octave) == 0)
        throw SeriesTooShort(series.size(), max_octave);

    WaveletDecomposition out;
    out.sample_interval = sample_interval;
    out.octaves.reserve(max_octave);

    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    std::vector<double> approx(series.begin(), series.end());
    for (std::size_t j = 1; j <= max_octave; ++j) {
        const std::size_t pairs = approx.size() / 2;
        std::vector<double> details(pairs);
        std::vector<double> next(pairs);
        for (std::size_t k = 0; k < pairs; ++k) {
            const double even = approx[2 * k];
            const double odd = approx[2 * k + 1];
            details[k] = (even - odd) * inv_sqrt2;
            next[k] = (even + odd) * inv_sqrt2;
        }
        if (approx.size() % 2 != 0) out.carried.push_back(approx.back());
        out.octaves.push_back(std::move(details));
        approx = std::move(next);
    }
    out.approximation = std::move(approx);
    return out;
}

inline MomentTable moment(const WaveletDecomposition& decomp, int order = 2) {
    if (order < 1) throw ValidationError("order", "moment order must be >= 1");
    MomentTable table;
    table.order = order;
    table.values.reserve(decomp.max_octave());
    table.counts.reserve(decomp.max_octave());
    for (const auto& level : decomp.octaves) {
        double sum = 0.0;
        if (order == 2) {
            for (double d : level) sum += d * d;
        } else {
            for (double d : level) sum += std::pow(std::abs(d), order);
        }
        table.values.push_back(level.empty() ? 0.0 : sum / static_cast<double>(level.size()));
        table.counts.push_back(level.size());
    }
    return table;
}

}  // namespace hurst
