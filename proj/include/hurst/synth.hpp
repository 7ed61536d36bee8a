#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hurst/errors.hpp"
#include "hurst/fft.hpp"
#include "hurst/rng.hpp"

namespace hurst {

enum class SynthKind { white, fgn, superposition };

inline const char* synth_kind_name(SynthKind k) {
    switch (k) {
        case SynthKind::white: return "white";
        case SynthKind::fgn: return "fgn";
        case SynthKind::superposition: return "superposition";
    }
    return "?";
}

inline SynthKind parse_synth_kind(const std::string& s) {
    if (s == "white") return SynthKind::white;
    if (s == "fgn") return SynthKind::fgn;
    if (s == "superposition") return SynthKind::superposition;
    throw ValidationError("kind", "expected white|fgn|superposition, got '" + s + "'");
}

/// Recipe for a synthetic series with known self-similarity.
struct SynthSpec {
    SynthKind kind = SynthKind::white;
    double target_h = 0.5;      ///< Hurst exponent of the self-similar component
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double mix_weight = 0.0;    ///< superposition only: variance share of the fGn leg

    void validate() const {
        if (length < 2) throw ValidationError("length", "must be >= 2, got " + std::to_string(length));
        if (!(target_h > 0.0 && target_h < 1.0))
            throw ValidationError("target_H", "must lie in (0, 1), got " + std::to_string(target_h));
        if (!(mix_weight >= 0.0 && mix_weight <= 1.0))
            throw ValidationError("mix_weight", "must lie in [0, 1], got " + std::to_string(mix_weight));
    }
};

/// Exact autocovariance of unit-variance fractional Gaussian noise:
///   gamma(k) = ((k+1)^2H - 2 k^2H + (k-1)^2H) / 2
inline double fgn_autocovariance(double h, std::size_t lag) {
    if (lag == 0) return 1.0;
    const double k = static_cast<double>(lag);
    const double two_h = 2.0 * h;
    return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
}

namespace detail {

/// Davies-Harte / circulant-embedding draw of N samples of fGn(H).
///
/// The covariance sequence gamma(0..N'-1) is embedded in a circulant of
/// size M = 2^(k+1) (with N' = 2^k + 1 >= N), whose eigenvalues come out of
/// one real FFT. Independent Gaussians are shaped in the frequency domain
/// under Hermitian symmetry and transformed back; the first N samples carry
/// the exact target covariance. Gaussian draw order is fixed, so streams are
/// reproducible per seed.
inline std::vector<double> fgn_circulant(double h, std::size_t n, std::uint64_t seed) {
    std::size_t k = 1;
    while (((std::size_t{1} << k) + 1) < std::max<std::size_t>(n, 2)) ++k;
    const std::size_t n_prime = (std::size_t{1} << k) + 1;
    const std::size_t m = 2 * (n_prime - 1);

    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j < n_prime; ++j) c[j] = fgn_autocovariance(h, j);
    for (std::size_t j = 1; j + 1 < n_prime; ++j) c[m - j] = c[j];
    fft_pow2(c);

    double lambda_max = 0.0;
    for (const auto& v : c) lambda_max = std::max(lambda_max, v.real());
    std::vector<double> lambda(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double value = c[j].real();
        if (value < -1e-8 * lambda_max) throw EmbeddingError(h, n);
        lambda[j] = value < 0.0 ? 0.0 : value;
    }

    SplitMix64 gen(seed);
    const std::size_t half = m / 2;
    std::vector<std::complex<double>> spectrum(m);
    spectrum[0] = std::sqrt(lambda[0]) * gen.gaussian();
    spectrum[half] = std::sqrt(lambda[half]) * gen.gaussian();
    for (std::size_t j = 1; j < half; ++j) {
        const double re = gen.gaussian();
        const double im = gen.gaussian();
        const double amp = std::sqrt(lambda[j] / 2.0);
        spectrum[j] = std::complex<double>(amp * re, amp * im);
        spectrum[m - j] = std::conj(spectrum[j]);
    }
    fft_pow2(spectrum);

    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = spectrum[j].real() * norm;
    return out;
}

}  // namespace detail

/// Stationary unit-variance Gaussian series with the exact fGn covariance.
/// kind = white draws i.i.d. Gaussians directly (fGn at H = 1/2 is white
/// noise); kind = fgn goes through the circulant embedding. Deterministic
/// per (kind, seed).
inline std::vector<double> fgn_generate(const SynthSpec& spec) {
    spec.validate();
    if (spec.kind == SynthKind::superposition)
        throw ValidationError("kind", "fgn_generate handles white|fgn; use superpose");
    if (spec.kind == SynthKind::white) {
        SplitMix64 gen(spec.seed);
        std::vector<double> out(spec.length);
        for (auto& x : out) x = gen.gaussian();
        return out;
    }
    return detail::fgn_circulant(spec.target_h, spec.length, spec.seed);
}

/// Uniform random permutation (Fisher-Yates), deterministic per seed.
/// The multiset of values is preserved exactly.
inline std::vector<double> shuffle(std::vector<double> series, std::uint64_t seed) {
    fisher_yates(series, seed);
    return series;
}

/// Two-noise mix with unit total variance:
///   x = sqrt(1 - w) * white + sqrt(w) * fgn(target_H)
/// The legs run on independent derived sub-streams of the seed.
inline std::vector<double> superpose(const SynthSpec& spec) {
    spec.validate();
    if (spec.kind != SynthKind::superposition)
        throw ValidationError("kind", "superpose requires kind = superposition");

    SynthSpec white_leg{SynthKind::white, 0.5, spec.length, derive_seed(spec.seed, 0), 0.0};
    SynthSpec fgn_leg{SynthKind::fgn, spec.target_h, spec.length, derive_seed(spec.seed, 1), 0.0};
    const std::vector<double> white = fgn_generate(white_leg);
    const std::vector<double> fractal = fgn_generate(fgn_leg);

    const double a = std::sqrt(1.0 - spec.mix_weight);
    const double b = std::sqrt(spec.mix_weight);
    std::vector<double> out(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i) out[i] = a * white[i] + b * fractal[i];
    return out;
}

/// Dispatch on spec.kind.
inline std::vector<double> generate(const SynthSpec& spec) {
    return spec.kind == SynthKind::superposition ? superpose(spec) : fgn_generate(spec);
}

}  // namespace hurst
