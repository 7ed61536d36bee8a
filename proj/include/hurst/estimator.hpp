#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurst/errors.hpp"
#include "hurst/wavelet.hpp"
#include "hurst/zeta.hpp"

namespace hurst {

/// Variance of y_j = log2 S_2(j) at an octave with n_j coefficients:
///
///   sigma_j^2 = zeta(2, n_j / 2) / ln^2 2
///
/// It depends only on the coefficient count, never on the data.
inline double octave_variance(std::size_t n_j) {
    if (n_j < 1) throw ValidationError("n_j", "octave_variance requires n_j >= 1");
    constexpr double ln2_sq = std::numbers::ln2 * std::numbers::ln2;
    return hurwitz_zeta2(static_cast<double>(n_j) / 2.0) / ln2_sq;
}

/// One octave of a logscale diagram. Octaves whose second moment is zero
/// stay in the diagram with included = false and y = NaN so callers can see
/// what was dropped.
struct LogscalePoint {
    std::size_t octave = 0;
    double y = 0.0;        ///< log2 S_2(j)
    std::size_t n = 0;     ///< coefficient count n_j
    double sigma_sq = 0.0; ///< octave variance, grows as n_j shrinks
    bool included = true;
};

/// Per-octave (j, y_j, n_j, sigma_j^2) points ready for the weighted fit.
struct LogscaleDiagram {
    std::vector<LogscalePoint> points;  ///< one per octave in [j1, j2]
    std::size_t j1 = 1;
    std::size_t j2 = 1;
    std::string symbol;
    std::string date;

    std::size_t included_count() const {
        std::size_t n = 0;
        for (const auto& p : points) n += p.included ? 1 : 0;
        return n;
    }
};

/// Weighted minimum-variance slope fit over a logscale diagram.
///
/// The weights satisfy sum w_j = 0 and sum w_j * j = 1, the defining
/// identities of an unbiased slope estimator; both are kept for audit.
struct SlopeEstimate {
    double alpha_hat = 0.0;
    double variance = 0.0;   ///< Var(alpha_hat) = sum sigma_j^2 w_j^2
    double intercept = 0.0;
    std::size_t j1 = 1;
    std::size_t j2 = 1;
    std::vector<std::size_t> octaves;  ///< octaves actually used
    std::vector<double> weights;       ///< aligned with `octaves`
};

/// Hurst point estimate with a two-standard-deviation (95%) interval.
struct HurstEstimate {
    double h = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool outside_nominal = false;  ///< set when H falls outside (0, 1); never clamped
    SlopeEstimate slope;
};

/// Treatment of the log-of-mean small-sample bias in y_j. The reference
/// methodology uses the raw ordinate, so raw is the default; corrected
/// subtracts the chi-square expectation offset
/// (psi(n_j/2) - ln(n_j/2)) / ln 2 from each y_j.
enum class BiasMode { raw, corrected };

inline LogscaleDiagram build_logscale(const WaveletDecomposition& decomp, std::size_t j1, std::size_t j2,
                                      BiasMode bias = BiasMode::raw) {
    if (j1 < 1 || j1 > j2) throw EmptyRange("octave range [" + std::to_string(j1) + ", " + std::to_string(j2) + "] is empty");
    if (j2 > decomp.max_octave())
        throw EmptyRange("octave " + std::to_string(j2) + " exceeds decomposition depth " +
                         std::to_string(decomp.max_octave()));

    const MomentTable table = moment(decomp, 2);
    LogscaleDiagram diagram;
    diagram.j1 = j1;
    diagram.j2 = j2;
    std::size_t usable = 0;
    for (std::size_t j = j1; j <= j2; ++j) {
        LogscalePoint p;
        p.octave = j;
        p.n = table.count(j);
        p.sigma_sq = octave_variance(p.n);
        const double s2 = table.at(j);
        if (s2 > 0.0) {
            p.y = std::log2(s2);
            if (bias == BiasMode::corrected) {
                const double half_n = static_cast<double>(p.n) / 2.0;
                p.y -= (digamma(half_n) - std::log(half_n)) / std::numbers::ln2;
            }
            p.included = true;
            ++usable;
        } else {
            p.y = std::numeric_limits<double>::quiet_NaN();
            p.included = false;
        }
        diagram.points.push_back(p);
    }
    if (usable == 0) throw AllOctavesDegenerate("all octaves in [" + std::to_string(j1) + ", " + std::to_string(j2) + "] have zero second moment");
    return diagram;
}

namespace detail {

/// Core weighted fit; callers enforce their own minimum point count.
inline SlopeEstimate fit_weighted(const LogscaleDiagram& diagram) {
    double s = 0.0, s_j = 0.0, s_jj = 0.0;
    for (const auto& p : diagram.points) {
        if (!p.included) continue;
        const double inv = 1.0 / p.sigma_sq;
        const double j = static_cast<double>(p.octave);
        s += inv;
        s_j += j * inv;
        s_jj += j * j * inv;
    }
    const double denom = s * s_jj - s_j * s_j;

    SlopeEstimate fit;
    fit.j1 = diagram.j1;
    fit.j2 = diagram.j2;
    double y_weighted = 0.0;
    for (const auto& p : diagram.points) {
        if (!p.included) continue;
        const double j = static_cast<double>(p.octave);
        const double w = (s * j - s_j) / (p.sigma_sq * denom);
        fit.octaves.push_back(p.octave);
        fit.weights.push_back(w);
        fit.alpha_hat += w * p.y;
        fit.variance += p.sigma_sq * w * w;
        y_weighted += p.y / p.sigma_sq;
    }
    fit.intercept = (y_weighted - fit.alpha_hat * s_j) / s;
    return fit;
}

}  // namespace detail

/// Minimum-variance unbiased slope over the included octaves.
///
///   alpha_hat = sum_j y_j (S j - S_j) / sigma_j^2 / (S S_jj - S_j^2)
///   Var(alpha_hat) = sum_j sigma_j^2 w_j^2
///
/// with S = sum 1/sigma_j^2, S_j = sum j/sigma_j^2, S_jj = sum j^2/sigma_j^2.
/// At least three usable octaves are required to call a trend a trend.
inline SlopeEstimate weighted_slope(const LogscaleDiagram& diagram) {
    const std::size_t usable = diagram.included_count();
    if (usable < 3) throw TooFewOctaves(usable);
    return detail::fit_weighted(diagram);
}

/// H = (alpha + 1) / 2; the confidence interval maps by the same affine rule.
inline double alpha_to_hurst(double alpha) { return (alpha + 1.0) / 2.0; }

inline HurstEstimate hurst_from_slope(const SlopeEstimate& slope) {
    HurstEstimate est;
    est.slope = slope;
    est.h = alpha_to_hurst(slope.alpha_hat);
    // Two standard deviations on alpha, halved by the affine map to H.
    const double half_width = std::sqrt(slope.variance);
    est.ci_low = est.h - half_width;
    est.ci_high = est.h + half_width;
    est.outside_nominal = !(est.h > 0.0 && est.h < 1.0);
    return est;
}

/// Daily pipeline: Haar DWT, second moments, logscale diagram over [j1, j2],
/// weighted slope, Hurst map. The decomposition depth is the requested
/// maximum clipped to what the series length supports; the fit range [j1, j2]
/// itself must be supported or the series is rejected.
inline HurstEstimate estimate_session(std::span<const double> series, std::size_t j1 = 1, std::size_t j2 = 10,
                                      std::size_t max_octave = 14, BiasMode bias = BiasMode::raw) {
    if (j2 < j1 || j1 < 1) throw EmptyRange("octave range [" + std::to_string(j1) + ", " + std::to_string(j2) + "] is empty");
    if (j2 >= 63 || (series.size() >> j2) == 0) throw SeriesTooShort(series.size(), j2);
    std::size_t depth = std::min<std::size_t>(std::max(j2, max_octave), 62);
    while (depth > j2 && (series.size() >> depth) == 0) --depth;
    const WaveletDecomposition decomp = haar_dwt(series, depth);
    const LogscaleDiagram diagram = build_logscale(decomp, j1, j2, bias);
    return hurst_from_slope(weighted_slope(diagram));
}

/// Two-regime report: an estimate over the high-frequency octaves
/// [1, split] and an indicative fit over the low-frequency remainder
/// [split+1, max]. The low fit is flagged indicative below three points and
/// omitted entirely below two.
struct BiscalingReport {
    SlopeEstimate high_frequency;
    std::optional<SlopeEstimate> low_frequency;
    std::size_t low_point_count = 0;
    bool low_indicative = false;  ///< true when the low region has < 3 points
};

inline BiscalingReport biscaling_report(const WaveletDecomposition& decomp, std::size_t split = 10) {
    BiscalingReport report;
    report.high_frequency = weighted_slope(build_logscale(decomp, 1, split));
    if (decomp.max_octave() <= split) return report;

    const LogscaleDiagram low = build_logscale(decomp, split + 1, decomp.max_octave());
    report.low_point_count = low.included_count();
    report.low_indicative = report.low_point_count < 3;
    if (report.low_point_count >= 2) report.low_frequency = detail::fit_weighted(low);
    return report;
}

/// Result of mapping a heavy-tail exponent onto H; distinct from the
/// logscale slope and never interconvertible with it.
struct TailHurst {
    double h = 0.0;
    bool boundary = false;  ///< tail_alpha sat on the edge of its domain
};

/// H = (3 - tail_alpha) / 2 for a traded-value tail exponent in (0, 2).
/// The boundary value 2 is accepted with a flag; anything else outside the
/// open interval is rejected.
inline TailHurst tail_alpha_to_hurst(double tail_alpha) {
    if (!(tail_alpha > 0.0) || tail_alpha > 2.0)
        throw ValidationError("tail_alpha", "must lie in (0, 2], got " + std::to_string(tail_alpha));
    return TailHurst{(3.0 - tail_alpha) / 2.0, tail_alpha == 2.0};
}

}  // namespace hurst
