#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hurst/estimator.hpp"
#include "hurst/export.hpp"
#include "hurst/rng.hpp"
#include "hurst/synth.hpp"
#include "hurst/wavelet.hpp"
#include "oracles.hpp"

using namespace hurst;

namespace {

std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed) {
    SplitMix64 gen(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = gen.gaussian();
    return xs;
}

std::size_t line_countable(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

/// Diagram with arbitrary y values and paper octave variances.
LogscaleDiagram make_diagram(const std::vector<double>& ys, std::size_t n0 = 23400) {
    LogscaleDiagram diagram;
    diagram.j1 = 1;
    diagram.j2 = ys.size();
    for (std::size_t j = 1; j <= ys.size(); ++j) {
        LogscalePoint p;
        p.octave = j;
        p.y = ys[j - 1];
        p.n = n0 >> j;
        p.sigma_sq = octave_variance(p.n);
        diagram.points.push_back(p);
    }
    return diagram;
}

}  // namespace

TEST_CASE("logscale of an alternating pair series has y_1 = 1") {
    // d(1,.) = (sqrt(2), sqrt(2)) so S_2(1) = 2 and log2 gives exactly 1.
    const std::vector<double> xs{1.0, -1.0, 1.0, -1.0};
    const auto diagram = build_logscale(haar_dwt(xs, 1), 1, 1);
    REQUIRE(diagram.points.size() == 1);
    REQUIRE_THAT(diagram.points[0].y, Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("an all-zero series has no usable octaves") {
    const std::vector<double> xs(64, 0.0);
    REQUIRE_THROWS_AS(build_logscale(haar_dwt(xs, 4), 1, 4), AllOctavesDegenerate);
}

TEST_CASE("bad octave ranges are rejected") {
    const auto decomp = haar_dwt(gaussian_series(256, 1), 6);
    REQUIRE_THROWS_AS(build_logscale(decomp, 3, 2), EmptyRange);
    REQUIRE_THROWS_AS(build_logscale(decomp, 0, 4), EmptyRange);
    REQUIRE_THROWS_AS(build_logscale(decomp, 1, 7), EmptyRange);
}

TEST_CASE("white-noise logscale diagrams are flat on ensemble average") {
    constexpr int kReps = 50;
    double alpha_sum = 0.0;
    for (int rep = 0; rep < kReps; ++rep) {
        const auto xs = gaussian_series(23400, 100 + rep);
        const auto diagram = build_logscale(haar_dwt(xs, 10), 1, 10);
        REQUIRE(diagram.points.size() == 10);
        alpha_sum += weighted_slope(diagram).alpha_hat;
    }
    REQUIRE_THAT(alpha_sum / kReps, Catch::Matchers::WithinAbs(0.0, 0.005));
}

TEST_CASE("identical y values give a slope of exactly zero") {
    const auto fit = weighted_slope(make_diagram({3.7, 3.7, 3.7, 3.7, 3.7}));
    REQUIRE_THAT(fit.alpha_hat, Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(fit.intercept, Catch::Matchers::WithinAbs(3.7, 1e-12));
}

TEST_CASE("exact linear diagrams recover slope and intercept regardless of weights") {
    std::vector<double> ys;
    for (std::size_t j = 1; j <= 10; ++j) ys.push_back(2.0 * static_cast<double>(j) + 5.0);

    auto diagram = make_diagram(ys);
    auto fit = weighted_slope(diagram);
    REQUIRE_THAT(fit.alpha_hat, Catch::Matchers::WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(fit.intercept, Catch::Matchers::WithinAbs(5.0, 1e-12));

    // Arbitrary positive variances must not move an exact line.
    SplitMix64 gen(4);
    for (auto& p : diagram.points) p.sigma_sq = 0.1 + 3.0 * gen.uniform();
    fit = detail::fit_weighted(diagram);
    REQUIRE_THAT(fit.alpha_hat, Catch::Matchers::WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(fit.intercept, Catch::Matchers::WithinAbs(5.0, 1e-12));
}

TEST_CASE("weighted slope agrees with the direct normal-equation oracle") {
    SplitMix64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 3 + gen.bounded(9);
        std::vector<double> ys(count);
        for (auto& y : ys) y = 10.0 * gen.uniform() - 5.0;
        const auto diagram = make_diagram(ys);
        const auto fit = weighted_slope(diagram);

        std::vector<double> xs(count), vars(count);
        for (std::size_t i = 0; i < count; ++i) {
            xs[i] = static_cast<double>(diagram.points[i].octave);
            vars[i] = diagram.points[i].sigma_sq;
        }
        const auto oracle = oracles::wls_normal_equations(xs, ys, vars);
        REQUIRE_THAT(fit.alpha_hat, Catch::Matchers::WithinAbs(oracle.slope, 1e-10));
        REQUIRE_THAT(fit.intercept, Catch::Matchers::WithinAbs(oracle.intercept, 1e-10));
    }
}

TEST_CASE("weights satisfy the unbiased-slope identities") {
    SplitMix64 gen(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 3 + gen.bounded(10);
        std::vector<double> ys(count, 0.0);
        auto diagram = make_diagram(ys, 1u << (count + 4));
        // Randomised counts to vary the variance profile.
        for (auto& p : diagram.points) {
            p.n = 1 + gen.bounded(20000);
            p.sigma_sq = octave_variance(p.n);
        }
        const auto fit = detail::fit_weighted(diagram);
        double sum_w = 0.0, sum_wj = 0.0;
        for (std::size_t i = 0; i < fit.weights.size(); ++i) {
            sum_w += fit.weights[i];
            sum_wj += fit.weights[i] * static_cast<double>(fit.octaves[i]);
        }
        REQUIRE_THAT(sum_w, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(sum_wj, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("fewer than three usable octaves is an error") {
    REQUIRE_THROWS_AS(weighted_slope(make_diagram({1.0, 2.0})), TooFewOctaves);
}

TEST_CASE("alpha to Hurst is the exact affine map") {
    REQUIRE(alpha_to_hurst(0.0) == 0.5);
    REQUIRE(alpha_to_hurst(1.0) == 1.0);
    REQUIRE(alpha_to_hurst(0.2) == 0.6);
}

TEST_CASE("H outside (0,1) is flagged, not clamped") {
    SlopeEstimate slope;
    slope.alpha_hat = 1.4;  // H = 1.2
    slope.variance = 1e-4;
    const auto est = hurst_from_slope(slope);
    REQUIRE(est.h == 1.2);
    REQUIRE(est.outside_nominal);
    slope.alpha_hat = 0.0;
    REQUIRE_FALSE(hurst_from_slope(slope).outside_nominal);
}

TEST_CASE("session estimate on white noise sits near one half with the paper CI") {
    const auto est = estimate_session(std::span<const double>(gaussian_series(23400, 42)), 1, 10, 14);
    REQUIRE_THAT(est.h, Catch::Matchers::WithinAbs(0.5, 0.02));
    const double half_width = (est.ci_high - est.ci_low) / 2.0;
    REQUIRE(half_width >= 0.0085);
    REQUIRE(half_width <= 0.0115);
    REQUIRE(est.ci_low < est.h);
    REQUIRE(est.h < est.ci_high);
}

TEST_CASE("sessions shorter than 2^j2 are rejected") {
    const auto xs = gaussian_series(512, 3);
    REQUIRE_THROWS_AS(estimate_session(std::span<const double>(xs), 1, 10, 14), SeriesTooShort);
}

TEST_CASE("estimator variance is data independent") {
    const auto a = estimate_session(std::span<const double>(gaussian_series(23400, 1)));
    const auto b = estimate_session(std::span<const double>(gaussian_series(23400, 2)));
    REQUIRE(a.slope.variance == b.slope.variance);
}

TEST_CASE("scaling the input leaves slope and H unchanged") {
    const auto xs = gaussian_series(23400, 21);
    std::vector<double> scaled(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) scaled[i] = 4.0 * xs[i];

    const auto base = estimate_session(std::span<const double>(xs));
    const auto big = estimate_session(std::span<const double>(scaled));
    REQUIRE_THAT(big.slope.alpha_hat, Catch::Matchers::WithinAbs(base.slope.alpha_hat, 1e-12));
    REQUIRE_THAT(big.h, Catch::Matchers::WithinAbs(base.h, 1e-12));
    // Every y_j shifts by exactly 2 log2(4) = 4.
    const auto d0 = build_logscale(haar_dwt(xs, 10), 1, 10);
    const auto d1 = build_logscale(haar_dwt(scaled, 10), 1, 10);
    for (std::size_t i = 0; i < d0.points.size(); ++i)
        REQUIRE_THAT(d1.points[i].y - d0.points[i].y, Catch::Matchers::WithinAbs(4.0, 1e-12));
}

TEST_CASE("doubling the series length shrinks the slope deviation by sqrt(2)") {
    const auto a = estimate_session(std::span<const double>(gaussian_series(23400, 5)));
    const auto b = estimate_session(std::span<const double>(gaussian_series(46800, 6)));
    const double ratio = std::sqrt(a.slope.variance) / std::sqrt(b.slope.variance);
    REQUIRE_THAT(ratio, Catch::Matchers::WithinRel(std::numbers::sqrt2, 0.05));
}

TEST_CASE("biscaling on a single regime reports compatible slopes") {
    const auto decomp = haar_dwt(gaussian_series(23400, 33), 14);
    const auto report = biscaling_report(decomp);
    REQUIRE(report.low_frequency.has_value());
    const double gap = std::abs(report.high_frequency.alpha_hat - report.low_frequency->alpha_hat);
    const double se = std::sqrt(report.high_frequency.variance + report.low_frequency->variance);
    REQUIRE(gap <= 3.0 * se);
}

TEST_CASE("biscaling separates an injected coarse-scale regime") {
    // White noise at fine scales; strong LRD injected at octaves 11+ by
    // scaling coefficients 2^(2(j-10)), i.e. +4 per octave in y. The low
    // region has very few coefficients, so its fit variance is large and the
    // injected slope must clear it decisively.
    auto decomp = haar_dwt(gaussian_series(23400, 34), 14);
    for (std::size_t j = 11; j <= 14; ++j) {
        const double factor = std::pow(2.0, 2.0 * (static_cast<double>(j) - 10.0));
        for (auto& d : decomp.octaves[j - 1]) d *= factor;
    }
    const auto report = biscaling_report(decomp);
    REQUIRE(report.low_frequency.has_value());
    const double gap = std::abs(report.high_frequency.alpha_hat - report.low_frequency->alpha_hat);
    const double se = std::sqrt(report.high_frequency.variance + report.low_frequency->variance);
    REQUIRE(gap > 3.0 * se);
    REQUIRE(report.low_indicative == false);
    REQUIRE(report.low_point_count == 4);
}

TEST_CASE("a one-point low region is indicative only") {
    const auto decomp = haar_dwt(gaussian_series(4096, 35), 11);
    const auto report = biscaling_report(decomp);
    REQUIRE(report.low_point_count == 1);
    REQUIRE(report.low_indicative);
    REQUIRE_FALSE(report.low_frequency.has_value());
}

TEST_CASE("tail exponent maps onto H by (3 - alpha)/2") {
    REQUIRE(tail_alpha_to_hurst(1.0).h == 1.0);
    REQUIRE(tail_alpha_to_hurst(1.5).h == 0.75);
    const auto boundary = tail_alpha_to_hurst(2.0);
    REQUIRE(boundary.h == 0.5);
    REQUIRE(boundary.boundary);
    REQUIRE_FALSE(tail_alpha_to_hurst(1.0).boundary);
    REQUIRE_THROWS_AS(tail_alpha_to_hurst(0.0), ValidationError);
    REQUIRE_THROWS_AS(tail_alpha_to_hurst(-0.5), ValidationError);
    REQUIRE_THROWS_AS(tail_alpha_to_hurst(2.5), ValidationError);
}

TEST_CASE("degenerate octaves are excluded and flagged") {
    // A series whose fine-scale details vanish: constant pairs.
    std::vector<double> xs;
    SplitMix64 gen(77);
    for (int i = 0; i < 64; ++i) {
        const double v = gen.gaussian();
        xs.push_back(v);
        xs.push_back(v);  // zero octave-1 detail
    }
    const auto diagram = build_logscale(haar_dwt(xs, 4), 1, 4);
    REQUIRE_FALSE(diagram.points[0].included);
    REQUIRE(std::isnan(diagram.points[0].y));
    for (std::size_t i = 1; i < diagram.points.size(); ++i) REQUIRE(diagram.points[i].included);
    REQUIRE(diagram.included_count() == 3);
    REQUIRE_NOTHROW(weighted_slope(diagram));
}

TEST_CASE("sigma_j^2 increases strictly with the octave") {
    const auto diagram = build_logscale(haar_dwt(gaussian_series(23400, 8), 14), 1, 14);
    for (std::size_t i = 1; i < diagram.points.size(); ++i)
        REQUIRE(diagram.points[i].sigma_sq > diagram.points[i - 1].sigma_sq);
}

TEST_CASE("corrected bias mode shifts each ordinate by the chi-square offset") {
    const auto decomp = haar_dwt(gaussian_series(23400, 51), 10);
    const auto raw = build_logscale(decomp, 1, 10, BiasMode::raw);
    const auto corrected = build_logscale(decomp, 1, 10, BiasMode::corrected);
    for (std::size_t i = 0; i < raw.points.size(); ++i) {
        const double half_n = static_cast<double>(raw.points[i].n) / 2.0;
        const double offset = (digamma(half_n) - std::log(half_n)) / std::numbers::ln2;
        REQUIRE_THAT(corrected.points[i].y - raw.points[i].y,
                     Catch::Matchers::WithinAbs(-offset, 1e-12));
        REQUIRE(corrected.points[i].y > raw.points[i].y);  // offset is negative
    }
    // The corrected estimate stays a valid estimate on white noise.
    const auto est = estimate_session(std::span<const double>(gaussian_series(23400, 52)), 1, 10, 14,
                                      BiasMode::corrected);
    REQUIRE_THAT(est.h, Catch::Matchers::WithinAbs(0.5, 0.02));
}

TEST_CASE("decomposition debug export lists octave, position, coefficient") {
    const std::vector<double> xs{1.0, -1.0, 2.0, 0.0};
    const auto csv = decomposition_csv(haar_dwt(xs, 2));
    REQUIRE(csv.rfind("octave,k,coefficient\n", 0) == 0);
    REQUIRE(line_countable(csv) == 1 + 2 + 1);
}
