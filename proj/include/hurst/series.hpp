#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hurst/date.hpp"
#include "hurst/errors.hpp"
#include "hurst/estimator.hpp"
#include "hurst/tape.hpp"

namespace hurst {

/// Dense bucketed traded-value series for one session. Bucket b covers
/// [origin + b*dt, origin + (b+1)*dt); buckets with no trades are exactly 0.
struct ValueSeries {
    std::string symbol;
    Date session_date;
    std::int64_t delta_t = 1;    ///< bucket width, seconds
    std::int64_t origin = 34200; ///< session start, seconds past midnight
    std::vector<double> values;
};

/// Traded value of one trade: price times share size, with the product
/// formed exactly in 128-bit integer arithmetic and rounded to double once.
inline double traded_value(const TradeRecord& rec) {
    static constexpr double kPow10[] = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
    const __int128 product = static_cast<__int128>(rec.price.mantissa) * rec.size;
    return static_cast<double>(product) / kPow10[rec.price.scale];
}

/// Sum traded value into fixed-width buckets across the tape's session
/// window. Assignment is integer division on nanosecond timestamps, so the
/// half-open boundary is exact. Trades outside the covered buckets (only
/// possible at the closing second) are not summed.
inline ValueSeries bucketize(const TradeTape& tape, std::int64_t delta_t = 1) {
    if (delta_t < 1) throw ValidationError("delta_t", "bucket width must be >= 1 second");
    ValueSeries series;
    series.symbol = tape.symbol;
    series.session_date = tape.session_date;
    series.delta_t = delta_t;
    series.origin = tape.window.start;
    const std::int64_t covered = tape.window.covered_seconds();
    if (covered < 0) throw ValidationError("session", "window end precedes start");
    series.values.assign(static_cast<std::size_t>(covered / delta_t), 0.0);

    const std::int64_t origin_ns = series.origin * 1'000'000'000LL;
    const std::int64_t width_ns = delta_t * 1'000'000'000LL;
    for (const auto& rec : tape.records) {
        if (rec.time_ns < origin_ns) continue;
        const auto bucket = static_cast<std::size_t>((rec.time_ns - origin_ns) / width_ns);
        if (bucket >= series.values.size()) continue;
        series.values[bucket] += traded_value(rec);
    }
    return series;
}

/// Convenience overload of the daily pipeline on a bucketed series.
inline HurstEstimate estimate_session(const ValueSeries& series, std::size_t j1 = 1, std::size_t j2 = 10,
                                      std::size_t max_octave = 14, BiasMode bias = BiasMode::raw) {
    return estimate_session(std::span<const double>(series.values), j1, j2, max_octave, bias);
}

/// One share-size range; max_size empty means open-ended.
struct SizeBucket {
    std::string label;
    std::int64_t min_size = 1;
    std::optional<std::int64_t> max_size;  ///< inclusive

    bool contains(std::int64_t size) const {
        return size >= min_size && (!max_size || size <= *max_size);
    }
};

/// Ordered, non-overlapping share-size ranges. The defaults reproduce the
/// reference buckets, gaps included (500-750 and 1000-1500 are deliberately
/// uncovered; such trades land in the unassigned tally).
struct SizeBucketConfig {
    std::vector<SizeBucket> buckets;

    static SizeBucketConfig defaults() {
        return {{
            {"<250", 1, 249},
            {"250-500", 250, 500},
            {"750-1000", 750, 1000},
            {"1500+", 1500, std::nullopt},
        }};
    }

    void validate() const {
        if (buckets.empty()) throw ConfigError("buckets", "at least one size bucket required");
        for (const auto& b : buckets) {
            if (b.label.empty()) throw ConfigError("buckets", "bucket label must not be empty");
            if (b.max_size && *b.max_size < b.min_size)
                throw ConfigError("buckets", "bucket '" + b.label + "' has max < min");
        }
        for (std::size_t i = 0; i < buckets.size(); ++i)
            for (std::size_t j = i + 1; j < buckets.size(); ++j) {
                const auto& a = buckets[i];
                const auto& b = buckets[j];
                const bool disjoint = (a.max_size && b.min_size > *a.max_size) ||
                                      (b.max_size && a.min_size > *b.max_size);
                if (!disjoint)
                    throw ConfigError("buckets", "ranges '" + a.label + "' and '" + b.label + "' overlap");
            }
    }

    /// Index of the bucket containing `size`, if any.
    std::optional<std::size_t> bucket_of(std::int64_t size) const {
        for (std::size_t i = 0; i < buckets.size(); ++i)
            if (buckets[i].contains(size)) return i;
        return std::nullopt;
    }

    /// Parse "label:min-max;label:min+;..." (max inclusive, '+' = open end).
    static SizeBucketConfig parse(std::string_view text) {
        SizeBucketConfig config;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find(';', start);
            if (end == std::string_view::npos) end = text.size();
            const std::string_view item = text.substr(start, end - start);
            const std::size_t colon = item.rfind(':');
            if (colon == std::string_view::npos) throw ConfigError("buckets", "expected label:range in '" + std::string(item) + "'");
            SizeBucket bucket;
            bucket.label = std::string(item.substr(0, colon));
            const std::string_view range = item.substr(colon + 1);
            if (range.empty()) throw ConfigError("buckets", "empty range in '" + std::string(item) + "'");
            if (range.back() == '+') {
                bucket.min_size = detail::parse_int64(range.substr(0, range.size() - 1), "buckets");
            } else {
                const std::size_t dash = range.find('-');
                if (dash == std::string_view::npos) throw ConfigError("buckets", "expected min-max or min+ in '" + std::string(item) + "'");
                bucket.min_size = detail::parse_int64(range.substr(0, dash), "buckets");
                bucket.max_size = detail::parse_int64(range.substr(dash + 1), "buckets");
            }
            config.buckets.push_back(std::move(bucket));
            start = end + 1;
        }
        config.validate();
        return config;
    }
};

/// Size partition of a tape. Each kept record lands in exactly one part or
/// in the unassigned remainder; nothing is silently lost.
struct SizePartition {
    std::vector<std::pair<std::string, TradeTape>> parts;  ///< config order
    TradeTape unassigned;
};

inline SizePartition partition_by_size(const TradeTape& tape, const SizeBucketConfig& config) {
    config.validate();
    SizePartition partition;
    auto blank = [&]() {
        TradeTape t;
        t.symbol = tape.symbol;
        t.session_date = tape.session_date;
        t.window = tape.window;
        return t;
    };
    for (const auto& bucket : config.buckets) partition.parts.emplace_back(bucket.label, blank());
    partition.unassigned = blank();
    for (const auto& rec : tape.records) {
        if (const auto idx = config.bucket_of(rec.size))
            partition.parts[*idx].second.records.push_back(rec);
        else
            partition.unassigned.records.push_back(rec);
    }
    return partition;
}

/// Trade-count fractions per size bucket plus the unassigned remainder;
/// fractions sum to 1 over a non-empty tape and are all zero otherwise.
struct SizeProportions {
    std::vector<std::pair<std::string, double>> by_label;
    double unassigned = 0.0;
};

inline SizeProportions size_bucket_proportions(const TradeTape& tape, const SizeBucketConfig& config) {
    config.validate();
    SizeProportions props;
    std::vector<std::size_t> counts(config.buckets.size(), 0);
    std::size_t stray = 0;
    for (const auto& rec : tape.records) {
        if (const auto idx = config.bucket_of(rec.size))
            ++counts[*idx];
        else
            ++stray;
    }
    const double total = static_cast<double>(tape.records.size());
    for (std::size_t i = 0; i < config.buckets.size(); ++i)
        props.by_label.emplace_back(config.buckets[i].label,
                                    total > 0 ? static_cast<double>(counts[i]) / total : 0.0);
    props.unassigned = total > 0 ? static_cast<double>(stray) / total : 0.0;
    return props;
}

enum class CiMode { percentile, gaussian };

/// Month-level aggregate of daily Hurst estimates.
struct MonthlySummary {
    int year = 0;
    int month = 0;
    double mean_h = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t day_count = 0;
    std::vector<double> daily;  ///< the per-day values behind the aggregate

    std::string year_month() const { return Date{year, month, 1}.year_month(); }
};

namespace detail {

/// Linear-interpolation empirical quantile (the common "type 7" rule).
inline double quantile(std::vector<double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

/// Group daily (date, H) pairs by calendar month. The 95% band is the
/// 2.5th/97.5th empirical percentile of the month's daily values by default;
/// gaussian mode uses mean +/- 2 sample standard deviations instead.
inline std::vector<MonthlySummary> monthly_summary(std::span<const std::pair<Date, double>> daily,
                                                   CiMode mode = CiMode::percentile) {
    std::map<std::pair<int, int>, std::vector<double>> groups;
    for (const auto& [date, h] : daily) {
        if (!std::isfinite(h)) throw ValidationError("H", "daily H must be finite");
        groups[{date.year, date.month}].push_back(h);
    }
    std::vector<MonthlySummary> out;
    for (auto& [key, values] : groups) {
        MonthlySummary summary;
        summary.year = key.first;
        summary.month = key.second;
        summary.day_count = values.size();
        summary.daily = values;
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        summary.mean_h = mean;
        if (mode == CiMode::percentile) {
            std::vector<double> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            summary.ci_low = detail::quantile(sorted, 0.025);
            summary.ci_high = detail::quantile(std::move(sorted), 0.975);
            // Under extreme skew an empirical percentile band can exclude its
            // own mean; widen so the summary always brackets it.
            summary.ci_low = std::min(summary.ci_low, mean);
            summary.ci_high = std::max(summary.ci_high, mean);
        } else {
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
            summary.ci_low = mean - 2.0 * sd;
            summary.ci_high = mean + 2.0 * sd;
        }
        out.push_back(std::move(summary));
    }
    return out;
}

}  // namespace hurst
