#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "hurst/estimator.hpp"
#include "hurst/series.hpp"

namespace hurst {

/// Shortest round-trip decimal text for a double, locale-independent.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

/// Session estimate row used by both the CSV and JSON outputs.
struct EstimateRow {
    std::string symbol;
    Date date;
    HurstEstimate estimate;
};

inline std::string estimates_csv_header() {
    return "symbol,date,H,ci_low,ci_high,alpha_hat,var_alpha,j1,j2\n";
}

inline std::string estimate_csv_row(const EstimateRow& row) {
    const auto& e = row.estimate;
    return row.symbol + "," + row.date.to_string() + "," + format_double(e.h) + "," +
           format_double(e.ci_low) + "," + format_double(e.ci_high) + "," +
           format_double(e.slope.alpha_hat) + "," + format_double(e.slope.variance) + "," +
           std::to_string(e.slope.j1) + "," + std::to_string(e.slope.j2) + "\n";
}

inline std::string monthly_csv(const std::vector<MonthlySummary>& months) {
    std::string out = "month,mean_H,ci_low,ci_high,day_count\n";
    for (const auto& m : months)
        out += m.year_month() + "," + format_double(m.mean_h) + "," + format_double(m.ci_low) + "," +
               format_double(m.ci_high) + "," + std::to_string(m.day_count) + "\n";
    return out;
}

inline std::string logscale_csv(const LogscaleDiagram& diagram) {
    std::string out = "octave,y_j,n_j,sigma_sq,included_flag\n";
    for (const auto& p : diagram.points)
        out += std::to_string(p.octave) + "," + format_double(p.y) + "," + std::to_string(p.n) + "," +
               format_double(p.sigma_sq) + "," + (p.included ? "1" : "0") + "\n";
    return out;
}

inline std::string value_series_csv(const ValueSeries& series) {
    std::string out = "bucket_index,t_start_seconds,traded_value\n";
    for (std::size_t b = 0; b < series.values.size(); ++b)
        out += std::to_string(b) + "," +
               std::to_string(series.origin + static_cast<std::int64_t>(b) * series.delta_t) + "," +
               format_double(series.values[b]) + "\n";
    return out;
}

/// Debug dump of a decomposition; not a stability-guaranteed format.
inline std::string decomposition_csv(const WaveletDecomposition& decomp) {
    std::string out = "octave,k,coefficient\n";
    for (std::size_t j = 1; j <= decomp.max_octave(); ++j) {
        const auto level = decomp.details(j);
        for (std::size_t k = 0; k < level.size(); ++k)
            out += std::to_string(j) + "," + std::to_string(k) + "," + format_double(level[k]) + "\n";
    }
    return out;
}

}  // namespace hurst
