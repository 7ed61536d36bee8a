#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hurst/date.hpp"
#include "hurst/decimal.hpp"
#include "hurst/errors.hpp"

namespace hurst {

/// One validated tick. Time is kept as integer nanoseconds past midnight so
/// bucket assignment is exact; prices stay decimal until arithmetic needs
/// them.
struct TradeRecord {
    std::int64_t time_ns = 0;
    Decimal price;
    std::int64_t size = 0;
    std::string sale_condition;  ///< may be empty
    int correction = 0;
    std::string exchange_tag;

    double timestamp() const { return static_cast<double>(time_ns) / 1e9; }

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

/// Exclusion rules applied to parsed trades. Defaults reproduce the
/// reference methodology: the listed sale-condition codes, correction
/// indicators outside {0,1,2}, non-positive price or size, the 09:30-16:00
/// session, and a 30 s end-of-day trim on NASDAQ-style venues.
struct FilterPolicy {
    std::set<std::string> excluded_conditions = {"B", "D", "G", "J", "K", "L", "M", "N", "O",
                                                 "P", "Q", "R", "T", "U", "W", "Z", "4", "6"};
    /// Subset of excluded_conditions that only applies on NASDAQ-style venues.
    std::set<std::string> nasdaq_only_conditions = {"4", "6"};
    std::set<int> allowed_corrections = {0, 1, 2};
    std::int64_t session_start = 34200;  ///< seconds past midnight, 09:30
    std::int64_t session_end = 57600;    ///< seconds past midnight, 16:00
    std::int64_t trim_tail_seconds = 30; ///< applied to NASDAQ-style records only
    /// Exchange tags classified as NASDAQ-style listings.
    std::set<std::string> nasdaq_tags = {"Q", "T"};

    bool is_nasdaq(const std::string& tag) const { return nasdaq_tags.count(tag) != 0; }
};

enum class DropReason {
    excluded_condition,
    bad_correction,
    non_positive_price,
    non_positive_size,
    outside_session,
    tail_trim,
};

inline constexpr std::array<DropReason, 6> kAllDropReasons = {
    DropReason::excluded_condition, DropReason::bad_correction, DropReason::non_positive_price,
    DropReason::non_positive_size,  DropReason::outside_session, DropReason::tail_trim,
};

inline const char* drop_reason_name(DropReason r) {
    switch (r) {
        case DropReason::excluded_condition: return "ExcludedCondition";
        case DropReason::bad_correction: return "BadCorrection";
        case DropReason::non_positive_price: return "NonPositivePrice";
        case DropReason::non_positive_size: return "NonPositiveSize";
        case DropReason::outside_session: return "OutsideSession";
        case DropReason::tail_trim: return "TailTrim";
    }
    return "?";
}

struct DropLog {
    std::array<std::size_t, 6> counts{};

    void add(DropReason r) { ++counts[static_cast<std::size_t>(r)]; }
    std::size_t at(DropReason r) const { return counts[static_cast<std::size_t>(r)]; }
    std::size_t total() const {
        std::size_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
    bool empty() const { return total() == 0; }

    friend bool operator==(const DropLog&, const DropLog&) = default;
};

/// The trading window the tape was filtered against; trim is the tail trim
/// actually applied (nonzero only for NASDAQ-style sessions).
struct SessionWindow {
    std::int64_t start = 34200;
    std::int64_t end = 57600;
    std::int64_t trim = 0;

    std::int64_t covered_seconds() const { return end - start - trim; }

    friend bool operator==(const SessionWindow&, const SessionWindow&) = default;
};

/// Filtered, time-ordered trades for one symbol-session.
struct TradeTape {
    std::string symbol;
    Date session_date;
    std::vector<TradeRecord> records;
    DropLog drop_log;
    SessionWindow window;
};

/// Column-order descriptor for delimited tick files.
struct ColumnSchema {
    enum class Field { time, price, size, condition, correction, exchange };

    std::vector<Field> order = {Field::time,      Field::price,      Field::size,
                                Field::condition, Field::correction, Field::exchange};
    char delimiter = ',';

    static const char* field_name(Field f) {
        switch (f) {
            case Field::time: return "time";
            case Field::price: return "price";
            case Field::size: return "size";
            case Field::condition: return "sale_condition";
            case Field::correction: return "correction";
            case Field::exchange: return "exchange";
        }
        return "?";
    }

    /// Parse a descriptor like "time,price,size,condition,correction,exchange".
    static ColumnSchema parse(std::string_view descriptor) {
        ColumnSchema schema;
        schema.order.clear();
        std::size_t start = 0;
        while (start <= descriptor.size()) {
            const std::size_t end = descriptor.find(',', start);
            const std::string_view tok =
                descriptor.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
            if (tok == "time") schema.order.push_back(Field::time);
            else if (tok == "price") schema.order.push_back(Field::price);
            else if (tok == "size") schema.order.push_back(Field::size);
            else if (tok == "condition" || tok == "sale_condition" || tok == "cond") schema.order.push_back(Field::condition);
            else if (tok == "correction" || tok == "corr") schema.order.push_back(Field::correction);
            else if (tok == "exchange" || tok == "ex") schema.order.push_back(Field::exchange);
            else throw ConfigError("schema", "unknown column '" + std::string(tok) + "'");
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        for (auto f : {Field::time, Field::price, Field::size, Field::condition, Field::correction, Field::exchange})
            if (std::count(schema.order.begin(), schema.order.end(), f) != 1)
                throw ConfigError("schema", std::string("column '") + field_name(f) + "' must appear exactly once");
        return schema;
    }
};

namespace detail {

/// HH:MM:SS with an optional fraction of up to 9 digits, to nanoseconds.
inline std::int64_t parse_time_ns(std::string_view text) {
    auto bad = [&](const std::string& why) { return ParseError("time", why + " in '" + std::string(text) + "'"); };
    if (text.size() < 8 || text[2] != ':' || text[5] != ':') throw bad("expected HH:MM:SS[.fff]");
    auto two = [&](std::size_t pos) {
        if (text[pos] < '0' || text[pos] > '9' || text[pos + 1] < '0' || text[pos + 1] > '9')
            throw bad("non-digit");
        return (text[pos] - '0') * 10 + (text[pos + 1] - '0');
    };
    const int hh = two(0), mm = two(3), ss = two(6);
    if (hh > 23 || mm > 59 || ss > 60) throw bad("field out of range");
    std::int64_t ns = (static_cast<std::int64_t>(hh) * 3600 + mm * 60 + ss) * 1'000'000'000LL;
    if (text.size() > 8) {
        if (text[8] != '.' || text.size() == 9) throw bad("malformed fraction");
        const std::string_view frac = text.substr(9);
        if (frac.size() > 9) throw bad("fraction beyond nanoseconds");
        std::int64_t value = 0;
        for (char c : frac) {
            if (c < '0' || c > '9') throw bad("non-digit fraction");
            value = value * 10 + (c - '0');
        }
        for (std::size_t i = frac.size(); i < 9; ++i) value *= 10;
        ns += value;
    }
    return ns;
}

/// Nanoseconds past midnight back to HH:MM:SS[.fff], minimal fraction digits.
inline std::string format_time(std::int64_t time_ns) {
    const std::int64_t sec = time_ns / 1'000'000'000LL;
    std::int64_t frac = time_ns % 1'000'000'000LL;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld", static_cast<long long>(sec / 3600),
                  static_cast<long long>((sec / 60) % 60), static_cast<long long>(sec % 60));
    std::string out = buf;
    if (frac != 0) {
        char fbuf[16];
        std::snprintf(fbuf, sizeof(fbuf), "%09lld", static_cast<long long>(frac));
        std::string f = fbuf;
        while (f.size() > 1 && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(delim, start);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

inline std::int64_t parse_int64(std::string_view text, const char* field) {
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw ParseError(field, "not an integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace detail

/// Decode one delimited row into a TradeRecord. Throws ParseError naming the
/// offending field; never repairs values (filtering is a separate stage).
inline TradeRecord parse_trade_line(std::string_view line, const ColumnSchema& schema = {}) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = detail::split_fields(line, schema.delimiter);
    if (fields.size() < schema.order.size())
        throw ParseError("line", "expected " + std::to_string(schema.order.size()) + " columns, got " +
                                     std::to_string(fields.size()));
    TradeRecord rec;
    for (std::size_t i = 0; i < schema.order.size(); ++i) {
        const std::string_view value = fields[i];
        switch (schema.order[i]) {
            case ColumnSchema::Field::time:
                rec.time_ns = detail::parse_time_ns(value);
                break;
            case ColumnSchema::Field::price:
                rec.price = Decimal::parse(value, "price");
                break;
            case ColumnSchema::Field::size:
                rec.size = detail::parse_int64(value, "size");
                break;
            case ColumnSchema::Field::condition:
                rec.sale_condition = std::string(value);
                break;
            case ColumnSchema::Field::correction:
                rec.correction = static_cast<int>(detail::parse_int64(value, "correction"));
                break;
            case ColumnSchema::Field::exchange:
                rec.exchange_tag = std::string(value);
                break;
        }
    }
    return rec;
}

/// Keep/drop decision for one record. Total and deterministic: the checks
/// run in a fixed order and the first failure names the reason.
inline std::optional<DropReason> filter_trade(const TradeRecord& rec, const FilterPolicy& policy = {}) {
    if (!rec.sale_condition.empty() && policy.excluded_conditions.count(rec.sale_condition) != 0) {
        const bool nasdaq_scoped = policy.nasdaq_only_conditions.count(rec.sale_condition) != 0;
        if (!nasdaq_scoped || policy.is_nasdaq(rec.exchange_tag)) return DropReason::excluded_condition;
    }
    if (policy.allowed_corrections.count(rec.correction) == 0) return DropReason::bad_correction;
    if (!rec.price.positive()) return DropReason::non_positive_price;
    if (rec.size <= 0) return DropReason::non_positive_size;
    const std::int64_t start_ns = policy.session_start * 1'000'000'000LL;
    const std::int64_t end_ns = policy.session_end * 1'000'000'000LL;
    if (rec.time_ns < start_ns || rec.time_ns > end_ns) return DropReason::outside_session;
    if (policy.is_nasdaq(rec.exchange_tag) &&
        rec.time_ns >= end_ns - policy.trim_tail_seconds * 1'000'000'000LL)
        return DropReason::tail_trim;
    return std::nullopt;
}

/// Serialize a record back to the schema's column order.
inline std::string serialize_trade_line(const TradeRecord& rec, const ColumnSchema& schema = {}) {
    std::string out;
    for (std::size_t i = 0; i < schema.order.size(); ++i) {
        if (i > 0) out += schema.delimiter;
        switch (schema.order[i]) {
            case ColumnSchema::Field::time: out += detail::format_time(rec.time_ns); break;
            case ColumnSchema::Field::price: out += rec.price.to_string(); break;
            case ColumnSchema::Field::size: out += std::to_string(rec.size); break;
            case ColumnSchema::Field::condition: out += rec.sale_condition; break;
            case ColumnSchema::Field::correction: out += std::to_string(rec.correction); break;
            case ColumnSchema::Field::exchange: out += rec.exchange_tag; break;
        }
    }
    return out;
}

namespace detail {

/// Header detection per the file contract: a first row whose price column
/// does not parse as a number is a header.
inline bool looks_like_header(std::string_view line, const ColumnSchema& schema) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_fields(line, schema.delimiter);
    for (std::size_t i = 0; i < schema.order.size() && i < fields.size(); ++i) {
        if (schema.order[i] != ColumnSchema::Field::price) continue;
        try {
            Decimal::parse(fields[i], "price");
            return false;
        } catch (const ParseError&) {
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Load, parse, filter and time-sort one session file. Equal timestamps keep
/// their input order (stable sort). An empty result is not an error.
inline TradeTape load_session(const std::filesystem::path& path, std::string symbol, Date date,
                              const FilterPolicy& policy = {}, const ColumnSchema& schema = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    TradeTape tape;
    tape.symbol = std::move(symbol);
    tape.session_date = date;
    tape.window = {policy.session_start, policy.session_end, 0};

    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    bool any_nasdaq = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty()) continue;
        if (first_content_line) {
            first_content_line = false;
            if (detail::looks_like_header(view, schema)) continue;
        }
        TradeRecord rec;
        try {
            rec = parse_trade_line(view, schema);
        } catch (const ParseError& e) {
            throw ParseError(e.field(),
                             path.filename().string() + ":" + std::to_string(line_no) + ": " + e.detail());
        }
        any_nasdaq = any_nasdaq || policy.is_nasdaq(rec.exchange_tag);
        if (const auto reason = filter_trade(rec, policy)) {
            tape.drop_log.add(*reason);
        } else {
            tape.records.push_back(std::move(rec));
        }
    }
    if (any_nasdaq) tape.window.trim = policy.trim_tail_seconds;

    std::stable_sort(tape.records.begin(), tape.records.end(),
                     [](const TradeRecord& a, const TradeRecord& b) { return a.time_ns < b.time_ns; });
    return tape;
}

/// Write a tape back out in the given schema (with a header row).
inline void save_tape(const TradeTape& tape, const std::filesystem::path& path, const ColumnSchema& schema = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < schema.order.size(); ++i) {
        if (i > 0) out << schema.delimiter;
        out << ColumnSchema::field_name(schema.order[i]);
    }
    out << '\n';
    for (const auto& rec : tape.records) out << serialize_trade_line(rec, schema) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace hurst
