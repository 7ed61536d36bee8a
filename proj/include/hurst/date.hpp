#pragma once

#include <charconv>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "hurst/errors.hpp"

namespace hurst {

/// Calendar date, ISO 8601 text form YYYY-MM-DD.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    friend auto operator<=>(const Date&, const Date&) = default;

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    /// YYYY-MM, the monthly roll-up key.
    std::string year_month() const {
        char buf[12];
        std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
        return buf;
    }

    static Date parse(std::string_view text) {
        auto field = [&](std::size_t pos, std::size_t len, const char* name) {
            int value = 0;
            if (pos + len > text.size()) throw ParseError(name, "date must be YYYY-MM-DD");
            auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
            if (ec != std::errc{} || p != text.data() + pos + len)
                throw ParseError(name, "not a number in '" + std::string(text) + "'");
            return value;
        };
        if (text.size() != 10 || text[4] != '-' || text[7] != '-')
            throw ParseError("date", "expected YYYY-MM-DD, got '" + std::string(text) + "'");
        Date d{field(0, 4, "year"), field(5, 2, "month"), field(8, 2, "day")};
        if (d.month < 1 || d.month > 12) throw ParseError("month", "out of range in '" + std::string(text) + "'");
        if (d.day < 1 || d.day > 31) throw ParseError("day", "out of range in '" + std::string(text) + "'");
        return d;
    }
};

}  // namespace hurst
