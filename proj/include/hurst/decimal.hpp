#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hurst/errors.hpp"

namespace hurst {

/// Fixed-point decimal: mantissa * 10^-scale.
///
/// Prices are parsed into this form so no binary rounding happens at parse
/// time; products against integer share sizes are formed in 128-bit and
/// rounded to double exactly once.
struct Decimal {
    std::int64_t mantissa = 0;
    int scale = 0;  // digits after the point, 0..9

    bool positive() const noexcept { return mantissa > 0; }

    double to_double() const {
        static constexpr double kPow10[] = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
        return static_cast<double>(mantissa) / kPow10[scale];
    }

    /// Numeric equality across scales: 1.5 == 1.50.
    friend bool operator==(const Decimal& a, const Decimal& b) {
        static constexpr std::int64_t kPow10[] = {1,      10,      100,      1000,      10000,
                                                  100000, 1000000, 10000000, 100000000, 1000000000};
        const __int128 lhs = static_cast<__int128>(a.mantissa) * kPow10[b.scale];
        const __int128 rhs = static_cast<__int128>(b.mantissa) * kPow10[a.scale];
        return lhs == rhs;
    }

    /// Canonical text: sign, integer digits, then `scale` fraction digits.
    std::string to_string() const {
        static constexpr std::int64_t kPow10[] = {1,      10,      100,      1000,      10000,
                                                  100000, 1000000, 10000000, 100000000, 1000000000};
        std::int64_t m = mantissa;
        std::string sign;
        if (m < 0) {
            sign = "-";
            m = -m;
        }
        const std::int64_t whole = m / kPow10[scale];
        const std::int64_t frac = m % kPow10[scale];
        std::string out = sign + std::to_string(whole);
        if (scale > 0) {
            std::string f = std::to_string(frac);
            out += "." + std::string(static_cast<std::size_t>(scale) - f.size(), '0') + f;
        }
        return out;
    }

    static Decimal parse(std::string_view text, const char* field_name = "decimal") {
        if (text.empty()) throw ParseError(field_name, "empty value");
        std::size_t i = 0;
        bool negative = false;
        if (text[i] == '+' || text[i] == '-') {
            negative = (text[i] == '-');
            ++i;
        }
        std::int64_t mantissa = 0;
        int scale = 0;
        bool seen_digit = false;
        bool seen_point = false;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (c == '.') {
                if (seen_point) throw ParseError(field_name, "multiple decimal points in '" + std::string(text) + "'");
                seen_point = true;
                continue;
            }
            if (c < '0' || c > '9')
                throw ParseError(field_name, "unexpected character '" + std::string(1, c) + "' in '" + std::string(text) + "'");
            if (mantissa > (INT64_MAX - 9) / 10) throw ParseError(field_name, "value overflows in '" + std::string(text) + "'");
            mantissa = mantissa * 10 + (c - '0');
            seen_digit = true;
            if (seen_point) {
                if (++scale > 9) throw ParseError(field_name, "more than 9 fraction digits in '" + std::string(text) + "'");
            }
        }
        if (!seen_digit) throw ParseError(field_name, "no digits in '" + std::string(text) + "'");
        return Decimal{negative ? -mantissa : mantissa, scale};
    }
};

}  // namespace hurst
