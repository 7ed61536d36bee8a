#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hurst {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input file could not be read or written.
struct IoError : Error {
    using Error::Error;
};

/// A delimited row failed to decode; `field()` names the offending column.
class ParseError : public Error {
public:
    ParseError(std::string field, std::string detail)
        : Error("parse error in field '" + field + "': " + detail),
          field_(std::move(field)),
          detail_(std::move(detail)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string field_;
    std::string detail_;
};

/// Invalid configuration value; `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& detail)
        : Error("invalid config '" + field + "': " + detail), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A parameter violated a documented domain constraint.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& detail)
        : Error("invalid " + field + ": " + detail), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Series shorter than the requested octave depth allows.
class SeriesTooShort : public Error {
public:
    SeriesTooShort(std::size_t length, std::size_t max_octave)
        : Error("series of length " + std::to_string(length) +
                " cannot support octave " + std::to_string(max_octave) +
                " (needs length >= 2^" + std::to_string(max_octave) + ")"),
          length_(length),
          max_octave_(max_octave) {}

    std::size_t length() const noexcept { return length_; }
    std::size_t max_octave() const noexcept { return max_octave_; }

private:
    std::size_t length_;
    std::size_t max_octave_;
};

/// Octave range selects no octaves.
struct EmptyRange : Error {
    using Error::Error;
};

/// Every octave in the requested range has a zero second moment.
struct AllOctavesDegenerate : Error {
    using Error::Error;
};

/// Fewer than three usable octaves remain for the slope fit.
class TooFewOctaves : public Error {
public:
    explicit TooFewOctaves(std::size_t count)
        : Error("slope fit needs at least 3 octaves, got " + std::to_string(count)),
          count_(count) {}

    std::size_t count() const noexcept { return count_; }

private:
    std::size_t count_;
};

/// Circulant embedding produced a materially negative eigenvalue.
class EmbeddingError : public Error {
public:
    EmbeddingError(double target_h, std::size_t length)
        : Error("circulant embedding failed for H=" + std::to_string(target_h) +
                ", N=" + std::to_string(length)),
          target_h_(target_h),
          length_(length) {}

    double target_h() const noexcept { return target_h_; }
    std::size_t length() const noexcept { return length_; }

private:
    double target_h_;
    std::size_t length_;
};

}  // namespace hurst
