#pragma once

#include <stdexcept>
#include <string>

namespace lcxplan {

/// Input file could not be understood. Carries the location for diagnostics.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& reason)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
          file_(std::move(file)), line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Engine or scenario configuration is inconsistent.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A measurement set cannot support the requested calibration.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lcxplan
