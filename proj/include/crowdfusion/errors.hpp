#pragma once

#include <stdexcept>
#include <string>

namespace crowdfusion {

// Bad configuration or bad CLI input. Mapped to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed answer file. Carries 1-based line/column. Mapped to exit code 2.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line(line),
          column(column) {}

    int line;
    int column;
};

// Requested enumeration exceeds the configured cap. Mapped to exit code 3.
class EnumerationLimitError : public std::runtime_error {
public:
    EnumerationLimitError(double required, double cap)
        : std::runtime_error("enumeration needs about " + std::to_string(required) +
                             " terms, cap is " + std::to_string(cap)),
          required(required),
          cap(cap) {}

    double required;
    double cap;
};

} // namespace crowdfusion
