#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(actual)),
          expected_(expected), actual_(actual) {}
    [[nodiscard]] std::size_t expected() const { return expected_; }
    [[nodiscard]] std::size_t actual() const { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

class NonPositiveRadius : public Error {
public:
    explicit NonPositiveRadius(double mu)
        : Error("mollifier radius must be positive, got " + std::to_string(mu)) {}
};

class ModelInvalid : public Error {
public:
    using Error::Error;
};

class ZeroPivot : public Error {
public:
    explicit ZeroPivot(std::size_t index)
        : Error("zero pivot in tridiagonal sweep at row " + std::to_string(index)), index_(index) {}
    [[nodiscard]] std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// Raised when an assembled implicit system loses strict row dominance,
/// usually because dt is too large for the drift strength.
class DominanceViolation : public Error {
public:
    DominanceViolation(std::string system, std::size_t row)
        : Error(system + " system is not strictly diagonally dominant at row " +
                std::to_string(row)),
          row_(row) {}
    [[nodiscard]] std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class NonfiniteIterate : public Error {
public:
    using Error::Error;
};

class EnvelopeViolation : public Error {
public:
    explicit EnvelopeViolation(double t)
        : Error("mass/energy envelope violated at t = " + std::to_string(t)), t_(t) {}
    [[nodiscard]] double time() const { return t_; }

private:
    double t_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ConfigError("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct FieldViolation {
    std::string field;
    std::string message;
};

class ValidationError : public ConfigError {
public:
    explicit ValidationError(std::vector<FieldViolation> violations)
        : ConfigError(format(violations)), violations_(std::move(violations)) {}
    [[nodiscard]] const std::vector<FieldViolation>& violations() const { return violations_; }

private:
    static std::string format(const std::vector<FieldViolation>& v) {
        std::string out = "invalid configuration:";
        for (const auto& item : v) out += "\n  " + item.field + ": " + item.message;
        return out;
    }
    std::vector<FieldViolation> violations_;
};

}  // namespace hmt
