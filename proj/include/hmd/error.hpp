#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmd {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data or configuration; the CLI maps this family to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyDatasetError : public DataError {
public:
    using DataError::DataError;
};

class ConfigError : public DataError {
public:
    using DataError::DataError;
};

// Zero-day split protocol violation, e.g. a family present on both sides.
class ProtocolError : public DataError {
public:
    using DataError::DataError;
};

class MissingFamilyError : public DataError {
public:
    explicit MissingFamilyError(const std::string& family)
        : DataError("family '" + family + "' has no samples in the dataset"), family_(family) {}

    const std::string& family() const noexcept { return family_; }

private:
    std::string family_;
};

// A training routine was handed data it cannot learn from (single class, no samples).
class DegenerateTrainingError : public DataError {
public:
    using DataError::DataError;
};

// Feature vector length disagrees with what the model was trained on.
class DimensionError : public Error {
public:
    DimensionError(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + " features, got " +
                std::to_string(got)) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace hmd
