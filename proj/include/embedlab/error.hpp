#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace embedlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input bytes are not valid UTF-8.
class DecodeError : public Error {
public:
    DecodeError(std::size_t byte_offset, const std::string& what)
        : Error(what + " at byte offset " + std::to_string(byte_offset)), offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Malformed file content. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed content that violates a semantic invariant (e.g. outlier not among terms).
class SemanticError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Malformed task-definition input.
class DefinitionError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid or unusable configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A term that is not in the vocabulary.
class LookupError : public Error {
public:
    explicit LookupError(std::string term)
        : Error("term not in vocabulary: " + term), term_(std::move(term)) {}
    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

/// Invalid request from a caller (unknown format name, conflicting options).
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace embedlab
