#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncdlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or broken structural precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed line-oriented input. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input bytes outside the accepted document encoding.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : Error("byte offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CompressorError : public Error {
public:
    using Error::Error;
};

}  // namespace ncdlab
