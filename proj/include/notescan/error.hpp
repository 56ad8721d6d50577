#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace notescan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileNotFoundError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class EmptyMaskError : public Error {
public:
    using Error::Error;
};

class OutOfBoundsError : public Error {
public:
    using Error::Error;
};

class DegenerateRegionError : public Error {
public:
    using Error::Error;
};

class NoValidPairsError : public Error {
public:
    using Error::Error;
};

class UndersizedRoiError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

/// Malformed tabular input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    /// Same error, prefixed with the file it came from.
    ParseError(const std::string& source, const ParseError& inner)
        : Error(source + ": " + inner.what()), line_(inner.line()) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownLabelError : public ParseError {
public:
    using ParseError::ParseError;
};

class ClassAbsentError : public Error {
public:
    using Error::Error;
};

class TooFewRecordsError : public Error {
public:
    using Error::Error;
};

class SingleClassError : public Error {
public:
    using Error::Error;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class CorruptFileError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace notescan
