#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsscale {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed descriptor or scenario document. `location` is a file name
/// and/or JSON pointer, whichever is known.
class SyntaxError : public Error {
public:
    SyntaxError(std::string location, const std::string& message)
        : Error(location.empty() ? message : location + ": " + message), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class DuplicateIdError : public Error {
public:
    DuplicateIdError(const std::string& kind, std::string id)
        : Error("duplicate " + kind + " identifier '" + id + "'"), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownIdError : public Error {
public:
    UnknownIdError(const std::string& kind, const std::string& id)
        : Error("unknown " + kind + " '" + id + "'") {}
};

/// Rule-DSL parse failure; `column` is 1-based.
class RuleSyntaxError : public Error {
public:
    RuleSyntaxError(std::size_t column, const std::string& message)
        : Error("column " + std::to_string(column) + ": " + message), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class TimeRegressionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Illegal state-machine transition (reservations, handles, VNFC lifecycle,
/// NS instance state).
class StateError : public Error {
public:
    using Error::Error;
};

class ScenarioError : public Error {
public:
    using Error::Error;
};

} // namespace nsscale
