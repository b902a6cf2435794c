#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trajroute {

// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

class InvalidRef : public Error {
public:
    using Error::Error;
};

class InvalidTransition : public Error {
public:
    using Error::Error;
};

// Raised when the search frontier is exhausted before reaching the
// destination. Carries diagnostics for the caller.
class NoPathError : public Error {
public:
    NoPathError(std::size_t expansions, double nearest_m)
        : Error("no path found (expanded " + std::to_string(expansions) +
                " nodes, nearest approach " + std::to_string(nearest_m) + " m)"),
          expansions_(expansions),
          nearest_m_(nearest_m) {}
    std::size_t expansions() const { return expansions_; }
    double nearest_approach_m() const { return nearest_m_; }

private:
    std::size_t expansions_;
    double nearest_m_;
};

class Unreachable : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class MissingReference : public Error {
public:
    using Error::Error;
};

}  // namespace trajroute
