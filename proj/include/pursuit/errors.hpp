#pragma once

#include <stdexcept>
#include <string>

namespace pursuit {

/// Caller broke a documented precondition (dimension mismatch, bad flag value, ...).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is structurally valid but mathematically degenerate (zero vector where a
/// direction is needed, coincident initial positions).
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

/// A control value violated the unit-norm admissibility bound.
struct InadmissibleControlError : std::runtime_error {
    explicit InadmissibleControlError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed scenario/config document.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed (LP cycling guard, negative radicand beyond tolerance).
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pursuit
