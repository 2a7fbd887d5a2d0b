#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual or JSON input. Messages are positional where possible.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// A configured budget (ball size, machine size, table size) was exceeded.
// Carries how far the computation got before giving up; callers that can
// degrade gracefully catch this and report "unknown" instead.
struct BudgetError : Error {
    int reached;
    BudgetError(const std::string& what, int reached_) : Error(what), reached(reached_) {}
};

// A precondition documented on an operation was violated by the caller.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Internal consistency failure: the library derived two facts that cannot
// both hold. Always a bug, never a user error.
struct InternalError : Error {
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace cantor
