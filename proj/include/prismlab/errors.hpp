#pragma once

#include <stdexcept>
#include <string>

namespace prismlab {

/// Mismatched or out-of-range parameters (precision pairs, ranks, type labels).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A requested answer cannot be certified at the working precision.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inversion of an element whose constant term is divisible by p.
struct NotAUnitError : std::domain_error {
    NotAUnitError(const std::string& what, int valuation)
        : std::domain_error(what), p_valuation(valuation) {}
    int p_valuation;  // of the constant term; -1 means the constant term is 0 at working precision
};

/// An internal identity that must hold failed. Signals a bug, not bad input.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Size bounds exceeded (polynomial term counts, LP dimensions, matrix sizes).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the shapes a normal-form engine or reduction supports.
struct UnsupportedShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Construction-time validation failure (e.g. a non-Eisenstein polynomial).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegreeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace prismlab
