#pragma once

#include <stdexcept>
#include <string>

namespace collapselab {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix fails the Hermitian symmetry check.
struct NotHermitianError : Error {
    using Error::Error;
};

// Iterative eigensolver exceeded its sweep cap.
struct NoConvergenceError : Error {
    using Error::Error;
};

// Operands have inconsistent dimensions.
struct DimMismatchError : Error {
    using Error::Error;
};

// Outcome or point index outside the valid range.
struct IndexOutOfRangeError : Error {
    using Error::Error;
};

// Conditioning event has zero probability.
struct ZeroConditioningError : Error {
    using Error::Error;
};

// Operation only defined for a specific dimension (e.g. qubits).
struct UnsupportedDimensionError : Error {
    using Error::Error;
};

// Parameter outside its documented domain.
struct InvalidParamsError : Error {
    using Error::Error;
};

// Time grid is empty.
struct EmptyGridError : Error {
    using Error::Error;
};

// Config file is not syntactically valid JSON.
struct ParseError : Error {
    using Error::Error;
};

// Value-level validation failure; message names the offending field.
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem failure while emitting reports.
struct IoError : Error {
    using Error::Error;
};

}  // namespace collapselab
