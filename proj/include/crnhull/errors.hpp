#pragma once

#include <stdexcept>
#include <string>

namespace crnhull {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// A field evaluation or integration stage produced NaN or infinity.
struct NonFinite : Error {
    using Error::Error;
};

/// A trajectory component fell below the negative tolerance band; the step
/// size is too large for this system.
struct NegativeBlowup : Error {
    using Error::Error;
};

/// The eigenvector matrix is too ill-conditioned to trust the closed form;
/// callers should fall back to numerical integration.
struct NearDefective : Error {
    using Error::Error;
};

struct IrrationalEigenvalue : Error {
    using Error::Error;
};

struct ComplexEigenvalue : Error {
    using Error::Error;
};

/// Query point does not lie on the trajectory's affine chart.
struct OffChart : Error {
    using Error::Error;
};

/// An iterative routine (LP, eigensolver) exhausted its iteration budget.
struct NumericalFailure : Error {
    using Error::Error;
};

struct DegenerateSubspace : Error {
    using Error::Error;
};

struct WrongDimension : Error {
    using Error::Error;
};

/// Invalid user-supplied parameters (generator bounds, malformed configs).
struct InvalidInput : Error {
    using Error::Error;
};

/// Malformed input file; the message names the offending field or line.
struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace crnhull
