#pragma once

#include <stdexcept>
#include <string>

namespace fieldcomm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: malformed profile, bad configuration value, violated precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Spacetime arrangement of couplings does not satisfy a protocol requirement.
class GeometryError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The profile pair cannot sense: the phase integral vanishes.
class DegenerateGeometryError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

/// Anything that failed to meet a numerical tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnitarityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Density matrix with a significantly negative eigenvalue, or not Hermitian / unit trace.
class PsdError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A fidelity fell below its guaranteed lower bound.
class BoundViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AuditError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace fieldcomm
