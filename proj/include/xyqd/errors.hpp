#pragma once

#include <stdexcept>
#include <string>

namespace xyqd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition. The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to deliver its contract. The CLI maps this to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class QuadratureNoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SectorMismatch : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionTooLarge : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BlochViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotPositive : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SamplerFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoPeak : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ReferenceMissing : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InsufficientRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace xyqd
