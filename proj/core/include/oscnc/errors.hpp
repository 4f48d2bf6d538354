// errors.hpp — exception hierarchy shared by all oscnc components

#pragma once

#include <stdexcept>
#include <string>

namespace oscnc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Index or size outside the truncated Fock space.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Requested truncation loses more state mass than the contract allows.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Input fails a structural precondition (non-Hermitian, bad trace, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Matrix expected to be positive semidefinite has an eigenvalue below -1e-6.
class NotPsdError : public Error {
public:
    using Error::Error;
};

// Finite-temperature formula called at N = 0; use the zero-temperature path.
class ZeroTemperatureBranchError : public Error {
public:
    using Error::Error;
};

// Index combination beyond the supported evaluation cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Adaptive integrator could not advance (step-size underflow or blow-up).
class IntegrationError : public Error {
public:
    using Error::Error;
};

// Phase-space quadrature failed to converge within the refinement budget.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// Phase-space grid extents too small for the state being synthesized.
class ExtentError : public Error {
public:
    using Error::Error;
};

// Malformed density-matrix file or CSV payload.
class SerializationError : public Error {
public:
    using Error::Error;
};

}  // namespace oscnc
