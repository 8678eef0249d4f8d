#pragma once

#include <stdexcept>
#include <string>

namespace exlb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral measure validation failures.
struct NonHermitianError : Error { using Error::Error; };
struct MassNotOneError : Error { using Error::Error; };
struct InvalidDerivativesError : Error { using Error::Error; };

// Sampler failures.
struct ResolutionTooCoarseError : Error { using Error::Error; };

// Numerics.
struct QuadratureError : Error { using Error::Error; };

// The sweep's exact integer identity was violated. This always indicates an
// implementation bug, never a statistical fluctuation.
struct IdentityViolationError : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };

} // namespace exlb
