#pragma once

#include <stdexcept>
#include <string>

namespace switchlab {

/// Base for all domain errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// measures
struct NegativeWeightError : Error { using Error::Error; };
struct MassNotOneError : Error { using Error::Error; };
struct EmptySupportError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct UnsupportedDimensionError : Error { using Error::Error; };

// kernels
struct OutOfKernelBoxError : Error { using Error::Error; };
struct NonConvergenceError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };

// barriers
struct WrongKindError : Error { using Error::Error; };
struct UnboundedContinuationError : Error { using Error::Error; };

// exit laws / stopping
struct UnboundedProblemError : Error { using Error::Error; };
struct MissingValueError : Error { using Error::Error; };
struct MissingPayoffValueError : Error { using Error::Error; };

// oracle
struct ResourceLimitError : Error { using Error::Error; };

// scaling
struct ConvexOrderLostError : Error { using Error::Error; };
struct EmbeddingMismatchError : Error { using Error::Error; };

// cli / io
struct UsageError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };

}  // namespace switchlab
