#pragma once

#include <stdexcept>

namespace momentcurve {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidNaming : Error { using Error::Error; };
struct InvalidShape : Error { using Error::Error; };
struct DegenerateNodes : Error { using Error::Error; };
struct ConditioningFailure : Error { using Error::Error; };
struct NotReducible : Error { using Error::Error; };
struct ParityMismatch : Error { using Error::Error; };
struct DomainMismatch : Error { using Error::Error; };
struct NotProper : Error { using Error::Error; };
struct OutsideHull : Error { using Error::Error; };
struct NonRealRoots : Error { using Error::Error; };
struct ReductionStalled : Error { using Error::Error; };
struct NotInterior : Error { using Error::Error; };
struct OracleFailure : Error { using Error::Error; };
struct NotInvertible : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace momentcurve
