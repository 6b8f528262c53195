#pragma once

#include <stdexcept>
#include <string>

namespace ibshell {

// Base of every error raised by the library. Subclasses name the failure
// kind so callers (and tests) can tell them apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionTooSmall : public Error { using Error::Error; };
class DegenerateFrame : public Error { using Error::Error; };
class SingularMetric : public Error { using Error::Error; };
class UnsupportedValence : public Error { using Error::Error; };
class ThinShellViolation : public Error { using Error::Error; };
class MissingCoefficients : public Error { using Error::Error; };
class NonFiniteInput : public Error { using Error::Error; };
class InvalidParameter : public Error { using Error::Error; };
class InstabilityDetected : public Error { using Error::Error; };
class NonNestedDims : public Error { using Error::Error; };
class ZeroDenominator : public Error { using Error::Error; };
class TimeSetMismatch : public Error { using Error::Error; };
class InsufficientRuns : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

}  // namespace ibshell
