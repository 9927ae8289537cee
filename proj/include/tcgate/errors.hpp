#pragma once

#include <stdexcept>
#include <string>

namespace tcg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// shape / dimension problems in operator construction
class DimensionError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };

// bad user input; the CLI maps this to exit code 2
class ConfigError : public Error { using Error::Error; };

// parameter-domain violations
class DomainError : public Error { using Error::Error; };
class UnreachableFrequencyError : public DomainError { using DomainError::DomainError; };
class ResonantCouplerError : public DomainError { using DomainError::DomainError; };
class SingularDerivativeError : public DomainError { using DomainError::DomainError; };
class SingularTrajectoryError : public DomainError { using DomainError::DomainError; };
class RegimeError : public DomainError { using DomainError::DomainError; };
class MissingParameterError : public DomainError { using DomainError::DomainError; };
class InvalidPathError : public DomainError { using DomainError::DomainError; };
class QuadratureError : public DomainError { using DomainError::DomainError; };

// numerical failures; the CLI maps these to exit code 3
class NumericalError : public Error { using Error::Error; };
class DegenerateLevelError : public NumericalError { using NumericalError::NumericalError; };
class HybridizationError : public NumericalError { using NumericalError::NumericalError; };
class StepSizeError : public NumericalError { using NumericalError::NumericalError; };
class IntegrationError : public NumericalError { using NumericalError::NumericalError; };
class RootFindError : public NumericalError { using NumericalError::NumericalError; };

}  // namespace tcg
