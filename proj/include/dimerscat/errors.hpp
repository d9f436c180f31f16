#pragma once

#include <stdexcept>
#include <string>

namespace dimerscat {

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kernels
struct CoincidentPoints : Error { using Error::Error; };
struct ZeroWavenumber : Error { using Error::Error; };

// geometry
struct InvalidScaling : Error { using Error::Error; };
struct TooDense : Error { using Error::Error; };
struct PlacementFailed : Error { using Error::Error; };

// materials
struct NonPositiveRadicand : Error { using Error::Error; };
struct ComplexEta0Unsupported : Error { using Error::Error; };

// assembly
struct IndexEqual : Error { using Error::Error; };
struct SingularTensor : Error { using Error::Error; };

// solver
struct SingularMatrix : Error { using Error::Error; };
struct SizeCapExceeded : Error { using Error::Error; };
struct DiagonalBlockSingular : Error { using Error::Error; };

// fields
struct NonTransversePolarization : Error { using Error::Error; };
struct NonUnitDirection : Error { using Error::Error; };
struct ObservationTooClose : Error { using Error::Error; };

// effective
struct SingularA : Error { using Error::Error; };
struct RegimeViolation : Error { using Error::Error; };

// cli / config
struct ConfigError : Error { using Error::Error; };

} // namespace dimerscat
