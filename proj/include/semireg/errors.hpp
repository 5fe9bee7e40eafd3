#pragma once

#include <stdexcept>
#include <string>

namespace semireg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input or violated precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation that could not deliver its contract. The CLI maps these to
// exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define SEMIREG_ERROR(Name, Base)              \
  class Name : public Base {                   \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Base(std::string(#Name ": ") + what) {} \
  };

SEMIREG_ERROR(SpectrumHit, NumericalError)
SEMIREG_ERROR(QuadratureDivergence, NumericalError)
SEMIREG_ERROR(CoefficientOverflow, NumericalError)
SEMIREG_ERROR(ContourTooClose, NumericalError)
SEMIREG_ERROR(TailTooFat, NumericalError)
SEMIREG_ERROR(SeriesNotConverged, NumericalError)
SEMIREG_ERROR(PeriodizationError, NumericalError)
SEMIREG_ERROR(DominationFailure, NumericalError)

SEMIREG_ERROR(ConstantPolynomial, ValidationError)
SEMIREG_ERROR(NotARoot, ValidationError)
SEMIREG_ERROR(PhaseMismatch, ValidationError)
SEMIREG_ERROR(EnumerationTooLarge, ValidationError)
SEMIREG_ERROR(ParameterOutOfRange, ValidationError)
SEMIREG_ERROR(UnknownEntry, ValidationError)
SEMIREG_ERROR(BadParams, ValidationError)

#undef SEMIREG_ERROR

}  // namespace semireg
