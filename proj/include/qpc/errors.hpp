#pragma once

#include <stdexcept>
#include <string>

namespace qpc {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a structural invariant (shape, Hermiticity, trace, ...).
// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation failed for numerical reasons (mass lost in subselection,
// solver breakdown, ...). The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define QPC_DEFINE_ERROR(Name, Base)      \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  }

QPC_DEFINE_ERROR(NonSquareError, ValidationError);
QPC_DEFINE_ERROR(NonHermitianError, ValidationError);
QPC_DEFINE_ERROR(NotPsdError, ValidationError);
QPC_DEFINE_ERROR(TraceNotOneError, ValidationError);
QPC_DEFINE_ERROR(DimensionMismatchError, ValidationError);
QPC_DEFINE_ERROR(BadRankError, ValidationError);
QPC_DEFINE_ERROR(NotNormalizedError, ValidationError);
QPC_DEFINE_ERROR(WrongMemberCountError, ValidationError);
QPC_DEFINE_ERROR(CountMismatchError, ValidationError);
QPC_DEFINE_ERROR(NotXPatternError, ValidationError);
QPC_DEFINE_ERROR(NotInvertibleError, ValidationError);
QPC_DEFINE_ERROR(PriorsSumError, ValidationError);
QPC_DEFINE_ERROR(NotFiniteError, ValidationError);
// Document-parsing failures; messages carry a JSON-pointer-style path.
QPC_DEFINE_ERROR(SyntaxError, ValidationError);
QPC_DEFINE_ERROR(SchemaError, ValidationError);

#undef QPC_DEFINE_ERROR

}  // namespace qpc
