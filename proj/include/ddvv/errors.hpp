#pragma once

#include <stdexcept>
#include <string>

namespace ddvv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  /// Short tag such as "UmbilicPoint"; used by reports and exit codes.
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Malformed user input (immersion files, CLI arguments).
class InputError : public Error {
public:
  using Error::Error;
};

/// The pipeline refuses a point because a geometric precondition fails.
class GeometricRefusal : public Error {
public:
  using Error::Error;
};

/// Programming or numerical-contract violations inside the engine.
class ComputationError : public Error {
public:
  using Error::Error;
};

#define DDVV_DEFINE_ERROR(Name, Base)                                      \
  class Name : public Base {                                               \
  public:                                                                  \
    explicit Name(const std::string& what) : Base(#Name, what) {}          \
  }

DDVV_DEFINE_ERROR(OrderError, ComputationError);
DDVV_DEFINE_ERROR(SingularJet, ComputationError);
DDVV_DEFINE_ERROR(DomainError, ComputationError);
DDVV_DEFINE_ERROR(InsufficientOrder, ComputationError);
DDVV_DEFINE_ERROR(ShapeError, ComputationError);
DDVV_DEFINE_ERROR(EvalError, ComputationError);
DDVV_DEFINE_ERROR(NotLorentz, ComputationError);
DDVV_DEFINE_ERROR(ChartBlowUp, ComputationError);

DDVV_DEFINE_ERROR(ParseError, InputError);
DDVV_DEFINE_ERROR(SchemaError, InputError);
DDVV_DEFINE_ERROR(NameError, InputError);
DDVV_DEFINE_ERROR(DegenerateCurve, InputError);

DDVV_DEFINE_ERROR(NotImmersed, GeometricRefusal);
DDVV_DEFINE_ERROR(UmbilicPoint, GeometricRefusal);
DDVV_DEFINE_ERROR(NotIdealPoint, GeometricRefusal);
DDVV_DEFINE_ERROR(IntegrableDistribution, GeometricRefusal);

#undef DDVV_DEFINE_ERROR

}  // namespace ddvv
