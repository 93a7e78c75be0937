#pragma once

#include <stdexcept>
#include <string>

namespace mgform {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

// Ground-truth states must be radial with one DG per energized component.
struct CyclicEnergizedComponent : Error {
  using Error::Error;
};
struct MultiDgComponent : Error {
  using Error::Error;
};

struct ProbeNotAllowed : Error {
  using Error::Error;
};
struct BusNotElectrified : Error {
  using Error::Error;
};

// Raised by a ProbeExecutor that declines a request.
struct ProbeRefused : Error {
  using Error::Error;
};

struct PathExplosion : Error {
  using Error::Error;
};
struct SearchBudgetExceeded : Error {
  using Error::Error;
};
struct TooManyUnknowns : Error {
  using Error::Error;
};

}  // namespace mgform
