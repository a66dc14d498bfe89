#pragma once
#include <stdexcept>
#include <string>

namespace dkp {

//! Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AlgebraViolation : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct DispersionViolation : Error {
  using Error::Error;
};
struct ZeroIncidentFlux : Error {
  using Error::Error;
};
struct DegenerateBarrier : Error {
  using Error::Error;
};
struct OffShell : Error {
  using Error::Error;
};
struct InvalidIndex : Error {
  using Error::Error;
};
struct PacketOutOfBounds : Error {
  using Error::Error;
};
struct UnderResolved : Error {
  using Error::Error;
};
struct CourantViolation : Error {
  using Error::Error;
};
struct NotSeparated : Error {
  using Error::Error;
};
struct ConstraintViolated : Error {
  using Error::Error;
};
struct MissingOutput : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

}  // namespace dkp
