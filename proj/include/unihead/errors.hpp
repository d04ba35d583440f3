#pragma once

#include <stdexcept>
#include <string>

namespace unihead {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct PoleSingularity : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct EncodingError : Error { using Error::Error; };
struct PrecisionBudgetExceeded : Error { using Error::Error; };
struct InstanceTooLarge : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace unihead
