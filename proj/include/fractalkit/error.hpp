#pragma once

#include <stdexcept>
#include <string>

namespace fractalkit {

/// Bad input to an operation (out-of-range parameter, malformed spec).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeds an explicit exact-arithmetic or raster capacity.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation is not defined for the given variant.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical procedure could not produce a meaningful result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fractalkit
