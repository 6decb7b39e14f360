#pragma once

#include <stdexcept>
#include <string>

namespace rydimer {

// Bad input: out-of-domain arguments, malformed configuration. The CLI maps
// these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-posed computation that could not deliver a result (no crossing, no
// interior minimum, integrator drift, quadrature failure). Exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rydimer
