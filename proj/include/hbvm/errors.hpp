#pragma once

#include <stdexcept>
#include <string>

namespace hbvm {

// Bad input: dimensions, unsupported options, inconsistent parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An option that exists but does not apply to the given system
// (e.g. the blended solver on a non-separable Hamiltonian).
class UnsupportedMode : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Internal numerical routine failed to converge where it always should.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hbvm
