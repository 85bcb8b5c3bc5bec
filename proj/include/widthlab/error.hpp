#pragma once

#include <stdexcept>
#include <string>

namespace widthlab {

// Malformed or inconsistent user input (bad spec string, wrong degree, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A resource limit was hit (element limit, evaluation budget, lattice size).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well formed but violates a mathematical precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug or a false claim.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace widthlab
