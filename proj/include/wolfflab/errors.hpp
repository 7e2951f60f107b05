#pragma once

#include <stdexcept>

namespace wolff {

// Constructor arguments or run configuration violate a precondition.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested computation sits outside the convergent regime, e.g. an
// untruncated potential with p >= n or a quantity that is provably infinite.
class regime_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wolff
