#pragma once

#include <stdexcept>
#include <string>

namespace atomcollect {

// Raised when a numerical procedure cannot deliver a result: quadrature that
// exhausts its evaluation budget, overflow in a special function, a flat
// objective. Precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace atomcollect
