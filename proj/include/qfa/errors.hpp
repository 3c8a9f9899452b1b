#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input or out-of-domain operation (division by zero, bad Cartan
// matrix, weight with exponents outside (1/D)Z, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A computation needed a graded piece beyond the session height bound.
struct HeightOverflow : Error {
  HeightOverflow(const std::string& msg, int height) : Error(msg), height(height) {}
  int height;
};

// Evaluation at z = 1 hit a pole; carries the pole order.
struct PoleAtOne : Error {
  explicit PoleAtOne(int order)
      : Error("evaluation at z = 1 hit a pole of order " + std::to_string(order)), order(order) {}
  int order;
};

}  // namespace qfa
