#ifndef HEXP_COMMON_H_
#define HEXP_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexp {

// Elements of a finite structure are dense indices 0..n-1. Index order is
// the canonical linear order used wherever an order on the universe is needed.
using Element = std::uint32_t;

// A parameter tuple (b_1, ..., b_m).
using Tuple = std::vector<Element>;

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: unknown keys, invalid family filters, malformed schedules.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A size filter that selects no structure.
class EmptyFamilyError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed a configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hexp

#endif  // HEXP_COMMON_H_
