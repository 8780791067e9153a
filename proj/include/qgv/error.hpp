#pragma once

#include <stdexcept>
#include <string>

namespace qgv {

// Input or invariant violation (bad dimension, non-CPTP map, invalid strategy, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A computation produced values outside what the math allows (probability < 0, NaN, ...).
class NumericFault : public std::runtime_error {
 public:
  explicit NumericFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgv
