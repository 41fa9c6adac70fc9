#pragma once

#include <stdexcept>
#include <string>

namespace gevre {

// Bad or malformed input data (files, schemas, empty series).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (sampler initialization, degenerate targets).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gevre
