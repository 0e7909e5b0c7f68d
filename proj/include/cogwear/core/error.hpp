#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cogwear {

/// Base error for every failure the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input did not match a documented file schema (bad header, wrong arity).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Missing values are carried as quiet NaN throughout the library.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

}  // namespace cogwear
