#pragma once

// Small dense-vector helpers shared by every module. ParamVector is the flat
// parameter vector x in R^d.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lmopt/errors.hpp"

namespace lmopt {

using ParamVector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void require_finite(std::span<const double> a, const char* what) {
  if (!all_finite(a)) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw ConfigError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                      " vs " + std::to_string(b) + ")");
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// ||a - b||_2 / max(||b||_2, floor)
inline double rel_error(std::span<const double> a, std::span<const double> b, double floor = 1e-12) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), floor);
}

}  // namespace lmopt
