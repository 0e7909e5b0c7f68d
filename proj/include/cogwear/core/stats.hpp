#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cogwear/core/error.hpp"

namespace cogwear::stats {

struct MeanSd {
  double mean = kMissing;
  double sd = kMissing;
};

inline std::vector<double> observed(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v)
    if (!is_missing(x)) out.push_back(x);
  return out;
}

/// Mean of the non-missing values; missing when there are none.
inline double mean(std::span<const double> v) {
  double s = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (is_missing(x)) continue;
    s += x;
    ++n;
  }
  return n == 0 ? kMissing : s / static_cast<double>(n);
}

/// Sample standard deviation (n - 1 denominator); missing for fewer than two values.
inline double sd(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (is_missing(x)) continue;
    ss += (x - m) * (x - m);
    ++n;
  }
  return n < 2 ? kMissing : std::sqrt(ss / static_cast<double>(n - 1));
}

inline MeanSd mean_sd(std::span<const double> v) { return {mean(v), sd(v)}; }

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
/// `sorted` must be ascending and free of missing values.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) return kMissing;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::span<const double> v, double p) {
  auto s = observed(v);
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, p);
}

/// Standardized third central moment (population moments).
inline double skewness(std::span<const double> v) {
  const double m = mean(v);
  double m2 = 0.0, m3 = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (is_missing(x)) continue;
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
    ++n;
  }
  if (n == 0) return kMissing;
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0.0) return kMissing;
  return m3 / std::pow(m2, 1.5);
}

/// Standardized fourth central moment, non-excess (normal = 3).
inline double kurtosis(std::span<const double> v) {
  const double m = mean(v);
  double m2 = 0.0, m4 = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (is_missing(x)) continue;
    const double d2 = (x - m) * (x - m);
    m2 += d2;
    m4 += d2 * d2;
    ++n;
  }
  if (n == 0) return kMissing;
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 0.0) return kMissing;
  return m4 / (m2 * m2);
}

/// Vasicek m-spacing differential entropy estimate with m = floor(sqrt(n)).
/// Zero-width spacings (tied values) contribute no term; a sample whose
/// spacings are all zero has no finite estimate and yields missing.
inline double vasicek_entropy(std::span<const double> v) {
  auto s = observed(v);
  const std::size_t n = s.size();
  if (n < 2) return kMissing;
  std::sort(s.begin(), s.end());
  const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const double scale = static_cast<double>(n) / (2.0 * static_cast<double>(m));
  double acc = 0.0;
  std::size_t terms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = s[std::min(i + m, n - 1)];
    const double lo = s[i >= m ? i - m : 0];
    const double spacing = hi - lo;
    if (spacing <= 0.0) continue;
    acc += std::log(scale * spacing);
    ++terms;
  }
  if (terms == 0) return kMissing;
  return acc / static_cast<double>(terms);
}

}  // namespace cogwear::stats
