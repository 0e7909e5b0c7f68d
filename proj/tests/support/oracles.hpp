#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

/// Fraction of (positive, negative) pairs ranked correctly, ties count 1/2.
inline double pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

/// 2|X_k|/N by direct correlation with cos and sin at bin k.
inline double dft_amplitude(std::span<const double> x, std::size_t k) {
  const double n = static_cast<double>(x.size());
  double re = 0.0, im = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(t) / n;
    re += x[t] * std::cos(ang);
    im -= x[t] * std::sin(ang);
  }
  return 2.0 * std::hypot(re, im) / n;
}

/// Nearest-donor (k = 1) fill by exhaustive search. Inputs are row-major
/// with NaN = missing; donor and target share the same column layout.
inline std::vector<std::vector<double>> nearest_donor_fill(const std::vector<std::vector<double>>& donors,
                                                           std::vector<std::vector<double>> target) {
  const std::size_t p = target.empty() ? 0 : target[0].size();
  std::vector<double> sd(p, 1.0), median(p, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < p; ++c) {
    std::vector<double> v;
    for (const auto& d : donors)
      if (!std::isnan(d[c])) v.push_back(d[c]);
    if (v.empty()) continue;
    double m = 0.0;
    for (double a : v) m += a;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    if (ss > 0.0) sd[c] = std::sqrt(ss / static_cast<double>(v.size()));
    std::sort(v.begin(), v.end());
    const double h = 0.5 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    median[c] = lo + 1 < v.size() ? v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]) : v[lo];
  }
  for (auto& row : target) {
    const auto src = row;
    for (std::size_t c = 0; c < p; ++c) {
      if (!std::isnan(src[c])) continue;
      double best = std::numeric_limits<double>::infinity();
      double fill = median[c];
      for (const auto& d : donors) {
        if (std::isnan(d[c])) continue;
        double acc = 0.0;
        std::size_t shared = 0;
        for (std::size_t j = 0; j < p; ++j) {
          if (std::isnan(src[j]) || std::isnan(d[j])) continue;
          acc += std::pow((src[j] - d[j]) / sd[j], 2);
          ++shared;
        }
        if (shared == 0) continue;
        const double dist = std::sqrt(acc * static_cast<double>(p) / static_cast<double>(shared));
        if (dist < best) {
          best = dist;
          fill = d[c];
        }
      }
      row[c] = std::isnan(fill) ? 0.0 : fill;
    }
  }
  return target;
}

}  // namespace oracle
