#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "cogwear/core/error.hpp"

namespace cogwear {

/// Binary outcome per row: 1 = positive (poor cognition), 0 = negative.
using Labels = std::vector<int>;

inline double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline constexpr double kProbabilityClip = 1e-15;

/// Mean binary cross-entropy.
inline double log_loss(std::span<const double> prob, std::span<const int> y) {
  if (prob.size() != y.size()) throw Error("log_loss: length mismatch");
  if (prob.empty()) throw Error("log_loss: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double p = std::clamp(prob[i], kProbabilityClip, 1.0 - kProbabilityClip);
    s -= y[i] ? std::log(p) : std::log1p(-p);
  }
  return s / static_cast<double>(prob.size());
}

/// Log-loss computed from raw scores (log-odds), stable for large |z|.
inline double log_loss_from_scores(std::span<const double> z, std::span<const int> y) {
  if (z.size() != y.size()) throw Error("log_loss: length mismatch");
  if (z.empty()) throw Error("log_loss: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double m = y[i] ? -z[i] : z[i];  // loss = log(1 + e^m)
    s += m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
  }
  return s / static_cast<double>(z.size());
}

/// Mann-Whitney AUC with average ranks for ties.
inline double auc(std::span<const double> scores, std::span<const int> y) {
  if (scores.size() != y.size()) throw Error("auc: length mismatch");
  const std::size_t n = scores.size();
  std::size_t pos = 0;
  for (int v : y) pos += v ? 1 : 0;
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw Error("auc: labels contain a single class");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      if (y[order[k]]) rank_sum += avg;
    i = j + 1;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

}  // namespace cogwear
