#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cogwear/core/error.hpp"
#include "cogwear/core/random.hpp"

namespace cogwear {

struct TrainValid {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
};

namespace detail {
inline std::array<std::vector<std::size_t>, 2> by_class(std::span<const int> y) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < y.size(); ++i) out[y[i] ? 1 : 0].push_back(i);
  return out;
}
}  // namespace detail

/// One stratified split: round(fraction * class size) rows of each class go
/// to validation. Index lists are sorted.
inline TrainValid stratified_split(std::span<const int> y, double valid_fraction, Rng& rng) {
  if (!(valid_fraction > 0.0 && valid_fraction < 1.0)) throw Error("stratified_split: fraction must be in (0, 1)");
  TrainValid out;
  for (auto& cls : detail::by_class(y)) {
    rng.shuffle(std::span<std::size_t>(cls));
    const auto k = static_cast<std::size_t>(std::llround(valid_fraction * static_cast<double>(cls.size())));
    out.valid.insert(out.valid.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(k));
    out.train.insert(out.train.end(), cls.begin() + static_cast<std::ptrdiff_t>(k), cls.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.valid.begin(), out.valid.end());
  return out;
}

/// Stratified k-fold assignment: each class is shuffled and dealt round-robin,
/// the second class continuing where the first stopped so fold sizes differ
/// by at most one.
inline std::vector<int> stratified_folds(std::span<const int> y, int k, Rng& rng) {
  if (k < 2) throw Error("stratified_folds: need at least two folds");
  if (y.size() < static_cast<std::size_t>(k)) throw Error("stratified_folds: fewer rows than folds");
  std::vector<int> fold(y.size(), -1);
  std::size_t next = 0;
  for (auto& cls : detail::by_class(y)) {
    rng.shuffle(std::span<std::size_t>(cls));
    for (auto i : cls) fold[i] = static_cast<int>(next++ % static_cast<std::size_t>(k));
  }
  return fold;
}

inline TrainValid fold_split(std::span<const int> fold, int f) {
  TrainValid out;
  for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? out.valid : out.train).push_back(i);
  return out;
}

/// True when every fold's validation part contains both classes.
inline bool folds_have_both_classes(std::span<const int> fold, std::span<const int> y, int k) {
  std::vector<std::array<int, 2>> seen(static_cast<std::size_t>(k), {0, 0});
  for (std::size_t i = 0; i < fold.size(); ++i) seen[static_cast<std::size_t>(fold[i])][y[i] ? 1 : 0] = 1;
  return std::all_of(seen.begin(), seen.end(), [](const auto& s) { return s[0] && s[1]; });
}

inline constexpr int kMaxFoldRedraws = 1000;

/// Stratified folds, redrawn until every validation fold has both classes.
/// `redraws` is incremented per rejected draw.
inline std::vector<int> stratified_folds_checked(std::span<const int> y, int k, Rng& rng, int& redraws) {
  for (int attempt = 0; attempt < kMaxFoldRedraws; ++attempt) {
    auto f = stratified_folds(y, k, rng);
    if (folds_have_both_classes(f, y, k)) return f;
    ++redraws;
  }
  throw Error("cannot draw folds with both classes in every validation fold (too few minority rows)");
}

}  // namespace cogwear
