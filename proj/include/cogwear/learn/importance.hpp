#pragma once

// Loss-change importance by split neutralization: a node splitting on a
// neutralized feature sends every row down both branches and averages the
// outcomes weighted by training cover.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cogwear/learn/gbm.hpp"
#include "cogwear/learn/metrics.hpp"
#include "cogwear/learn/model.hpp"

namespace cogwear {

struct FeatureImportance {
  std::string feature;
  double value = 0.0;  // log-loss increase when neutralized
  bool operator==(const FeatureImportance&) const = default;
};

struct PairImportance {
  std::string first;
  std::string second;
  double synergy = 0.0;
  bool operator==(const PairImportance&) const = default;
};

struct ImportanceReport {
  double full_loss = 0.0;
  std::vector<FeatureImportance> features;  // descending
  std::vector<PairImportance> pairs;        // descending |synergy|
  bool operator==(const ImportanceReport&) const = default;
};

/// Evaluates a fitted ensemble on a fixed evaluation set with arbitrary sets
/// of input columns neutralized. Per-tree outputs are cached so only trees
/// that split on a neutralized feature are re-evaluated.
class NeutralizedScorer {
 public:
  NeutralizedScorer(const TrainedModel& m, const FeatureMatrix& x_in, std::span<const int> y)
      : m_(m), y_(y.begin(), y.end()) {
    if (m.kind != ModelKind::gbm) throw Error("importance: requires a boosted-tree model");
    detail::check_inputs(m, x_in);
    detail::require_complete(x_in, "importance");
    detail::require_binary(y, x_in.rows(), "importance");
    x_ = expand_nominal(x_in);
    const std::size_t n = x_.rows(), T = m.trees.size();

    // Expanded feature indices per input column, mirroring expand_nominal.
    std::size_t f = 0;
    for (const auto& c : m.input_columns) {
      std::vector<std::size_t> idx;
      const std::size_t width = c.kind == ColumnKind::nominal ? c.categories.size() - 1 : 1;
      for (std::size_t k = 0; k < width; ++k) idx.push_back(f++);
      expanded_.push_back(std::move(idx));
    }
    trees_using_.assign(x_.cols(), {});
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<bool> seen(x_.cols(), false);
      for (const auto& node : m.trees[t].nodes)
        if (!node.is_leaf() && !seen[static_cast<std::size_t>(node.feature)]) {
          seen[static_cast<std::size_t>(node.feature)] = true;
          trees_using_[static_cast<std::size_t>(node.feature)].push_back(t);
        }
    }
    leaf_.resize(n * T);
    sum_.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t t = 0; t < T; ++t) {
        leaf_[r * T + t] = m.trees[t].predict(x_.row(r).data());
        sum_[r] += leaf_[r * T + t];
      }
    std::vector<double> z(n);
    for (std::size_t r = 0; r < n; ++r) z[r] = m.base_score + m.learning_rate * sum_[r];
    full_loss_ = log_loss_from_scores(z, y_);
  }

  double full_loss() const noexcept { return full_loss_; }
  std::size_t input_count() const noexcept { return expanded_.size(); }

  /// True when some tree splits on (an expansion of) input column c.
  bool used(std::size_t c) const {
    for (auto f : expanded_.at(c))
      if (!trees_using_[f].empty()) return true;
    return false;
  }

  /// Log-loss with every input column in `cols` neutralized.
  double loss(std::span<const std::size_t> cols) const {
    std::vector<bool> neutral(x_.cols(), false);
    std::vector<bool> affected(m_.trees.size(), false);
    for (auto c : cols)
      for (auto f : expanded_.at(c)) {
        neutral[f] = true;
        for (auto t : trees_using_[f]) affected[t] = true;
      }
    std::vector<std::size_t> hit;
    for (std::size_t t = 0; t < affected.size(); ++t)
      if (affected[t]) hit.push_back(t);
    const std::size_t n = x_.rows(), T = m_.trees.size();
    std::vector<double> z(n);
    for (std::size_t r = 0; r < n; ++r) {
      double s = sum_[r];
      for (auto t : hit) s += neutral_value(m_.trees[t], 0, x_.row(r).data(), neutral) - leaf_[r * T + t];
      z[r] = m_.base_score + m_.learning_rate * s;
    }
    return log_loss_from_scores(z, y_);
  }

 private:
  static double neutral_value(const Tree& t, int i, const double* row, const std::vector<bool>& neutral) {
    const auto& node = t.nodes[static_cast<std::size_t>(i)];
    if (node.is_leaf()) return node.value;
    if (!neutral[static_cast<std::size_t>(node.feature)])
      return neutral_value(t, row[node.feature] < node.threshold ? node.left : node.right, row, neutral);
    const auto& l = t.nodes[static_cast<std::size_t>(node.left)];
    const auto& r = t.nodes[static_cast<std::size_t>(node.right)];
    const double total = l.cover + r.cover;
    const double vl = neutral_value(t, node.left, row, neutral);
    const double vr = neutral_value(t, node.right, row, neutral);
    if (total <= 0.0) return 0.5 * (vl + vr);
    return (l.cover * vl + r.cover * vr) / total;
  }

  const TrainedModel& m_;
  std::vector<int> y_;
  FeatureMatrix x_;
  std::vector<std::vector<std::size_t>> expanded_;
  std::vector<std::vector<std::size_t>> trees_using_;
  std::vector<double> leaf_;
  std::vector<double> sum_;
  double full_loss_ = 0.0;
};

namespace detail {

inline std::vector<FeatureImportance> single_importance(const TrainedModel& m, const NeutralizedScorer& s) {
  std::vector<FeatureImportance> out;
  for (std::size_t c = 0; c < s.input_count(); ++c) {
    const std::size_t one[] = {c};
    out.push_back({m.input_columns[c].name, s.used(c) ? s.loss(one) - s.full_loss() : 0.0});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
  return out;
}

}  // namespace detail

inline ImportanceReport loss_change_importance(const TrainedModel& m, const FeatureMatrix& x, std::span<const int> y) {
  const NeutralizedScorer s(m, x, y);
  ImportanceReport r;
  r.full_loss = s.full_loss();
  r.features = detail::single_importance(m, s);
  return r;
}

inline constexpr std::size_t kPairedTopFeatures = 15;

/// Synergy of every pair among the top single features:
/// delta(j and k neutralized) - delta(j) - delta(k), ranked by magnitude.
/// Complementary features (each useless alone, e.g. XOR) come out strongly
/// negative: neutralizing either one already costs the joint effect.
inline ImportanceReport paired_importance(const TrainedModel& m, const FeatureMatrix& x, std::span<const int> y,
                                          std::size_t top = kPairedTopFeatures) {
  const NeutralizedScorer s(m, x, y);
  ImportanceReport r;
  r.full_loss = s.full_loss();
  r.features = detail::single_importance(m, s);
  std::vector<std::size_t> idx;
  std::vector<double> delta;
  for (std::size_t i = 0; i < std::min(top, r.features.size()); ++i) {
    idx.push_back(x.column_index(r.features[i].feature));
    delta.push_back(r.features[i].value);
  }
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      double syn = 0.0;
      if (s.used(idx[a]) && s.used(idx[b])) {
        const std::size_t both[] = {idx[a], idx[b]};
        syn = (s.loss(both) - s.full_loss()) - delta[a] - delta[b];
      }
      r.pairs.push_back({r.features[a].feature, r.features[b].feature, syn});
    }
  std::stable_sort(r.pairs.begin(), r.pairs.end(), [](const auto& p, const auto& q) { return std::abs(p.synergy) > std::abs(q.synergy); });
  return r;
}

}  // namespace cogwear
