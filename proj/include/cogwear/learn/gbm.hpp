#pragma once

// Second-order gradient-boosted trees on log-loss with histogram splits,
// level-wise depth-limited growth and validation early stopping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "cogwear/core/random.hpp"
#include "cogwear/learn/logistic.hpp"
#include "cogwear/learn/metrics.hpp"
#include "cogwear/learn/model.hpp"
#include "cogwear/learn/predict.hpp"

namespace cogwear {

namespace detail {

/// Split thresholds for one feature. With few distinct values every
/// midpoint is a candidate; otherwise midpoints at evenly spaced ranks.
/// Both depend only on the ordering of the values.
inline std::vector<double> bin_borders(std::vector<double> v, int max_bins) {
  std::sort(v.begin(), v.end());
  std::vector<double> u = v;
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::vector<double> out;
  if (u.size() < 2) return out;
  auto mid = [](double a, double b) { return a + (b - a) / 2.0; };
  if (u.size() <= static_cast<std::size_t>(max_bins)) {
    for (std::size_t i = 0; i + 1 < u.size(); ++i) out.push_back(mid(u[i], u[i + 1]));
    return out;
  }
  const std::size_t n = v.size();
  for (int q = 1; q < max_bins; ++q) {
    const std::size_t pos = static_cast<std::size_t>(q) * n / static_cast<std::size_t>(max_bins);
    if (pos == 0 || pos >= n || v[pos - 1] == v[pos]) continue;
    const double b = mid(v[pos - 1], v[pos]);
    if (out.empty() || b > out.back()) out.push_back(b);
  }
  return out;
}

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::uint8_t>& bins, const std::vector<std::vector<double>>& borders, std::size_t n,
             int max_depth, double lambda)
      : bins_(bins), borders_(borders), n_(n), p_(borders.size()), max_depth_(max_depth), lambda_(lambda) {}

  Tree grow(std::vector<std::uint32_t> rows, const std::vector<double>& g, const std::vector<double>& h) {
    Tree t;
    t.nodes.push_back({});
    struct Pending {
      int node;
      std::vector<std::uint32_t> rows;
    };
    std::vector<Pending> level;
    level.push_back({0, std::move(rows)});
    for (int depth = 0; !level.empty(); ++depth) {
      std::vector<Pending> next;
      for (auto& pn : level) {
        double G = 0.0, H = 0.0;
        for (auto r : pn.rows) {
          G += g[r];
          H += h[r];
        }
        auto& node = t.nodes[static_cast<std::size_t>(pn.node)];
        node.cover = static_cast<double>(pn.rows.size());
        node.value = -G / std::max(H + lambda_, 1e-16);
        if (depth >= max_depth_ || pn.rows.size() < 2) continue;
        const auto split = best_split(pn.rows, g, h, G, H);
        if (!split) continue;
        std::vector<std::uint32_t> left, right;
        for (auto r : pn.rows) (bins_[split->feature * n_ + r] <= split->bin ? left : right).push_back(r);
        const int li = static_cast<int>(t.nodes.size());
        t.nodes.push_back({});
        t.nodes.push_back({});
        auto& parent = t.nodes[static_cast<std::size_t>(pn.node)];
        parent.feature = static_cast<int>(split->feature);
        parent.threshold = borders_[split->feature][split->bin];
        parent.left = li;
        parent.right = li + 1;
        parent.value = 0.0;
        next.push_back({li, std::move(left)});
        next.push_back({li + 1, std::move(right)});
      }
      level = std::move(next);
    }
    return t;
  }

 private:
  struct Split {
    std::size_t feature;
    std::size_t bin;  // rows with bin <= this go left
    double gain;
  };

  std::optional<Split> best_split(const std::vector<std::uint32_t>& rows, const std::vector<double>& g,
                                  const std::vector<double>& h, double G, double H) {
    std::optional<Split> best;
    const double parent = G * G / (H + lambda_);
    for (std::size_t f = 0; f < p_; ++f) {
      const std::size_t nb = borders_[f].size() + 1;
      if (nb < 2) continue;
      hg_.assign(nb, 0.0);
      hh_.assign(nb, 0.0);
      hc_.assign(nb, 0);
      const std::uint8_t* col = bins_.data() + f * n_;
      for (auto r : rows) {
        const auto b = col[r];
        hg_[b] += g[r];
        hh_[b] += h[r];
        ++hc_[b];
      }
      double gl = 0.0, hl = 0.0;
      std::size_t cl = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        gl += hg_[b];
        hl += hh_[b];
        cl += hc_[b];
        if (cl == 0) continue;
        if (cl == rows.size()) break;
        const double gr = G - gl, hr = H - hl;
        const double gain = 0.5 * (gl * gl / (hl + lambda_) + gr * gr / (hr + lambda_) - parent);
        if (gain > 0.0 && (!best || gain > best->gain)) best = Split{f, b, gain};
      }
    }
    return best;
  }

  const std::vector<std::uint8_t>& bins_;
  const std::vector<std::vector<double>>& borders_;
  std::size_t n_, p_;
  int max_depth_;
  double lambda_;
  std::vector<double> hg_, hh_;
  std::vector<std::size_t> hc_;
};

inline TrainedModel fit_gbm_impl(const FeatureMatrix& x_in, std::span<const int> y, const FeatureMatrix* vx_in,
                                 std::span<const int> vy, const GbmConfig& cfg) {
  cfg.validate();
  detail::require_complete(x_in, "fit_gbm");
  detail::require_binary(y, x_in.rows(), "fit_gbm");
  const FeatureMatrix x = expand_nominal(x_in);
  const std::size_t n = x.rows(), p = x.cols();
  double pos = 0.0;
  for (int v : y) pos += v;
  if (pos == 0.0 || pos == static_cast<double>(n)) throw Error("fit_gbm: degenerate outcome (a single class)");

  std::optional<FeatureMatrix> vx;
  if (vx_in) {
    if (vx_in->rows() == 0) throw Error("fit_gbm: early stopping requested with an empty validation set");
    detail::require_complete(*vx_in, "fit_gbm (validation)");
    detail::require_binary(vy, vx_in->rows(), "fit_gbm (validation)");
    if (vx_in->columns() != x_in.columns()) throw Error("fit_gbm: validation columns differ from training columns");
    vx = expand_nominal(*vx_in);
  }

  std::vector<std::vector<double>> borders(p);
  std::vector<std::uint8_t> bins(n * p);
  for (std::size_t f = 0; f < p; ++f) {
    borders[f] = bin_borders(x.column_values(f), cfg.max_bins);
    for (std::size_t r = 0; r < n; ++r) {
      const auto it = std::upper_bound(borders[f].begin(), borders[f].end(), x.at(r, f));
      bins[f * n + r] = static_cast<std::uint8_t>(it - borders[f].begin());
    }
  }

  TrainedModel m;
  m.kind = ModelKind::gbm;
  m.input_columns = x_in.columns();
  m.feature_names = x.column_names();
  m.config = cfg;
  m.learning_rate = cfg.learning_rate;
  const double prevalence = pos / static_cast<double>(n);
  m.base_score = std::log(prevalence / (1.0 - prevalence));

  std::vector<double> F(n, m.base_score), g(n), h(n);
  std::vector<double> VF(vx ? vx->rows() : 0, m.base_score);
  Rng rng(cfg.seed);
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  const std::size_t take =
      cfg.subsample < 1.0 ? std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(cfg.subsample * static_cast<double>(n))), 1, n) : n;
  TreeGrower grower(bins, borders, n, cfg.max_depth, cfg.l2_leaf);

  double best_loss = std::numeric_limits<double>::infinity();
  int best_count = 0;
  for (int it = 0; it < cfg.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const double pr = sigmoid(F[i]);
      g[i] = pr - y[i];
      h[i] = pr * (1.0 - pr);
    }
    std::vector<std::uint32_t> rows;
    if (take < n) {
      std::vector<std::uint32_t> perm = all;
      rng.shuffle(std::span<std::uint32_t>(perm));
      rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(take));
      std::sort(rows.begin(), rows.end());
    } else {
      rows = all;
    }
    m.trees.push_back(grower.grow(std::move(rows), g, h));
    const Tree& t = m.trees.back();
    for (std::size_t i = 0; i < n; ++i) F[i] += cfg.learning_rate * t.predict(x.row(i).data());
    m.train_loss.push_back(log_loss_from_scores(F, y));
    ++m.iterations_run;
    if (vx) {
      for (std::size_t i = 0; i < VF.size(); ++i) VF[i] += cfg.learning_rate * t.predict(vx->row(i).data());
      const double vl = log_loss_from_scores(VF, vy);
      m.valid_loss.push_back(vl);
      if (vl < best_loss) {
        best_loss = vl;
        best_count = it + 1;
      } else if (it + 1 - best_count >= cfg.early_stopping_patience) {
        break;
      }
    }
  }
  m.best_iteration = vx ? best_count : static_cast<int>(m.trees.size());
  m.trees.resize(static_cast<std::size_t>(m.best_iteration));
  return m;
}

}  // namespace detail

/// Trains for exactly cfg.iterations trees.
inline TrainedModel fit_gbm(const FeatureMatrix& x, std::span<const int> y, const GbmConfig& cfg) {
  return detail::fit_gbm_impl(x, y, nullptr, {}, cfg);
}

/// Trains with early stopping on (vx, vy): stops after `early_stopping_patience`
/// rounds without a new validation-loss minimum and keeps the trees up to it.
inline TrainedModel fit_gbm(const FeatureMatrix& x, std::span<const int> y, const FeatureMatrix& vx, std::span<const int> vy,
                            const GbmConfig& cfg) {
  return detail::fit_gbm_impl(x, y, &vx, vy, cfg);
}

}  // namespace cogwear
