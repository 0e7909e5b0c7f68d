#pragma once

// k-nearest-neighbour imputation over z-scored shared columns.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cogwear/core/error.hpp"
#include "cogwear/core/feature_matrix.hpp"
#include "cogwear/core/stats.hpp"

namespace cogwear {

struct ImputerConfig {
  int k = 1;
};

/// Which rows serve as donors when imputing a validation set.
enum class ImputePolicy { train_donors, separate };

inline const char* to_string(ImputePolicy p) { return p == ImputePolicy::train_donors ? "train_donors" : "separate"; }

inline ImputePolicy impute_policy_from_string(const std::string& s) {
  if (s == "train_donors") return ImputePolicy::train_donors;
  if (s == "separate") return ImputePolicy::separate;
  throw Error("unknown imputation policy '" + s + "'");
}

/// Fills every missing cell of `target` from its nearest donors in `train`.
///
/// Distance: Euclidean over the columns observed in both rows, each z-scored
/// by donor-pool mean/SD, scaled by (columns / shared columns). Only donors
/// that observe the column being filled are eligible; distance ties go to
/// the lower donor index. With k > 1 the donor values are averaged. A row
/// sharing no column with any eligible donor takes the donor median; a
/// column no donor observes is set to 0 and reported in `warnings`.
inline FeatureMatrix knn_impute(const FeatureMatrix& train, const FeatureMatrix& target, const ImputerConfig& cfg = {},
                                std::vector<std::string>* warnings = nullptr) {
  if (cfg.k < 1) throw Error("knn_impute: k must be at least 1");
  const std::size_t p = target.cols();
  std::vector<std::size_t> src(p);
  for (std::size_t c = 0; c < p; ++c) {
    auto idx = train.find_column(target.column(c).name);
    if (!idx) throw Error("knn_impute: donor pool lacks column '" + target.column(c).name + "'");
    src[c] = *idx;
  }
  const std::size_t nd = train.rows();

  std::vector<double> mu(p, kMissing), scale(p, 1.0), median(p, kMissing);
  for (std::size_t c = 0; c < p; ++c) {
    const auto v = stats::observed(train.column_values(src[c]));
    if (v.empty()) continue;
    mu[c] = stats::mean(v);
    median[c] = stats::quantile(v, 0.5);
    double ss = 0.0;
    for (double a : v) ss += (a - mu[c]) * (a - mu[c]);
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    if (sd > 0.0) scale[c] = sd;
  }
  // Donor values, z-scored, column-major for the distance loop.
  std::vector<double> z(nd * p);
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t d = 0; d < nd; ++d) z[c * nd + d] = (train.at(d, src[c]) - mu[c]) / scale[c];

  FeatureMatrix out = target;
  std::vector<bool> warned(p, false);
  std::vector<double> dist(nd);
  std::vector<std::size_t> shared(nd), order(nd);
  for (std::size_t r = 0; r < target.rows(); ++r) {
    bool any_missing = false;
    for (std::size_t c = 0; c < p; ++c) any_missing |= target.missing(r, c);
    if (!any_missing) continue;

    std::fill(dist.begin(), dist.end(), 0.0);
    std::fill(shared.begin(), shared.end(), 0);
    for (std::size_t c = 0; c < p; ++c) {
      if (target.missing(r, c)) continue;
      const double t = (target.at(r, c) - mu[c]) / scale[c];
      const double* col = z.data() + c * nd;
      for (std::size_t d = 0; d < nd; ++d) {
        if (std::isnan(col[d])) continue;
        const double diff = col[d] - t;
        dist[d] += diff * diff;
        ++shared[d];
      }
    }
    for (std::size_t d = 0; d < nd; ++d)
      dist[d] = shared[d] ? std::sqrt(dist[d] * static_cast<double>(p) / static_cast<double>(shared[d])) : 0.0;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if ((shared[a] == 0) != (shared[b] == 0)) return shared[b] == 0;
      return dist[a] < dist[b];
    });

    for (std::size_t c = 0; c < p; ++c) {
      if (!target.missing(r, c)) continue;
      if (is_missing(mu[c])) {
        out.at(r, c) = 0.0;
        if (!warned[c] && warnings) warnings->push_back("column '" + target.column(c).name + "' has no observed donor values; filled with 0");
        warned[c] = true;
        continue;
      }
      double sum = 0.0;
      int used = 0;
      for (std::size_t d : order) {
        if (shared[d] == 0) break;
        const double v = train.at(d, src[c]);
        if (is_missing(v)) continue;
        sum += v;
        if (++used == cfg.k) break;
      }
      out.at(r, c) = used ? sum / used : median[c];
    }
  }
  return out;
}

}  // namespace cogwear
