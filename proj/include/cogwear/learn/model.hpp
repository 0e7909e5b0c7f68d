#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cogwear/core/error.hpp"
#include "cogwear/core/feature_matrix.hpp"

namespace cogwear {

struct GbmConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  int max_depth = 6;
  double subsample = 0.8;
  double l2_leaf = 1.0;
  int early_stopping_patience = 50;
  std::uint64_t seed = 0;
  int max_bins = 254;

  void validate() const {
    if (!(learning_rate > 0.0)) throw Error("GbmConfig: learning_rate must be positive");
    if (iterations < 1) throw Error("GbmConfig: iterations must be at least 1");
    if (max_depth < 1) throw Error("GbmConfig: max_depth must be at least 1");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw Error("GbmConfig: subsample must be in (0, 1]");
    if (!(l2_leaf >= 0.0)) throw Error("GbmConfig: l2_leaf must be non-negative");
    if (early_stopping_patience < 1) throw Error("GbmConfig: early_stopping_patience must be positive");
    if (max_bins < 2 || max_bins > 255) throw Error("GbmConfig: max_bins must be in [2, 255]");
  }

  bool operator==(const GbmConfig&) const = default;
};

/// Flat binary tree; node 0 is the root. A node with feature < 0 is a leaf.
/// Rows with x < threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output (log-odds, before the learning rate)
  double cover = 0.0;  // training rows that reached the node

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const double* x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      i = x[n.feature] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }

  int depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      best = std::max(best, d[i]);
      if (!nodes[i].is_leaf()) {
        d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
        d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
      }
    }
    return best;
  }

  bool operator==(const Tree&) const = default;
};

enum class ModelKind { logistic, gbm };

inline const char* to_string(ModelKind k) { return k == ModelKind::logistic ? "logistic" : "gbm"; }

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "logistic") return ModelKind::logistic;
  if (s == "gbm") return ModelKind::gbm;
  throw SchemaError("unknown model kind '" + s + "'");
}

/// A fitted learner. Inputs are the matrix columns seen at fit time
/// (`input_columns`); nominal columns are one-hot expanded internally, and
/// `feature_names` are the expanded names the parameters refer to.
struct TrainedModel {
  ModelKind kind = ModelKind::logistic;
  std::vector<Column> input_columns;
  std::vector<std::string> feature_names;

  // logistic
  double intercept = 0.0;
  std::vector<double> coefficients;
  bool converged = false;
  bool separation = false;

  // gbm
  double base_score = 0.0;
  double learning_rate = 0.0;
  std::vector<Tree> trees;  // already truncated to best_iteration
  GbmConfig config;
  int best_iteration = 0;  // number of trees kept
  int iterations_run = 0;
  std::vector<double> train_loss;  // per iteration, over all training rows
  std::vector<double> valid_loss;  // per iteration; empty without early stopping

  bool operator==(const TrainedModel&) const = default;
};

namespace detail {

inline void check_inputs(const TrainedModel& m, const FeatureMatrix& x) {
  if (x.columns().size() != m.input_columns.size()) throw Error("predict: column count does not match the model");
  for (std::size_t c = 0; c < x.cols(); ++c)
    if (x.column(c).name != m.input_columns[c].name) throw Error("predict: column '" + x.column(c).name + "' does not match the model");
}

inline void require_complete(const FeatureMatrix& x, const char* who) {
  if (x.missing_count() != 0) throw Error(std::string(who) + ": input contains missing values (impute first)");
}

inline void require_binary(std::span<const int> y, std::size_t rows, const char* who) {
  if (y.size() != rows) throw Error(std::string(who) + ": label count does not match rows");
  for (int v : y)
    if (v != 0 && v != 1) throw Error(std::string(who) + ": labels must be 0 or 1");
}

}  // namespace detail

}  // namespace cogwear
