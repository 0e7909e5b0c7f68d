#pragma once

#include <string>
#include <vector>

#include "cogwear/learn/importance.hpp"
#include "cogwear/pipeline/model_spec.hpp"

namespace cogwear {

struct RfeStep {
  std::string eliminated;  // empty for the initial full-set step
  double valid_loss = 0.0;
  std::size_t features = 0;  // remaining after this step
  bool operator==(const RfeStep&) const = default;
};

struct RfeTrace {
  std::vector<RfeStep> steps;  // steps[0] is the full candidate set
  std::vector<std::string> chosen;
  double chosen_loss = 0.0;
  std::size_t chosen_step = 0;
  bool operator==(const RfeTrace&) const = default;
};

struct RfeOptions {
  double valid_fraction = 0.2;
  ImputePolicy policy = ImputePolicy::train_donors;
  /// Score each candidate removal by retraining without it instead of
  /// neutralizing it in the current model. Quadratic in the feature count.
  bool exact_retrain = false;
};

namespace detail {

inline double validation_loss(const TrainedModel& m, const FeatureMatrix& vx, std::span<const int> vy) {
  return log_loss_from_scores(predict_scores(m, vx), vy);
}

}  // namespace detail

/// Backward elimination from every column of `candidates` down to one,
/// keeping the step with the lowest validation loss (ties go to the
/// smaller feature set).
inline RfeTrace recursive_feature_elimination(const FeatureMatrix& candidates, std::span<const int> y, const GbmConfig& cfg,
                                              std::uint64_t seed, const RfeOptions& opt = {}) {
  if (candidates.cols() < 2) throw Error("recursive_feature_elimination: need at least two candidate features");
  detail::require_binary(y, candidates.rows(), "recursive_feature_elimination");
  cfg.validate();
  Rng split_rng(mix_seed(seed, 0));
  const auto split = stratified_split(y, opt.valid_fraction, split_rng);
  const auto data = prepare_fold(candidates, y, split, opt.policy);

  std::vector<std::string> current;
  for (const auto& c : candidates.columns()) current.push_back(c.name);
  std::uint64_t fits = 0;
  auto train = [&](const std::vector<std::string>& cols) {
    GbmConfig c = cfg;
    c.seed = mix_seed(seed, ++fits);
    return fit_gbm(data.train.select_columns(cols), data.y_train, data.valid.select_columns(cols), data.y_valid, c);
  };

  RfeTrace trace;
  std::vector<std::vector<std::string>> sets;
  auto model = train(current);
  trace.steps.push_back({"", detail::validation_loss(model, data.valid.select_columns(current), data.y_valid), current.size()});
  sets.push_back(current);

  while (current.size() > 1) {
    std::size_t drop = 0;
    double best = std::numeric_limits<double>::infinity();
    if (opt.exact_retrain) {
      for (std::size_t j = 0; j < current.size(); ++j) {
        auto rest = current;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
        const double l = detail::validation_loss(train(rest), data.valid.select_columns(rest), data.y_valid);
        if (l < best) best = l, drop = j;
      }
    } else {
      const NeutralizedScorer scorer(model, data.valid.select_columns(current), data.y_valid);
      for (std::size_t j = 0; j < current.size(); ++j) {
        const std::size_t cols[] = {j};
        const double l = scorer.loss(cols);
        if (l < best) best = l, drop = j;
      }
    }
    const std::string name = current[drop];
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    model = train(current);
    trace.steps.push_back({name, detail::validation_loss(model, data.valid.select_columns(current), data.y_valid), current.size()});
    sets.push_back(current);
  }

  for (std::size_t s = 0; s < trace.steps.size(); ++s)
    if (s == 0 || trace.steps[s].valid_loss <= trace.chosen_loss) {
      trace.chosen_loss = trace.steps[s].valid_loss;
      trace.chosen_step = s;
    }
  trace.chosen = sets[trace.chosen_step];
  return trace;
}

}  // namespace cogwear
