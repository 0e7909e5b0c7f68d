#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cogwear/pipeline/model_spec.hpp"

namespace cogwear {

struct SearchSpace {
  double learning_rate_lo = 0.01, learning_rate_hi = 0.3;  // log-uniform
  int iterations_lo = 100, iterations_hi = 2000;
  int max_depth_lo = 3, max_depth_hi = 10;
  double subsample_lo = 0.5, subsample_hi = 1.0;
  int n_trials = 200;

  void validate() const {
    if (!(learning_rate_lo > 0.0 && learning_rate_lo <= learning_rate_hi)) throw Error("search space: bad learning_rate bounds");
    if (!(iterations_lo >= 1 && iterations_lo <= iterations_hi)) throw Error("search space: bad iterations bounds");
    if (!(max_depth_lo >= 1 && max_depth_lo <= max_depth_hi)) throw Error("search space: bad max_depth bounds");
    if (!(subsample_lo > 0.0 && subsample_lo <= subsample_hi && subsample_hi <= 1.0)) throw Error("search space: bad subsample bounds");
    if (n_trials < 1) throw Error("search space: n_trials must be >= 1");
  }

  /// Draws one configuration; every other field comes from `base`.
  GbmConfig sample(Rng& rng, const GbmConfig& base) const {
    GbmConfig c = base;
    const double u = rng.uniform();
    c.learning_rate = learning_rate_lo == learning_rate_hi
                          ? learning_rate_lo
                          : std::exp(std::log(learning_rate_lo) + u * (std::log(learning_rate_hi) - std::log(learning_rate_lo)));
    c.iterations = static_cast<int>(rng.uniform_int(iterations_lo, iterations_hi));
    c.max_depth = static_cast<int>(rng.uniform_int(max_depth_lo, max_depth_hi));
    const double v = rng.uniform();
    c.subsample = subsample_lo == subsample_hi ? subsample_lo : subsample_lo + v * (subsample_hi - subsample_lo);
    return c;
  }

  bool operator==(const SearchSpace&) const = default;
};

struct TrialRecord {
  int trial = 0;
  GbmConfig config;
  std::vector<double> fold_aucs;
  double mean_auc = 0.0;
  bool operator==(const TrialRecord&) const = default;
};

struct TuneResult {
  GbmConfig best;
  int best_trial = 0;
  double best_auc = 0.0;
  int folds = 0;
  int redraws = 0;
  std::vector<TrialRecord> trials;
  bool operator==(const TuneResult&) const = default;
};

/// Replaces cross-validated AUC, for exercising the trial loop.
using TrialObjective = std::function<double(const GbmConfig&, int trial)>;

struct TuneOptions {
  int folds = 10;
  ImputePolicy policy = ImputePolicy::train_donors;
  GbmConfig base;
  TrialObjective objective;
  std::size_t threads = default_threads();
};

/// Random search: each trial samples the space, runs stratified k-fold CV
/// without early stopping and scores the mean held-out AUC. Folds are drawn
/// once and shared by every trial. Returns the first best trial.
inline TuneResult tune_hyperparameters(const FeatureMatrix& x, std::span<const int> y, const SearchSpace& space, std::uint64_t seed,
                                       const TuneOptions& opt = {}) {
  space.validate();
  if (opt.folds < 2) throw Error("tune_hyperparameters: need at least two folds");
  if (x.rows() < static_cast<std::size_t>(opt.folds)) throw Error("tune_hyperparameters: fewer rows than folds");
  detail::require_binary(y, x.rows(), "tune_hyperparameters");

  TuneResult out;
  out.folds = opt.folds;
  std::vector<PreparedFold> prepared;
  if (!opt.objective) {
    Rng fold_rng(mix_seed(seed, 0));
    const auto fold = stratified_folds_checked(y, opt.folds, fold_rng, out.redraws);
    prepared.resize(static_cast<std::size_t>(opt.folds));
    parallel_for(
        prepared.size(), [&](std::size_t f) { prepared[f] = prepare_fold(x, y, fold_split(fold, static_cast<int>(f)), opt.policy); },
        opt.threads);
  }

  const auto n = static_cast<std::size_t>(space.n_trials);
  out.trials.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    Rng rng(mix_seed(seed, t + 1));
    out.trials[t].trial = static_cast<int>(t);
    out.trials[t].config = space.sample(rng, opt.base);
    out.trials[t].config.seed = mix_seed(seed ^ 0x7475'6e65ULL, t);
  }
  if (opt.objective) {
    for (auto& tr : out.trials) tr.mean_auc = opt.objective(tr.config, tr.trial);
  } else {
    // One work unit per (trial, fold).
    const std::size_t k = prepared.size();
    std::vector<double> aucs(n * k);
    parallel_for(
        n * k,
        [&](std::size_t u) {
          const auto& tr = out.trials[u / k];
          const auto& pf = prepared[u % k];
          GbmConfig c = tr.config;
          c.seed = mix_seed(tr.config.seed, u % k);
          const auto m = fit_gbm(pf.train, pf.y_train, c);
          aucs[u] = auc(predict_scores(m, pf.valid), pf.y_valid);
        },
        opt.threads);
    for (std::size_t t = 0; t < n; ++t) {
      auto& tr = out.trials[t];
      tr.fold_aucs.assign(aucs.begin() + static_cast<std::ptrdiff_t>(t * k), aucs.begin() + static_cast<std::ptrdiff_t>((t + 1) * k));
      tr.mean_auc = stats::mean(tr.fold_aucs);
    }
  }
  for (std::size_t t = 0; t < n; ++t)
    if (t == 0 || out.trials[t].mean_auc > out.best_auc) {
      out.best_auc = out.trials[t].mean_auc;
      out.best_trial = static_cast<int>(t);
    }
  out.best = out.trials[static_cast<std::size_t>(out.best_trial)].config;
  return out;
}

}  // namespace cogwear
