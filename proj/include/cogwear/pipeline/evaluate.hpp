#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cogwear/core/stats.hpp"
#include "cogwear/pipeline/model_spec.hpp"

namespace cogwear {

enum class CiMethod { normal, percentile };

inline const char* to_string(CiMethod m) { return m == CiMethod::normal ? "normal" : "percentile"; }

inline CiMethod ci_method_from_string(const std::string& s) {
  if (s == "normal") return CiMethod::normal;
  if (s == "percentile") return CiMethod::percentile;
  throw Error("unknown CI method '" + s + "'");
}

struct EvalReport {
  std::string target;  // dsst | cerad | aft
  std::string model;   // benchmark | wearable | combined
  ModelKind learner = ModelKind::logistic;
  std::uint64_t seed = 0;
  int repeats = 0;
  int folds = 0;
  std::vector<std::string> features;
  std::vector<double> aucs;  // repeat-major
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  CiMethod ci_method = CiMethod::normal;
  int redraws = 0;
  bool operator==(const EvalReport&) const = default;
};

struct EvalOptions {
  int repeats = 20;
  int folds = 10;
  CiMethod ci = CiMethod::normal;
  std::size_t threads = default_threads();
};

/// Mean +- 1.96 SD / sqrt(N), or the 2.5% and 97.5% quantiles.
inline void set_interval(EvalReport& r) {
  r.mean = stats::mean(r.aucs);
  r.sd = r.aucs.size() > 1 ? stats::sd(r.aucs) : 0.0;
  if (r.ci_method == CiMethod::normal) {
    const double half = 1.96 * r.sd / std::sqrt(static_cast<double>(r.aucs.size()));
    r.ci_low = r.mean - half;
    r.ci_high = r.mean + half;
  } else {
    r.ci_low = stats::quantile(r.aucs, 0.025);
    r.ci_high = stats::quantile(r.aucs, 0.975);
  }
}

/// Repeated stratified k-fold CV of a fixed model spec. Each repeat draws
/// fresh folds; a draw leaving a validation fold single-class is redrawn
/// and counted.
inline EvalReport repeated_cv_evaluate(const FeatureMatrix& x_all, std::span<const int> y, const ModelSpec& spec, std::uint64_t seed,
                                       const EvalOptions& opt = {}) {
  if (opt.repeats < 1) throw Error("repeated_cv_evaluate: repeats must be >= 1");
  if (opt.folds < 2) throw Error("repeated_cv_evaluate: need at least two folds");
  if (x_all.rows() < static_cast<std::size_t>(opt.folds)) throw Error("repeated_cv_evaluate: fewer rows than folds");
  detail::require_binary(y, x_all.rows(), "repeated_cv_evaluate");
  if (spec.learner == ModelKind::gbm) spec.gbm.validate();
  const auto x = x_all.select_columns(spec.features);

  EvalReport r;
  r.learner = spec.learner;
  r.seed = seed;
  r.repeats = opt.repeats;
  r.folds = opt.folds;
  r.features = spec.features;
  r.ci_method = opt.ci;

  const auto R = static_cast<std::size_t>(opt.repeats), K = static_cast<std::size_t>(opt.folds);
  std::vector<std::vector<int>> assignment(R);
  for (std::size_t rep = 0; rep < R; ++rep) {
    Rng rng(mix_seed(seed, rep));
    assignment[rep] = stratified_folds_checked(y, opt.folds, rng, r.redraws);
  }
  r.aucs.assign(R * K, 0.0);
  parallel_for(
      R * K,
      [&](std::size_t u) {
        const auto& fold = assignment[u / K];
        const auto pf = prepare_fold(x, y, fold_split(fold, static_cast<int>(u % K)), spec.policy);
        const auto m = fit_spec(spec, pf.train, pf.y_train, mix_seed(seed ^ 0x6576'616cULL, u));
        r.aucs[u] = auc(predict_scores(m, pf.valid), pf.y_valid);
      },
      opt.threads);
  set_interval(r);
  return r;
}

}  // namespace cogwear
