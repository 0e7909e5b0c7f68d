#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cogwear/features.hpp"
#include "cogwear/ingest.hpp"
#include "cogwear/learn/importance.hpp"
#include "cogwear/pipeline/model_spec.hpp"

namespace cogwear {

/// Analysis-ready cohort: the assembled feature matrix (rows in cohort
/// order) with the matching outcome labels.
struct Study {
  ExclusionResult exclusions;
  LabelSet labels;  // same order as features rows
  FeatureMatrix features;
};

/// Exclusions, outcome labels and feature extraction for parsed or simulated inputs.
inline Study build_study(std::span<const EpochSeries> series, std::span<const ConventionalRecord> conv,
                         std::span<const CognitiveScores> scores, std::size_t threads = default_threads()) {
  Study s;
  s.exclusions = apply_exclusions(series, scores, conv);
  std::unordered_map<std::string, const CognitiveScores*> score_by_id;
  for (const auto& sc : scores) score_by_id.emplace(sc.participant_id, &sc);
  std::unordered_map<std::string, const EpochSeries*> series_by_id;
  for (const auto& e : series) series_by_id.emplace(e.participant_id, &e);

  std::vector<CognitiveScores> kept;
  std::vector<EpochSeries> kept_series;
  for (const auto& id : s.exclusions.cohort) {
    kept.push_back(*score_by_id.at(id));
    kept_series.push_back(*series_by_id.at(id));
  }
  if (kept.empty()) throw Error("no participant passes the exclusion criteria");
  s.labels = label_outcomes(kept);
  const auto wearable = extract_all(kept_series, threads);
  s.features = assemble_features(wearable, conv, s.exclusions.cohort);
  return s;
}

/// Binary labels for `test`, aligned with the rows of `x` by participant id.
inline Labels labels_for_rows(const FeatureMatrix& x, std::span<const OutcomeLabels> labels, CognitiveTest test) {
  std::unordered_map<std::string, bool> by_id;
  for (const auto& l : labels) by_id.emplace(l.participant_id, label_for(l, test));
  Labels y;
  y.reserve(x.rows());
  for (const auto& id : x.row_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw SchemaError("no outcome label for participant " + id);
    y.push_back(it->second ? 1 : 0);
  }
  return y;
}

/// Feature columns of a model type. Wearable and combined models build on
/// the wearable selection (ignored for the benchmark).
inline std::vector<std::string> model_columns(ModelType t, std::span<const std::string> wearable_selection) {
  switch (t) {
    case ModelType::benchmark: return features::benchmark_columns();
    case ModelType::wearable: return {wearable_selection.begin(), wearable_selection.end()};
    case ModelType::combined: return features::combined_columns(wearable_selection);
  }
  return {};
}

/// Fits the boosted model on a seeded 80/20 split (early stopping on the
/// held-out part) and reports loss-change and paired importance there.
inline ImportanceReport study_importance(const FeatureMatrix& x, std::span<const int> y, const GbmConfig& cfg, std::uint64_t seed,
                                         ImputePolicy policy = ImputePolicy::train_donors) {
  Rng rng(mix_seed(seed, 0));
  const auto data = prepare_fold(x, y, stratified_split(y, 0.2, rng), policy);
  GbmConfig c = cfg;
  c.seed = mix_seed(seed, 1);
  const auto m = fit_gbm(data.train, data.y_train, data.valid, data.y_valid, c);
  return paired_importance(m, data.valid, data.y_valid);
}

}  // namespace cogwear
