#pragma once

// Per-participant wearable features and the named feature registry.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cogwear/circadian.hpp"
#include "cogwear/circadian_summary.hpp"
#include "cogwear/core/feature_matrix.hpp"
#include "cogwear/core/parallel.hpp"
#include "cogwear/core/stats.hpp"
#include "cogwear/ingest.hpp"
#include "cogwear/sleepwake.hpp"

namespace cogwear {

// ---------------------------------------------------------------------------
// Activity categories

inline constexpr double kSedentaryBelow = 15.9;  // MIMS/min
inline constexpr double kLightUpTo = 19.6;       // inclusive

enum class ActivityCategory { sedentary, light, mvpa };

inline ActivityCategory categorize_minute(double mims) {
  if (mims < kSedentaryBelow) return ActivityCategory::sedentary;
  if (mims <= kLightUpTo) return ActivityCategory::light;
  return ActivityCategory::mvpa;
}

struct DayActivity {
  std::int64_t day = 0;
  int sedentary = 0;
  int light = 0;
  int mvpa = 0;
};

struct ActivityBreakdown {
  std::vector<DayActivity> days;
  stats::MeanSd sedentary;
  stats::MeanSd light;
  stats::MeanSd mvpa;
};

/// Counts worn, awake minutes per category on each valid wear day (>= 960
/// wear minutes); days below that are skipped entirely.
inline ActivityBreakdown classify_activity(const MinuteGrid& g, std::span<const SleepState> states) {
  if (states.size() != g.size()) throw Error("classify_activity: state sequence length mismatch");
  std::map<std::int64_t, std::pair<DayActivity, int>> by_day;  // day -> counts, wear minutes
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.wear[i]) continue;
    auto& [counts, worn] = by_day[g.stamp(i).day()];
    ++worn;
    if (states[i] != SleepState::wake) continue;
    switch (categorize_minute(g.mims[i])) {
      case ActivityCategory::sedentary: ++counts.sedentary; break;
      case ActivityCategory::light: ++counts.light; break;
      case ActivityCategory::mvpa: ++counts.mvpa; break;
    }
  }
  ActivityBreakdown out;
  std::vector<double> sed, light, mvpa;
  for (auto& [day, entry] : by_day) {
    if (entry.second < kValidDayWearMinutes) continue;
    entry.first.day = day;
    out.days.push_back(entry.first);
    sed.push_back(entry.first.sedentary);
    light.push_back(entry.first.light);
    mvpa.push_back(entry.first.mvpa);
  }
  out.sedentary = stats::mean_sd(sed);
  out.light = stats::mean_sd(light);
  out.mvpa = stats::mean_sd(mvpa);
  return out;
}

// ---------------------------------------------------------------------------
// Distribution summaries

inline constexpr std::size_t kMinSummaryValues = 10;

struct SignalSummary {
  double mean = kMissing;
  double median = kMissing;
  double sd = kMissing;
  double max = kMissing;
  double min = kMissing;
  double q25 = kMissing;
  double q75 = kMissing;
  double skewness = kMissing;
  double kurtosis = kMissing;  // non-excess
  double entropy = kMissing;   // differential, nats
};

inline SignalSummary summarize_signal(std::span<const double> values) {
  auto v = stats::observed(values);
  SignalSummary s;
  if (v.size() < kMinSummaryValues) return s;
  std::sort(v.begin(), v.end());
  s.mean = stats::mean(v);
  s.median = stats::quantile_sorted(v, 0.5);
  s.sd = stats::sd(v);
  s.max = v.back();
  s.min = v.front();
  s.q25 = stats::quantile_sorted(v, 0.25);
  s.q75 = stats::quantile_sorted(v, 0.75);
  s.skewness = stats::skewness(v);
  s.kurtosis = stats::kurtosis(v);
  s.entropy = stats::vasicek_entropy(v);
  return s;
}

// ---------------------------------------------------------------------------
// Dominant FFT frequencies

inline constexpr std::size_t kTopFrequencies = 15;

struct FftFrequencies {
  std::array<double, kTopFrequencies> cycles_per_day{};  // rank 1 first
  std::array<double, kTopFrequencies> amplitude{};
};

/// The 15 positive-frequency bins with the largest amplitude, ordered by
/// amplitude (ties: lower frequency first).
inline FftFrequencies top_fft_frequencies(const Spectrum& s) {
  if (s.amplitude.size() < kTopFrequencies + 1)
    throw Error("top_fft_frequencies: series too short for 15 positive frequency bins");
  std::vector<std::size_t> bins(s.amplitude.size() - 1);
  for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = k + 1;
  std::partial_sort(bins.begin(), bins.begin() + kTopFrequencies, bins.end(), [&](std::size_t a, std::size_t b) {
    if (s.amplitude[a] != s.amplitude[b]) return s.amplitude[a] > s.amplitude[b];
    return a < b;
  });
  FftFrequencies out;
  for (std::size_t r = 0; r < kTopFrequencies; ++r) {
    out.cycles_per_day[r] = s.cycles_per_day(bins[r]);
    out.amplitude[r] = s.amplitude[bins[r]];
  }
  return out;
}

inline FftFrequencies top_fft_frequencies(std::span<const double> minutes) {
  return top_fft_frequencies(compute_spectrum(minutes));
}

// ---------------------------------------------------------------------------
// Per-participant extraction

struct ParticipantFeatures {
  std::string participant_id;
  bool sleep_detected = false;  // HMM fit succeeded
  SleepMetrics sleep;
  std::optional<ActivityBreakdown> activity;
  SignalSummary mims;
  SignalSummary lux;
  std::optional<FftFrequencies> mims_fft;
  std::optional<FftFrequencies> lux_fft;
  CircadianSummary circadian;
};

/// Intermediate results kept for debug exports.
struct ExtractionTrace {
  MinuteGrid grid;
  std::vector<SleepState> states;
  std::vector<SleepWindow> windows;
};

inline ParticipantFeatures extract_participant(const EpochSeries& series, ExtractionTrace* trace = nullptr) {
  ParticipantFeatures pf;
  pf.participant_id = series.participant_id;
  const MinuteGrid g = to_grid(series);

  std::vector<SleepState> states(g.size(), SleepState::unknown);
  std::vector<SleepWindow> windows;
  try {
    const HmmModel hmm = fit_hmm(g);
    states = decode_states(hmm, g);
    windows = extract_sleep_windows(states, g.start);
    pf.sleep_detected = true;
  } catch (const Error&) {
    // Degenerate activity: sleep and activity features stay missing.
  }
  pf.sleep = sleep_metrics(windows);
  if (pf.sleep_detected) pf.activity = classify_activity(g, states);

  const auto act = g.worn_mims();
  const auto lux = g.worn_lux();
  pf.mims = summarize_signal(act);
  pf.lux = summarize_signal(lux);

  std::optional<Spectrum> mims_spec, lux_spec;
  try {
    mims_spec = compute_spectrum(act);
    pf.mims_fft = top_fft_frequencies(*mims_spec);
  } catch (const Error&) {
  }
  try {
    lux_spec = compute_spectrum(lux);
    pf.lux_fft = top_fft_frequencies(*lux_spec);
  } catch (const Error&) {
  }
  pf.circadian = circadian_summary(g, windows, mims_spec, lux_spec);

  if (trace) {
    trace->grid = g;
    trace->states = std::move(states);
    trace->windows = std::move(windows);
  }
  return pf;
}

inline std::vector<ParticipantFeatures> extract_all(std::span<const EpochSeries> series,
                                                    std::size_t threads = default_threads()) {
  std::vector<ParticipantFeatures> out(series.size());
  parallel_for(series.size(), [&](std::size_t i) { out[i] = extract_participant(series[i]); }, threads);
  return out;
}

// ---------------------------------------------------------------------------
// Registry

namespace features {

inline const std::vector<std::string>& conventional_only_columns() {
  static const std::vector<std::string> v{"marital", "income", "diabetic", "phq9", "adl_iadl"};
  return v;
}

inline const std::vector<std::string>& static_columns() {
  static const std::vector<std::string> v{"age", "sex", "education"};
  return v;
}

inline std::vector<Category> marital_categories() {
  return {{1, "married"}, {2, "widowed"}, {3, "divorced"}, {4, "separated"}, {5, "never_married"}, {6, "living_with_partner"}};
}

/// Every column of the assembled matrix, in order.
inline const std::vector<Column>& registry() {
  static const std::vector<Column> cols = [] {
    std::vector<Column> c;
    auto num = [&](std::string n) { c.push_back({std::move(n), ColumnKind::numeric, {}}); };
    for (const char* s : {"onset", "offset", "duration", "efficiency"}) {
      num(std::string("sleep_") + s + "_mean");
      num(std::string("sleep_") + s + "_sd");
    }
    for (const char* s : {"sedentary", "light", "mvpa"}) {
      num(std::string(s) + "_mean");
      num(std::string(s) + "_sd");
    }
    for (const char* sig : {"mims", "lux"})
      for (const char* stat : {"mean", "median", "sd", "max", "min", "q25", "q75", "skew", "kurtosis", "entropy"})
        num(std::string(sig) + "_" + stat);
    for (const char* sig : {"mims", "lux"})
      for (std::size_t r = 1; r <= kTopFrequencies; ++r) num(std::string(sig) + "_fft_freq_" + std::to_string(r));
    for (const char* s : {"l5_midpoint", "m10_midpoint", "l5_activity", "m10_activity", "l5_lux", "m10_lux", "ra", "iv"}) {
      num(std::string(s) + "_mean");
      num(std::string(s) + "_sd");
    }
    num("is");
    for (const char* sig : {"mims", "lux"})
      for (const char* p : {"24h", "12h", "8h"}) num(std::string(sig) + "_strength_" + p);
    for (const char* s : {"lux_sleep", "lux_nonsleep"}) {
      num(std::string(s) + "_mean");
      num(std::string(s) + "_sd");
    }
    num("age");
    num("sex");  // 1 = female, 0 = male
    c.push_back({"education", ColumnKind::ordinal, {}});
    c.push_back({"marital", ColumnKind::nominal, marital_categories()});
    c.push_back({"income", ColumnKind::ordinal, {}});
    num("diabetic");
    num("phq9");
    num("adl_iadl");
    return c;
  }();
  return cols;
}

inline std::vector<std::string> registry_names() {
  std::vector<std::string> out;
  for (const auto& c : registry()) out.push_back(c.name);
  return out;
}

/// Candidate columns for wearable models: everything except the
/// conventional-only survey columns (age, sex and education stay in).
inline std::vector<std::string> wearable_candidates() {
  std::vector<std::string> out;
  const auto& conv = conventional_only_columns();
  for (const auto& c : registry())
    if (std::find(conv.begin(), conv.end(), c.name) == conv.end()) out.push_back(c.name);
  return out;
}

inline std::vector<std::string> benchmark_columns() {
  std::vector<std::string> out = static_columns();
  const auto& conv = conventional_only_columns();
  out.insert(out.end(), conv.begin(), conv.end());
  return out;
}

/// Wearable-model selection plus every conventional-only column.
inline std::vector<std::string> combined_columns(std::span<const std::string> wearable_selection) {
  std::vector<std::string> out(wearable_selection.begin(), wearable_selection.end());
  for (const auto& c : conventional_only_columns())
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

}  // namespace features

namespace detail {
template <class T>
double opt_value(const std::optional<T>& v) {
  return v ? static_cast<double>(*v) : kMissing;
}
}  // namespace detail

/// Named values of one participant's wearable and survey features.
inline std::unordered_map<std::string, double> feature_values(const ParticipantFeatures& pf, const ConventionalRecord& conv) {
  std::unordered_map<std::string, double> v;
  const auto& s = pf.sleep;
  v["sleep_onset_mean"] = s.onset_mean;
  v["sleep_onset_sd"] = s.onset_sd;
  v["sleep_offset_mean"] = s.offset_mean;
  v["sleep_offset_sd"] = s.offset_sd;
  v["sleep_duration_mean"] = s.duration_mean;
  v["sleep_duration_sd"] = s.duration_sd;
  v["sleep_efficiency_mean"] = s.efficiency_mean;
  v["sleep_efficiency_sd"] = s.efficiency_sd;
  const ActivityBreakdown none;
  const auto& a = pf.activity ? *pf.activity : none;
  v["sedentary_mean"] = a.sedentary.mean;
  v["sedentary_sd"] = a.sedentary.sd;
  v["light_mean"] = a.light.mean;
  v["light_sd"] = a.light.sd;
  v["mvpa_mean"] = a.mvpa.mean;
  v["mvpa_sd"] = a.mvpa.sd;
  for (const auto& [sig, sum] : {std::pair<const char*, const SignalSummary*>{"mims", &pf.mims}, {"lux", &pf.lux}}) {
    const std::string p = std::string(sig) + "_";
    v[p + "mean"] = sum->mean;
    v[p + "median"] = sum->median;
    v[p + "sd"] = sum->sd;
    v[p + "max"] = sum->max;
    v[p + "min"] = sum->min;
    v[p + "q25"] = sum->q25;
    v[p + "q75"] = sum->q75;
    v[p + "skew"] = sum->skewness;
    v[p + "kurtosis"] = sum->kurtosis;
    v[p + "entropy"] = sum->entropy;
  }
  for (const auto& [sig, f] : {std::pair<const char*, const std::optional<FftFrequencies>*>{"mims", &pf.mims_fft}, {"lux", &pf.lux_fft}})
    for (std::size_t r = 0; r < kTopFrequencies; ++r)
      v[std::string(sig) + "_fft_freq_" + std::to_string(r + 1)] = *f ? (*f)->cycles_per_day[r] : kMissing;
  const auto& c = pf.circadian;
  auto pair = [&](const std::string& n, const stats::MeanSd& ms) {
    v[n + "_mean"] = ms.mean;
    v[n + "_sd"] = ms.sd;
  };
  pair("l5_midpoint", c.l5_midpoint);
  pair("m10_midpoint", c.m10_midpoint);
  pair("l5_activity", c.l5_activity);
  pair("m10_activity", c.m10_activity);
  pair("l5_lux", c.l5_lux);
  pair("m10_lux", c.m10_lux);
  pair("ra", c.relative_amplitude);
  pair("iv", c.intradaily_variability);
  v["is"] = c.interdaily_stability;
  const char* periods[] = {"24h", "12h", "8h"};
  for (std::size_t k = 0; k < 3; ++k) {
    v[std::string("mims_strength_") + periods[k]] = c.mims_strength[k];
    v[std::string("lux_strength_") + periods[k]] = c.lux_strength[k];
  }
  pair("lux_sleep", c.lux_sleep);
  pair("lux_nonsleep", c.lux_nonsleep);
  v["age"] = detail::opt_value(conv.age);
  v["sex"] = conv.sex ? (*conv.sex == Sex::female ? 1.0 : 0.0) : kMissing;
  v["education"] = detail::opt_value(conv.education);
  v["marital"] = detail::opt_value(conv.marital);
  v["income"] = detail::opt_value(conv.income);
  v["diabetic"] = conv.diabetic ? (*conv.diabetic ? 1.0 : 0.0) : kMissing;
  v["phq9"] = detail::opt_value(conv.phq9);
  v["adl_iadl"] = detail::opt_value(conv.adl_iadl);
  return v;
}

/// Builds the full registry matrix for `cohort` (rows in cohort order).
/// Every cohort id needs both a ParticipantFeatures and a ConventionalRecord.
inline FeatureMatrix assemble_features(std::span<const ParticipantFeatures> wearable, std::span<const ConventionalRecord> conv,
                                       std::span<const std::string> cohort) {
  std::unordered_map<std::string, const ParticipantFeatures*> pf_by_id;
  for (const auto& p : wearable) pf_by_id.emplace(p.participant_id, &p);
  std::unordered_map<std::string, const ConventionalRecord*> conv_by_id;
  for (const auto& c : conv) conv_by_id.emplace(c.participant_id, &c);

  const auto& reg = features::registry();
  FeatureMatrix m(std::vector<std::string>(cohort.begin(), cohort.end()), reg);
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    auto p = pf_by_id.find(cohort[r]);
    auto c = conv_by_id.find(cohort[r]);
    if (p == pf_by_id.end() || c == conv_by_id.end())
      throw Error("assemble_features: participant " + cohort[r] + " lacks wearable or survey data");
    const auto values = feature_values(*p->second, *c->second);
    if (values.size() != reg.size()) throw Error("assemble_features: produced columns do not match the registry");
    for (std::size_t col = 0; col < reg.size(); ++col) {
      auto it = values.find(reg[col].name);
      if (it == values.end()) throw Error("assemble_features: registry column '" + reg[col].name + "' was not produced");
      m.at(r, col) = it->second;
    }
  }
  return m;
}

}  // namespace cogwear
