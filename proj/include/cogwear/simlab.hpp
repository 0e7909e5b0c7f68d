#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "cogwear/core/parallel.hpp"
#include "cogwear/core/random.hpp"
#include "cogwear/ingest.hpp"

namespace cogwear {

enum class SimProfile { rectangular, sinusoid };

/// Generative parameters of one class (normal or poor cognition).
struct ClassParams {
  // Rectangular profile, MIMS per minute.
  double active_level = 60.0;  // inside the daily active window
  double awake_level = 25.0;   // awake outside the active window
  double rest_level = 2.0;     // asleep
  double active_start_hour = 8.0;
  double active_hours = 10.0;
  // Sinusoid profile: mean + amplitude * cos(2 pi (hour - peak) / 24).
  double sin_mean = 40.0;
  double sin_amplitude = 30.0;
  double sin_peak_hour = 14.0;
  // Timing. The daily phase shift moves the whole day (sleep, activity, light).
  double l5_jitter_sd = 0.5;  // hours, per day
  double sleep_onset_hour = 23.0;
  double onset_jitter_sd = 0.5;  // hours, per night, sleep onset only
  double sleep_hours_mean = 8.0;
  double sleep_hours_sd = 0.5;
  // Light.
  double lux_day = 800.0;
  double lux_night = 5.0;
  // Moderate-to-vigorous bout per day, placed inside the active window.
  double mvpa_minutes = 60.0;
  double mvpa_level = 45.0;
  // Survey covariates.
  double age_mean = 68.0;
  double education_mean = 3.6;  // 1..5
  double income_mean = 7.0;     // 1..12
  double diabetic_p = 0.2;
  double phq9_mean = 2.5;
  double adl_mean = 24.0;
};

struct SimSpec {
  int n = 200;
  int days = 9;
  double prevalence = 0.25;
  SimProfile profile = SimProfile::rectangular;
  ClassParams normal;
  ClassParams poor;
  double noise_sd = 8.0;         // additive MIMS noise
  double lux_noise_sd = 100.0;   // additive lux noise
  double survey_missing = 0.0;   // per-field missingness of survey covariates
  // Between-participant variation, applied on top of the class parameters.
  double person_level_sd = 0.0;  // log-scale SD of a multiplier on activity and light levels
  double person_phase_sd = 0.0;  // hours; chronotype shift of the whole day
  double person_sleep_sd = 0.0;  // hours; habitual sleep duration offset
  std::uint64_t seed = 0;
  std::int64_t start_day = MinuteStamp::from_civil(2012, 1, 2).day();

  /// Cohort where the poor class differs in sleep, circadian timing,
  /// activity and light as well as in demographics.
  static SimSpec headline(int n, std::uint64_t seed) {
    SimSpec s;
    s.n = n;
    s.seed = seed;
    s.survey_missing = 0.02;
    s.person_level_sd = 0.3;
    s.person_phase_sd = 0.75;
    s.person_sleep_sd = 0.75;
    auto& p = s.poor;
    p.active_level = 55.0;
    p.awake_level = 24.0;
    p.rest_level = 2.6;
    p.l5_jitter_sd = 0.8;
    p.onset_jitter_sd = 0.7;
    p.sleep_hours_mean = 8.5;
    p.sleep_hours_sd = 0.7;
    p.lux_day = 700.0;
    p.lux_night = 6.5;
    p.mvpa_minutes = 50.0;
    p.age_mean = 71.0;
    p.education_mean = 2.9;
    p.income_mean = 5.5;
    p.diabetic_p = 0.3;
    p.phq9_mean = 4.0;
    p.adl_mean = 27.0;
    return s;
  }

  /// True when every stochastic component is switched off.
  bool noise_free() const {
    auto quiet = [](const ClassParams& c) {
      return c.l5_jitter_sd == 0.0 && c.onset_jitter_sd == 0.0 && c.sleep_hours_sd == 0.0 && c.mvpa_minutes == 0.0;
    };
    return noise_sd == 0.0 && lux_noise_sd == 0.0 && person_level_sd == 0.0 && person_phase_sd == 0.0 && person_sleep_sd == 0.0 &&
           quiet(normal) && quiet(poor);
  }

  void validate() const {
    if (n < 1) throw Error("simulate: n must be >= 1");
    if (days < 3) throw Error("simulate: days must be >= 3");
    if (!(prevalence > 0.0 && prevalence < 1.0)) throw Error("simulate: prevalence must be in (0, 1)");
    if (noise_sd < 0.0 || lux_noise_sd < 0.0) throw Error("simulate: noise SDs must be >= 0");
    if (person_level_sd < 0.0 || person_phase_sd < 0.0 || person_sleep_sd < 0.0) throw Error("simulate: SDs must be >= 0");
    if (!(survey_missing >= 0.0 && survey_missing < 1.0)) throw Error("simulate: survey_missing must be in [0, 1)");
    for (const ClassParams* c : {&normal, &poor}) {
      if (c->l5_jitter_sd < 0.0 || c->onset_jitter_sd < 0.0 || c->sleep_hours_sd < 0.0)
        throw Error("simulate: SDs must be >= 0");
      if (!(c->sleep_hours_mean > 0.0 && c->sleep_hours_mean < 24.0)) throw Error("simulate: sleep duration must be in (0, 24) hours");
      if (c->active_hours < 0.0 || c->active_hours > 24.0) throw Error("simulate: active window must be within a day");
      if (c->mvpa_minutes < 0.0) throw Error("simulate: mvpa minutes must be >= 0");
      if (c->active_level < 0.0 || c->awake_level < 0.0 || c->rest_level < 0.0 || c->lux_day < 0.0 || c->lux_night < 0.0)
        throw Error("simulate: levels must be >= 0");
      if (c->sin_amplitude < 0.0 || c->sin_mean < c->sin_amplitude) throw Error("simulate: sinusoid must stay non-negative");
      if (!(c->diabetic_p >= 0.0 && c->diabetic_p <= 1.0)) throw Error("simulate: diabetic_p must be in [0, 1]");
    }
  }
};

struct SimParticipant {
  EpochSeries series;
  ConventionalRecord conventional;
  CognitiveScores scores;
  bool poor = false;
};

struct SimCohort {
  std::vector<EpochSeries> series;
  std::vector<ConventionalRecord> conventional;
  std::vector<CognitiveScores> scores;
  std::vector<int> poor;  // generating class, cohort order
};

inline std::string sim_participant_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "S%06d", i);
  return buf;
}

/// Generating class of every participant: exactly round(prevalence * n)
/// participants are poor, placed by a seeded shuffle.
inline std::vector<int> sim_classes(const SimSpec& spec) {
  std::vector<int> cls(static_cast<std::size_t>(spec.n), 0);
  const auto k = static_cast<std::size_t>(std::llround(spec.prevalence * spec.n));
  std::fill(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(std::min(k, cls.size())), 1);
  Rng rng(mix_seed(spec.seed, 0));
  rng.shuffle(std::span<int>(cls));
  return cls;
}

namespace detail {

enum class SimState : std::uint8_t { awake, active, asleep };

inline int clamp_round(double v, int lo, int hi) { return static_cast<int>(std::clamp(std::lround(v), long{lo}, long{hi})); }

inline double wrap_hours(double h) {
  h = std::fmod(h, 24.0);
  return h < 0 ? h + 24.0 : h;
}

}  // namespace detail

inline SimParticipant generate_participant(const SimSpec& spec, int index, bool poor) {
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index) + 1));
  ClassParams c = poor ? spec.poor : spec.normal;
  if (spec.person_level_sd > 0.0) {
    auto scale = [&] { return std::exp(rng.normal(0.0, spec.person_level_sd)); };
    const double f = scale();
    c.active_level *= f;
    c.mvpa_level *= f;
    c.sin_mean *= f;
    c.sin_amplitude *= f;
    c.awake_level *= scale();
    c.rest_level *= scale();
    c.lux_day *= scale();
    c.lux_night *= scale();
    c.l5_jitter_sd *= scale();
    c.onset_jitter_sd *= scale();
  }
  if (spec.person_phase_sd > 0.0) {
    const double shift = rng.normal(0.0, spec.person_phase_sd);
    c.active_start_hour += shift;
    c.sleep_onset_hour += shift;
    c.sin_peak_hour += shift;
  }
  if (spec.person_sleep_sd > 0.0) c.sleep_hours_mean = std::clamp(c.sleep_hours_mean + rng.normal(0.0, spec.person_sleep_sd), 4.0, 12.0);
  SimParticipant p;
  p.poor = poor;
  p.series.participant_id = sim_participant_id(index);
  const std::int64_t total = static_cast<std::int64_t>(spec.days) * kMinutesPerDay;
  const MinuteStamp start = MinuteStamp::from_day(spec.start_day);

  std::vector<double> mims(static_cast<std::size_t>(total)), lux(static_cast<std::size_t>(total));
  if (spec.profile == SimProfile::sinusoid) {
    for (std::int64_t t = 0; t < total; ++t) {
      const double hour = static_cast<double>(t % kMinutesPerDay) / 60.0;
      const double w = std::cos(2.0 * std::numbers::pi * (hour - c.sin_peak_hour) / 24.0);
      mims[static_cast<std::size_t>(t)] = c.sin_mean + c.sin_amplitude * w;
      lux[static_cast<std::size_t>(t)] = 0.5 * (c.lux_day + c.lux_night) + 0.5 * (c.lux_day - c.lux_night) * w;
    }
  } else {
    std::vector<detail::SimState> state(static_cast<std::size_t>(total), detail::SimState::awake);
    auto mark = [&](double from_min, double to_min, detail::SimState s, bool only_awake) {
      const auto b = std::max<std::int64_t>(0, std::llround(from_min));
      const auto e = std::min<std::int64_t>(total, std::llround(to_min));
      for (std::int64_t t = b; t < e; ++t) {
        auto& st = state[static_cast<std::size_t>(t)];
        if (!only_awake || st != detail::SimState::asleep) st = s;
      }
    };
    std::vector<double> mvpa_from, mvpa_to;
    // Day d also owns the night starting that evening; day -1 covers the first morning.
    for (int d = -1; d < spec.days; ++d) {
      const double phase = c.l5_jitter_sd > 0.0 ? rng.normal(0.0, c.l5_jitter_sd) : 0.0;
      const double onset_shift = c.onset_jitter_sd > 0.0 ? rng.normal(0.0, c.onset_jitter_sd) : 0.0;
      const double hours = c.sleep_hours_sd > 0.0 ? std::clamp(rng.normal(c.sleep_hours_mean, c.sleep_hours_sd), 1.0, 20.0)
                                                  : c.sleep_hours_mean;
      const double day0 = static_cast<double>(d) * kMinutesPerDay;
      const double a0 = day0 + (c.active_start_hour + phase) * 60.0;
      mark(a0, a0 + c.active_hours * 60.0, detail::SimState::active, false);
      if (c.mvpa_minutes > 0.0 && c.active_hours * 60.0 > c.mvpa_minutes) {
        const double offset = rng.uniform(0.0, c.active_hours * 60.0 - c.mvpa_minutes);
        mvpa_from.push_back(a0 + offset);
        mvpa_to.push_back(a0 + offset + c.mvpa_minutes);
      }
      const double s0 = day0 + (c.sleep_onset_hour + phase + onset_shift) * 60.0;
      mark(s0, s0 + hours * 60.0, detail::SimState::asleep, false);
    }
    for (std::int64_t t = 0; t < total; ++t) {
      const auto i = static_cast<std::size_t>(t);
      switch (state[i]) {
        case detail::SimState::asleep:
          mims[i] = c.rest_level;
          lux[i] = c.lux_night;
          break;
        case detail::SimState::active:
          mims[i] = c.active_level;
          lux[i] = c.lux_day;
          break;
        case detail::SimState::awake:
          mims[i] = c.awake_level;
          lux[i] = 0.5 * (c.lux_day + c.lux_night);
          break;
      }
    }
    for (std::size_t b = 0; b < mvpa_from.size(); ++b) {
      const auto from = std::max<std::int64_t>(0, std::llround(mvpa_from[b]));
      const auto to = std::min<std::int64_t>(total, std::llround(mvpa_to[b]));
      for (std::int64_t t = from; t < to; ++t)
        if (state[static_cast<std::size_t>(t)] != detail::SimState::asleep) mims[static_cast<std::size_t>(t)] = c.mvpa_level;
    }
  }

  p.series.records.resize(static_cast<std::size_t>(total));
  for (std::int64_t t = 0; t < total; ++t) {
    const auto i = static_cast<std::size_t>(t);
    double m = mims[i], l = lux[i];
    if (spec.noise_sd > 0.0) m = std::max(0.0, m + rng.normal(0.0, spec.noise_sd));
    if (spec.lux_noise_sd > 0.0) l = std::max(0.0, l + rng.normal(0.0, spec.lux_noise_sd));
    p.series.records[i] = {start + t, m, l, true};
  }
  p.series.valid_days = count_valid_days(p.series.records);

  // Survey covariates and cognitive scores.
  auto& cv = p.conventional;
  cv.participant_id = p.series.participant_id;
  auto keep = [&] { return spec.survey_missing == 0.0 || !rng.bernoulli(spec.survey_missing); };
  const int age = detail::clamp_round(rng.normal(c.age_mean, 6.5), 60, 80);
  const bool female = rng.bernoulli(0.48);
  const int education = detail::clamp_round(rng.normal(c.education_mean, 1.1), 1, 5);
  const int marital = static_cast<int>(rng.uniform_int(1, 6));
  const int income = detail::clamp_round(rng.normal(c.income_mean, 3.0), 1, 12);
  const bool diabetic = rng.bernoulli(c.diabetic_p);
  const int phq9 = detail::clamp_round(std::abs(rng.normal(c.phq9_mean, 3.5)), 0, 27);
  const int adl = detail::clamp_round(rng.normal(c.adl_mean, 5.0), 20, 80);
  cv.age = age;  // exclusion criteria need age
  if (keep()) cv.sex = female ? Sex::female : Sex::male;
  if (keep()) cv.education = education;
  if (keep()) cv.marital = marital;
  if (keep()) cv.income = income;
  if (keep()) cv.diabetic = diabetic;
  if (keep()) cv.phq9 = phq9;
  if (keep()) cv.adl_iadl = adl;

  // Poor-class scores sit strictly below normal-class scores on every test.
  auto& sc = p.scores;
  sc.participant_id = p.series.participant_id;
  sc.dsst = static_cast<int>(poor ? rng.uniform_int(10, 35) : rng.uniform_int(40, 100));
  sc.cerad_wl = static_cast<int>(poor ? rng.uniform_int(5, 17) : rng.uniform_int(20, 38));
  sc.aft = static_cast<int>(poor ? rng.uniform_int(4, 11) : rng.uniform_int(13, 30));
  return p;
}

inline SimCohort generate_cohort(const SimSpec& spec, std::size_t threads = default_threads()) {
  spec.validate();
  const auto cls = sim_classes(spec);
  std::vector<SimParticipant> parts(static_cast<std::size_t>(spec.n));
  parallel_for(parts.size(), [&](std::size_t i) { parts[i] = generate_participant(spec, static_cast<int>(i), cls[i] == 1); }, threads);
  SimCohort out;
  for (auto& p : parts) {
    out.series.push_back(std::move(p.series));
    out.conventional.push_back(std::move(p.conventional));
    out.scores.push_back(std::move(p.scores));
    out.poor.push_back(p.poor ? 1 : 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form expectations for noise-free specs

struct OracleFeatures {
  double sleep_duration_mean = kMissing;  // hours
  double sleep_efficiency_mean = kMissing;
  double sleep_onset_mean = kMissing;  // clock hours
  double l5_midpoint = kMissing;
  double m10_midpoint = kMissing;
  double l5_activity = kMissing;
  double m10_activity = kMissing;
  double relative_amplitude = kMissing;
  double mims_strength_24h = kMissing;
  double mims_strength_12h = kMissing;
  double mims_strength_8h = kMissing;
};

namespace detail {

/// Noise-free one-day activity template of a rectangular profile, by minute.
inline std::vector<double> day_template(const ClassParams& c) {
  std::vector<double> day(static_cast<std::size_t>(kMinutesPerDay), c.awake_level);
  auto fill = [&](double from_h, double hours, double v) {
    const auto b = std::llround(from_h * 60.0);
    const auto len = std::llround(hours * 60.0);
    for (long long k = 0; k < len; ++k) day[static_cast<std::size_t>(((b + k) % kMinutesPerDay + kMinutesPerDay) % kMinutesPerDay)] = v;
  };
  fill(c.active_start_hour, c.active_hours, c.active_level);
  fill(c.sleep_onset_hour, c.sleep_hours_mean, c.rest_level);
  return day;
}

/// 2|c_k| of one period; for a series of whole days this is the amplitude at
/// the k-cycles-per-day bin.
inline double template_amplitude(std::span<const double> day, int cycles) {
  std::complex<double> acc{0.0, 0.0};
  const double n = static_cast<double>(day.size());
  for (std::size_t t = 0; t < day.size(); ++t)
    acc += day[t] * std::polar(1.0, -2.0 * std::numbers::pi * cycles * static_cast<double>(t) / n);
  return 2.0 * std::abs(acc) / n;
}

}  // namespace detail

/// Expected feature values for one participant of a noise-free spec. The
/// rectangular geometry must keep the active window inside the calendar day,
/// span at least ten hours, and leave at least five hours of sleep after
/// midnight; otherwise window features stay missing.
inline OracleFeatures oracle_features(const SimSpec& spec, const SimParticipant& participant) {
  spec.validate();
  if (!spec.noise_free()) throw Error("oracle_features: defined only for noise-free specs");
  const ClassParams& c = participant.poor ? spec.poor : spec.normal;
  OracleFeatures o;
  if (spec.profile == SimProfile::sinusoid) {
    o.mims_strength_24h = c.sin_amplitude;
    o.mims_strength_12h = 0.0;
    o.mims_strength_8h = 0.0;
    return o;
  }
  const auto day = detail::day_template(c);
  o.mims_strength_24h = detail::template_amplitude(day, 1);
  o.mims_strength_12h = detail::template_amplitude(day, 2);
  o.mims_strength_8h = detail::template_amplitude(day, 3);

  const bool levels_separate = c.rest_level < c.awake_level && c.rest_level < c.active_level;
  if (levels_separate) {
    o.sleep_duration_mean = c.sleep_hours_mean;
    o.sleep_efficiency_mean = 1.0;
    o.sleep_onset_mean = detail::wrap_hours(c.sleep_onset_hour);
  }
  const bool constant = c.active_level == c.awake_level && c.awake_level == c.rest_level;
  if (constant) {
    // Every window ties; the earliest of each length wins.
    o.l5_midpoint = 2.5;
    o.m10_midpoint = 5.0;
    o.l5_activity = o.m10_activity = c.active_level;
    o.relative_amplitude = c.active_level > 0.0 ? 0.0 : kMissing;
    return o;
  }
  const double a0 = c.active_start_hour, a1 = c.active_start_hour + c.active_hours;
  const bool m10_ok = a0 >= 0.0 && a1 <= 24.0 && c.active_hours >= 10.0 && c.active_level > c.awake_level && c.active_level > c.rest_level;
  const double morning_sleep = c.sleep_onset_hour + c.sleep_hours_mean - 24.0;  // sleep hours after midnight
  const bool l5_ok = c.sleep_onset_hour <= 24.0 && morning_sleep >= 5.0 && levels_separate;
  if (m10_ok) {
    o.m10_midpoint = a0 + 5.0;
    o.m10_activity = c.active_level;
  }
  if (l5_ok) {
    o.l5_midpoint = 2.5;
    o.l5_activity = c.rest_level;
  }
  if (m10_ok && l5_ok && c.active_level + c.rest_level > 0.0)
    o.relative_amplitude = (c.active_level - c.rest_level) / (c.active_level + c.rest_level);
  return o;
}

}  // namespace cogwear
