#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "cogwear/circadian.hpp"
#include "cogwear/ingest.hpp"
#include "cogwear/sleepwake.hpp"

namespace cogwear {

struct CircadianSummary {
  stats::MeanSd l5_midpoint;  // circular
  stats::MeanSd m10_midpoint;  // circular
  stats::MeanSd l5_activity;
  stats::MeanSd m10_activity;
  stats::MeanSd l5_lux;
  stats::MeanSd m10_lux;
  stats::MeanSd relative_amplitude;
  stats::MeanSd intradaily_variability;
  double interdaily_stability = kMissing;
  std::array<double, 3> mims_strength{kMissing, kMissing, kMissing};  // 24 h, 12 h, 8 h
  std::array<double, 3> lux_strength{kMissing, kMissing, kMissing};
  stats::MeanSd lux_sleep;     // per-night means inside sleep windows
  stats::MeanSd lux_nonsleep;  // per-day means outside sleep windows

  std::vector<DailyWindows> days;  // per covered calendar day
};

/// One calendar day of a per-minute signal, indexed by minute of day.
/// Minutes outside the grid are missing.
inline std::vector<double> calendar_day(const MinuteGrid& g, std::span<const double> signal, std::int64_t day) {
  std::vector<double> out(static_cast<std::size_t>(kMinutesPerDay), kMissing);
  const std::int64_t first = MinuteStamp::from_day(day) - g.start;
  for (std::int64_t m = 0; m < kMinutesPerDay; ++m) {
    const std::int64_t i = first + m;
    if (i >= 0 && i < static_cast<std::int64_t>(g.size())) out[static_cast<std::size_t>(m)] = signal[static_cast<std::size_t>(i)];
  }
  return out;
}

inline CircadianSummary circadian_summary(const MinuteGrid& g, std::span<const SleepWindow> sleep,
                                          const std::optional<Spectrum>& mims_spectrum = std::nullopt,
                                          const std::optional<Spectrum>& lux_spectrum = std::nullopt) {
  CircadianSummary out;
  if (g.size() == 0) return out;
  const auto act = g.worn_mims();
  const auto lux = g.worn_lux();

  std::vector<std::array<double, 24>> hourly;
  const std::int64_t d0 = g.start.day();
  const std::int64_t d1 = g.stamp(g.size() - 1).day();
  for (std::int64_t d = d0; d <= d1; ++d) {
    const auto day_act = calendar_day(g, act, d);
    const auto day_lux = calendar_day(g, lux, d);
    auto w = find_l5_m10(day_act, day_lux);
    if (!w) continue;
    w->day = d;
    const auto h = hourly_means(day_act);
    w->intradaily_variability = intradaily_variability(h);
    hourly.push_back(h);
    out.days.push_back(*w);
  }

  auto collect = [&](double DailyWindows::*field) {
    std::vector<double> v;
    for (const auto& d : out.days) v.push_back(d.*field);
    return v;
  };
  if (!out.days.empty()) {
    const auto l5 = circular_mean_sd(collect(&DailyWindows::l5_midpoint));
    const auto m10 = circular_mean_sd(collect(&DailyWindows::m10_midpoint));
    out.l5_midpoint = {l5.mean, l5.sd};
    out.m10_midpoint = {m10.mean, m10.sd};
  }
  out.l5_activity = stats::mean_sd(collect(&DailyWindows::l5_activity));
  out.m10_activity = stats::mean_sd(collect(&DailyWindows::m10_activity));
  out.l5_lux = stats::mean_sd(collect(&DailyWindows::l5_lux));
  out.m10_lux = stats::mean_sd(collect(&DailyWindows::m10_lux));
  out.relative_amplitude = stats::mean_sd(collect(&DailyWindows::relative_amplitude));
  out.intradaily_variability = stats::mean_sd(collect(&DailyWindows::intradaily_variability));
  out.interdaily_stability = interdaily_stability(hourly);

  auto strengths = [&](const std::optional<Spectrum>& given, std::span<const double> signal, std::array<double, 3>& dst) {
    try {
      const Spectrum s = given ? *given : compute_spectrum(signal);
      for (std::size_t k = 0; k < kSpectralPeriodsHours.size(); ++k) dst[k] = spectral_strength(s, kSpectralPeriodsHours[k]);
    } catch (const Error&) {
      // too short or unobserved: strengths stay missing
    }
  };
  strengths(mims_spectrum, act, out.mims_strength);
  strengths(lux_spectrum, lux, out.lux_strength);

  // Light exposure inside vs outside the main sleep windows.
  std::vector<std::uint8_t> in_sleep(g.size(), 0);
  std::vector<double> per_night;
  for (const auto& w : sleep) {
    const std::int64_t b = std::max<std::int64_t>(0, w.onset - g.start);
    const std::int64_t e = std::min<std::int64_t>(static_cast<std::int64_t>(g.size()), w.offset - g.start);
    std::vector<double> v;
    for (std::int64_t i = b; i < e; ++i) {
      in_sleep[static_cast<std::size_t>(i)] = 1;
      v.push_back(lux[static_cast<std::size_t>(i)]);
    }
    per_night.push_back(stats::mean(v));
  }
  out.lux_sleep = stats::mean_sd(per_night);
  std::map<std::int64_t, std::pair<double, int>> by_day;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (in_sleep[i] || is_missing(lux[i])) continue;
    auto& acc = by_day[g.stamp(i).day()];
    acc.first += lux[i];
    ++acc.second;
  }
  std::vector<double> per_day;
  for (const auto& [d, acc] : by_day) per_day.push_back(acc.first / acc.second);
  out.lux_nonsleep = stats::mean_sd(per_day);
  return out;
}

}  // namespace cogwear
