#pragma once

// Circular statistics and nonparametric circadian rhythm metrics.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "cogwear/core/error.hpp"
#include "cogwear/core/fft.hpp"
#include "cogwear/core/stats.hpp"
#include "cogwear/core/time.hpp"

namespace cogwear {

// ---------------------------------------------------------------------------
// Circular statistics on clock hours

inline constexpr double kHoursPerRadian = 24.0 / (2.0 * std::numbers::pi);

/// Resultant length below which the mean direction is undefined.
inline constexpr double kDegenerateResultant = 1e-12;

/// Circular SD reported for a sample whose resultant vanishes.
inline const double kCircularSdSentinel = kHoursPerRadian * std::sqrt(-2.0 * std::log(kDegenerateResultant));

struct CircularStats {
  double mean = kMissing;  // hours in [0, 24)
  double sd = kMissing;    // hours
};

/// Circular mean and SD of clock hours. Missing values are ignored; an
/// empty sample throws.
inline CircularStats circular_mean_sd(std::span<const double> hours) {
  double s = 0.0, c = 0.0;
  std::size_t n = 0;
  for (double h : hours) {
    if (is_missing(h)) continue;
    const double th = h / kHoursPerRadian;
    s += std::sin(th);
    c += std::cos(th);
    ++n;
  }
  if (n == 0) throw Error("circular_mean_sd: empty sample");
  const double r = std::hypot(s, c) / static_cast<double>(n);
  if (r < kDegenerateResultant) return {kMissing, kCircularSdSentinel};
  const double mu = std::atan2(s, c);
  // 1 - R evaluated from angular deviations about the mean direction; this
  // stays exact for identical values where 1 - hypot() would not.
  double one_minus_r = 0.0;
  for (double h : hours) {
    if (is_missing(h)) continue;
    const double half = std::sin((h / kHoursPerRadian - mu) / 2.0);
    one_minus_r += 2.0 * half * half;
  }
  one_minus_r /= static_cast<double>(n);
  const double sd = kHoursPerRadian * std::sqrt(std::max(0.0, -2.0 * std::log1p(-one_minus_r)));
  double mean = mu * kHoursPerRadian;
  if (mean < 0.0) mean += 24.0;
  if (mean >= 24.0) mean -= 24.0;
  return {mean, sd};
}

// ---------------------------------------------------------------------------
// L5 / M10

inline constexpr int kL5Minutes = 300;
inline constexpr int kM10Minutes = 600;
inline constexpr double kDayCoverage = 0.8;

struct DailyWindows {
  std::int64_t day = 0;  // calendar day number
  double l5_midpoint = kMissing;
  double l5_activity = kMissing;
  double l5_lux = kMissing;
  double m10_midpoint = kMissing;
  double m10_activity = kMissing;
  double m10_lux = kMissing;
  double relative_amplitude = kMissing;
  double intradaily_variability = kMissing;
};

namespace detail {

struct WindowHit {
  int start = -1;
  double score = 0.0;
};

// Slides a `len`-minute window over one day; score = mean of observed
// minutes. Earliest start wins ties.
inline std::pair<WindowHit, WindowHit> min_max_window(std::span<const double> day, int len) {
  const int n = static_cast<int>(day.size());
  std::vector<double> sum(n + 1, 0.0);
  std::vector<int> cnt(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    const bool ok = !is_missing(day[i]);
    sum[i + 1] = sum[i] + (ok ? day[i] : 0.0);
    cnt[i + 1] = cnt[i] + (ok ? 1 : 0);
  }
  WindowHit lo, hi;
  for (int s = 0; s + len <= n; ++s) {
    const int k = cnt[s + len] - cnt[s];
    if (k == 0) continue;
    const double score = (sum[s + len] - sum[s]) / k;
    if (lo.start < 0 || score < lo.score) lo = {s, score};
    if (hi.start < 0 || score > hi.score) hi = {s, score};
  }
  return {lo, hi};
}

inline double window_mean(std::span<const double> v, int start, int len) {
  return stats::mean(v.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(len)));
}

}  // namespace detail

/// L5/M10 for one calendar day of 1440 minutes (missing = NaN). Windows are
/// confined to the day. Returns nullopt when fewer than 80% of minutes are
/// observed. `lux` may be empty.
inline std::optional<DailyWindows> find_l5_m10(std::span<const double> activity, std::span<const double> lux = {}) {
  if (activity.size() != static_cast<std::size_t>(kMinutesPerDay)) throw Error("find_l5_m10: expected 1440 minutes");
  const auto observed = std::count_if(activity.begin(), activity.end(), [](double v) { return !is_missing(v); });
  if (static_cast<double>(observed) < kDayCoverage * static_cast<double>(kMinutesPerDay)) return std::nullopt;

  DailyWindows w;
  const auto [l5, l5_hi] = detail::min_max_window(activity, kL5Minutes);
  const auto [m10_lo, m10] = detail::min_max_window(activity, kM10Minutes);
  w.l5_midpoint = (l5.start + kL5Minutes / 2.0) / 60.0;
  w.l5_activity = l5.score;
  w.m10_midpoint = (m10.start + kM10Minutes / 2.0) / 60.0;
  w.m10_activity = m10.score;
  if (!lux.empty()) {
    w.l5_lux = detail::window_mean(lux, l5.start, kL5Minutes);
    w.m10_lux = detail::window_mean(lux, m10.start, kM10Minutes);
  }
  const double denom = w.m10_activity + w.l5_activity;
  if (denom > 0.0) w.relative_amplitude = (w.m10_activity - w.l5_activity) / denom;
  return w;
}

// ---------------------------------------------------------------------------
// IV / IS

inline constexpr int kMinMinutesPerHour = 30;

/// Hourly means of one day's minutes; an hour with < 30 observed minutes is missing.
inline std::array<double, 24> hourly_means(std::span<const double> day) {
  if (day.size() != static_cast<std::size_t>(kMinutesPerDay)) throw Error("hourly_means: expected 1440 minutes");
  std::array<double, 24> out;
  for (std::size_t h = 0; h < 24; ++h) {
    double s = 0.0;
    int n = 0;
    for (std::size_t m = h * 60; m < (h + 1) * 60; ++m) {
      if (is_missing(day[m])) continue;
      s += day[m];
      ++n;
    }
    out[h] = n >= kMinMinutesPerHour ? s / n : kMissing;
  }
  return out;
}

/// IV over the observed hourly means of one day (missing hours are dropped).
/// Missing for fewer than two hours or zero variance.
inline double intradaily_variability(std::span<const double> hourly) {
  const auto x = stats::observed(hourly);
  const std::size_t n = x.size();
  if (n < 2) return kMissing;
  const double m = stats::mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < n; ++i) num += (x[i] - x[i - 1]) * (x[i] - x[i - 1]);
  for (double v : x) den += (v - m) * (v - m);
  if (den <= 0.0) return kMissing;
  return (static_cast<double>(n) * num) / (static_cast<double>(n - 1) * den);
}

/// IS over a D x 24 set of hourly means. Missing hours are skipped. Missing
/// for fewer than three days or zero total variance.
inline double interdaily_stability(std::span<const std::array<double, 24>> days) {
  if (days.size() < 3) return kMissing;
  double total = 0.0;
  std::size_t n = 0;
  std::array<double, 24> hour_sum{};
  std::array<int, 24> hour_n{};
  for (const auto& d : days)
    for (std::size_t h = 0; h < 24; ++h) {
      if (is_missing(d[h])) continue;
      total += d[h];
      ++n;
      hour_sum[h] += d[h];
      ++hour_n[h];
    }
  if (n == 0) return kMissing;
  const double grand = total / static_cast<double>(n);
  double ss_total = 0.0;
  for (const auto& d : days)
    for (double v : d)
      if (!is_missing(v)) ss_total += (v - grand) * (v - grand);
  if (ss_total <= 0.0) return kMissing;
  double ss_hour = 0.0;
  int hours = 0;
  for (std::size_t h = 0; h < 24; ++h) {
    if (hour_n[h] == 0) continue;
    const double dev = hour_sum[h] / hour_n[h] - grand;
    ss_hour += dev * dev;
    ++hours;
  }
  return (static_cast<double>(n) * ss_hour) / (static_cast<double>(hours) * ss_total);
}

// ---------------------------------------------------------------------------
// Spectra

/// Linearly interpolates missing values; leading and trailing gaps take the
/// nearest observed value. Throws when nothing is observed.
inline std::vector<double> interpolate_gaps(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  const std::size_t n = out.size();
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_missing(out[i])) {
      first = i;
      break;
    }
  if (first == n) throw Error("interpolate_gaps: no observed values");
  for (std::size_t i = 0; i < first; ++i) out[i] = out[first];
  std::size_t prev = first;
  for (std::size_t i = first + 1; i < n; ++i) {
    if (is_missing(out[i])) continue;
    if (i > prev + 1) {
      const double a = out[prev], b = out[i];
      const double len = static_cast<double>(i - prev);
      for (std::size_t k = prev + 1; k < i; ++k) out[k] = a + (b - a) * static_cast<double>(k - prev) / len;
    }
    prev = i;
  }
  for (std::size_t i = prev + 1; i < n; ++i) out[i] = out[prev];
  return out;
}

/// Single-sided amplitude spectrum of a per-minute signal after gap
/// interpolation and mean removal: amplitude[k] = 2 |X_k| / N, k = 0..N/2.
struct Spectrum {
  std::size_t length = 0;  // N, minutes
  std::vector<double> amplitude;

  /// Frequency of bin k in cycles per day.
  double cycles_per_day(std::size_t k) const {
    return static_cast<double>(k) * static_cast<double>(kMinutesPerDay) / static_cast<double>(length);
  }
};

inline Spectrum compute_spectrum(std::span<const double> minutes) {
  auto x = interpolate_gaps(minutes);
  const double m = stats::mean(x);
  for (double& v : x) v -= m;
  const auto bins = real_dft(x);
  Spectrum s;
  s.length = x.size();
  s.amplitude.resize(bins.size());
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < bins.size(); ++k) s.amplitude[k] = 2.0 * std::abs(bins[k]) / n;
  return s;
}

/// Amplitude at the bin nearest to 1/period (lower bin on an exact tie).
inline double spectral_strength(const Spectrum& s, double period_hours) {
  const double period_minutes = period_hours * 60.0;
  if (static_cast<double>(s.length) < period_minutes) throw Error("spectral_strength: series shorter than one period");
  const double exact = static_cast<double>(s.length) / period_minutes;
  auto k = static_cast<std::size_t>(std::floor(exact));
  if (exact - static_cast<double>(k) > 0.5) ++k;
  k = std::min(k, s.amplitude.size() - 1);
  return s.amplitude[k];
}

inline double spectral_strength(std::span<const double> minutes, double period_hours) {
  return spectral_strength(compute_spectrum(minutes), period_hours);
}

inline constexpr std::array<double, 3> kSpectralPeriodsHours{24.0, 12.0, 8.0};

}  // namespace cogwear
