#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cogwear/circadian.hpp"
#include "cogwear/circadian_summary.hpp"
#include "cogwear/core/random.hpp"
#include "support/oracles.hpp"

using namespace cogwear;

namespace {
double circ_dist(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 24.0);
  return std::min(d, 24.0 - d);
}
}  // namespace

TEST(CircularMeanSd, SymmetricAcrossMidnight) {
  std::vector<double> v{23.0, 1.0};
  auto s = circular_mean_sd(v);
  EXPECT_LT(circ_dist(s.mean, 0.0), 1e-12);
  EXPECT_GT(s.sd, 0.0);
}

TEST(CircularMeanSd, IdenticalValues) {
  std::vector<double> v{6.0, 6.0, 6.0};
  auto s = circular_mean_sd(v);
  EXPECT_NEAR(s.mean, 6.0, 1e-12);
  EXPECT_EQ(s.sd, 0.0);
}

TEST(CircularMeanSd, AntipodalValuesHaveNoMean) {
  std::vector<double> v{0.0, 12.0};
  auto s = circular_mean_sd(v);
  EXPECT_TRUE(is_missing(s.mean));
  EXPECT_DOUBLE_EQ(s.sd, kCircularSdSentinel);
}

TEST(CircularMeanSd, EmptyThrows) { EXPECT_THROW(circular_mean_sd(std::vector<double>{}), Error); }

TEST(CircularMeanSd, ShiftEquivariance) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v;
    const int n = static_cast<int>(rng.uniform_int(2, 12));
    const double centre = rng.uniform(0, 24);
    for (int i = 0; i < n; ++i) v.push_back(std::fmod(centre + rng.normal(0, 2.5) + 48.0, 24.0));
    const double delta = rng.uniform(-30, 30);
    std::vector<double> shifted;
    for (double h : v) shifted.push_back(std::fmod(std::fmod(h + delta, 24.0) + 24.0, 24.0));
    const auto a = circular_mean_sd(v);
    const auto b = circular_mean_sd(shifted);
    EXPECT_LT(circ_dist(a.mean + delta, b.mean), 1e-9);
    EXPECT_NEAR(a.sd, b.sd, 1e-9);
  }
}

namespace {
std::vector<double> rectangle_day(double on, int from_min, int to_min, double off = 0.0) {
  std::vector<double> d(1440, off);
  for (int m = from_min; m < to_min; ++m) d[m] = on;
  return d;
}
}  // namespace

TEST(FindL5M10, RectangularProfileM10) {
  auto day = rectangle_day(100.0, 8 * 60, 18 * 60);
  auto w = find_l5_m10(day);
  ASSERT_TRUE(w);
  EXPECT_DOUBLE_EQ(w->m10_midpoint, 13.0);
  EXPECT_DOUBLE_EQ(w->m10_activity, 100.0);
}

TEST(FindL5M10, TiedL5TakesEarliestStartWithinCalendarDay) {
  // All-zero stretches 00:00-08:00 and 18:00-24:00 tie; windows do not wrap,
  // so the earliest all-zero window starts at midnight.
  auto day = rectangle_day(100.0, 8 * 60, 18 * 60);
  auto w = find_l5_m10(day);
  ASSERT_TRUE(w);
  EXPECT_DOUBLE_EQ(w->l5_midpoint, 2.5);
  EXPECT_DOUBLE_EQ(w->l5_activity, 0.0);
  EXPECT_DOUBLE_EQ(w->relative_amplitude, 1.0);
}

TEST(FindL5M10, ConstantActivityHasZeroRa) {
  std::vector<double> day(1440, 42.0);
  auto w = find_l5_m10(day);
  ASSERT_TRUE(w);
  EXPECT_DOUBLE_EQ(w->relative_amplitude, 0.0);
}

TEST(FindL5M10, LowCoverageDaySkipped) {
  std::vector<double> day(1440, 5.0);
  for (int m = 0; m < 288; ++m) day[m] = kMissing;  // 1152 observed = 80%
  EXPECT_TRUE(find_l5_m10(day));
  day[288] = kMissing;
  EXPECT_FALSE(find_l5_m10(day));
}

TEST(FindL5M10, ScalingByPowerOfTwo) {
  Rng rng(5);
  std::vector<double> day(1440);
  for (auto& v : day) v = rng.uniform(0, 50);
  const auto a = *find_l5_m10(day);
  for (double c : {0.5, 2.0, 8.0}) {
    std::vector<double> scaled;
    for (double v : day) scaled.push_back(c * v);
    const auto b = *find_l5_m10(scaled);
    EXPECT_EQ(a.l5_midpoint, b.l5_midpoint);
    EXPECT_EQ(a.m10_midpoint, b.m10_midpoint);
    EXPECT_DOUBLE_EQ(c * a.l5_activity, b.l5_activity);
    EXPECT_DOUBLE_EQ(c * a.m10_activity, b.m10_activity);
    EXPECT_DOUBLE_EQ(a.relative_amplitude, b.relative_amplitude);
  }
}

TEST(FindL5M10, RaWithinUnitIntervalForNonnegativeActivity) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> day(1440);
    for (auto& v : day) v = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0, 100);
    const auto w = *find_l5_m10(day);
    EXPECT_GE(w.relative_amplitude, 0.0);
    EXPECT_LE(w.relative_amplitude, 1.0);
  }
}

TEST(IntradailyVariability, AlternatingHoursGiveExactlyFour) {
  std::vector<double> h(24);
  for (int i = 0; i < 24; ++i) h[i] = i % 2 == 0 ? 1.0 : 3.0;
  EXPECT_EQ(intradaily_variability(h), 4.0);
}

TEST(IntradailyVariability, SingleCycleCosine) {
  std::vector<double> h(24);
  for (int i = 0; i < 24; ++i) h[i] = std::cos(2.0 * std::numbers::pi * i / 24.0);
  // Brute-force evaluation of the ratio.
  double num = 0.0, den = 0.0, mean = 0.0;
  for (double v : h) mean += v / 24.0;
  for (int i = 1; i < 24; ++i) num += (h[i] - h[i - 1]) * (h[i] - h[i - 1]);
  for (double v : h) den += (v - mean) * (v - mean);
  const double brute = 24.0 * num / (23.0 * den);
  const double approx = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / 24.0));
  EXPECT_NEAR(intradaily_variability(h), brute, 1e-12);
  EXPECT_NEAR(intradaily_variability(h), approx, 1e-2);
}

TEST(IntradailyVariability, ConstantDayMissing) {
  std::vector<double> h(24, 3.0);
  EXPECT_TRUE(is_missing(intradaily_variability(h)));
}

TEST(InterdailyStability, RepeatedProfileIsOne) {
  std::array<double, 24> prof;
  for (int i = 0; i < 24; ++i) prof[i] = 10.0 + 5.0 * std::sin(i * 0.7) + (i % 5);
  std::vector<std::array<double, 24>> days(7, prof);
  EXPECT_NEAR(interdaily_stability(days), 1.0, 1e-9);
}

TEST(InterdailyStability, IidNoiseNearOneOverDays) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<std::array<double, 24>> days(50);
    for (auto& d : days)
      for (auto& v : d) v = rng.normal();
    EXPECT_NEAR(interdaily_stability(days), 1.0 / 50.0, 0.05);
  }
}

TEST(InterdailyStability, MixedDaysStrictlyBetween) {
  std::array<double, 24> flat, wave;
  for (int i = 0; i < 24; ++i) {
    flat[i] = 5.0;
    wave[i] = 5.0 + 3.0 * std::sin(2.0 * std::numbers::pi * i / 24.0);
  }
  std::vector<std::array<double, 24>> days{flat, wave, flat};
  const double is = interdaily_stability(days);
  EXPECT_GT(is, 0.0);
  EXPECT_LT(is, 1.0);
}

TEST(InterdailyStability, NeedsThreeDays) {
  std::vector<std::array<double, 24>> days(2);
  EXPECT_TRUE(is_missing(interdaily_stability(days)));
}

namespace {
std::vector<double> sinusoid(double amp, double period_min, int days, double offset = 0.0) {
  std::vector<double> x(static_cast<std::size_t>(days) * 1440);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = offset + amp * std::sin(2.0 * std::numbers::pi * t / period_min);
  return x;
}
}  // namespace

TEST(SpectralStrength, PureDailySinusoid) {
  const double a = 37.5;
  auto x = sinusoid(a, 1440.0, 6, 50.0);
  EXPECT_NEAR(spectral_strength(x, 24.0), a, 0.01 * a);
  EXPECT_LT(spectral_strength(x, 12.0), 0.01 * a);
  EXPECT_LT(spectral_strength(x, 8.0), 0.01 * a);
}

TEST(SpectralStrength, ZeroSignal) {
  std::vector<double> x(6 * 1440, 0.0);
  for (double p : kSpectralPeriodsHours) EXPECT_EQ(spectral_strength(x, p), 0.0);
}

TEST(SpectralStrength, ShorterThanOnePeriodThrows) {
  std::vector<double> x(1000, 1.0);
  EXPECT_THROW(spectral_strength(x, 24.0), Error);
}

TEST(SpectralStrength, MatchesDirectCorrelation) {
  Rng rng(21);
  std::vector<double> x(4 * 1440 + 37);
  for (std::size_t t = 0; t < x.size(); ++t)
    x[t] = 20 + 10 * std::sin(2 * std::numbers::pi * t / 1440.0) + 4 * std::cos(2 * std::numbers::pi * t / 480.0) + rng.normal(0, 3);
  std::vector<double> centred = x;
  double m = 0;
  for (double v : x) m += v / static_cast<double>(x.size());
  for (double& v : centred) v -= m;
  for (double period : kSpectralPeriodsHours) {
    const double exact = static_cast<double>(x.size()) / (period * 60.0);
    const auto k = static_cast<std::size_t>(std::llround(exact));
    EXPECT_NEAR(spectral_strength(x, period), oracle::dft_amplitude(centred, k), 1e-6);
  }
}

TEST(SpectralStrength, ScalesLinearly) {
  Rng rng(2);
  std::vector<double> x(5 * 1440);
  for (auto& v : x) v = rng.uniform(0, 30);
  for (double c : {0.25, 3.0}) {
    std::vector<double> y;
    for (double v : x) y.push_back(c * v);
    for (double p : kSpectralPeriodsHours) EXPECT_NEAR(spectral_strength(y, p), c * spectral_strength(x, p), 1e-9 * c);
  }
}

TEST(InterpolateGaps, LinearAndEdgeFill) {
  std::vector<double> x{kMissing, 1.0, kMissing, kMissing, 4.0, kMissing};
  auto y = interpolate_gaps(x);
  EXPECT_EQ(y, (std::vector<double>{1, 1, 2, 3, 4, 4}));
}

namespace {
MinuteGrid grid_from_days(const std::vector<std::vector<double>>& days, MinuteStamp start) {
  MinuteGrid g;
  g.start = start;
  for (const auto& d : days)
    for (double v : d) {
      g.mims.push_back(v);
      g.lux.push_back(v * 10);
      g.wear.push_back(1);
    }
  return g;
}
}  // namespace

TEST(CircadianSummary, ConstantDailyWindows) {
  std::vector<double> day(1440, 50.0);
  for (int m = 30; m < 330; ++m) day[m] = 20.0;
  for (int m = 480; m < 1080; ++m) day[m] = 100.0;
  const auto g = grid_from_days(std::vector<std::vector<double>>(5, day), MinuteStamp::from_civil(2012, 1, 2));
  const auto s = circadian_summary(g, {});
  ASSERT_EQ(s.days.size(), 5u);
  EXPECT_NEAR(s.relative_amplitude.mean, 80.0 / 120.0, 1e-12);
  EXPECT_NEAR(s.relative_amplitude.sd, 0.0, 1e-12);
  EXPECT_NEAR(s.l5_midpoint.mean, 3.0, 1e-12);
  EXPECT_EQ(s.l5_midpoint.sd, 0.0);
  EXPECT_NEAR(s.m10_midpoint.mean, 13.0, 1e-12);
  EXPECT_NEAR(s.l5_lux.mean, 200.0, 1e-9);
  EXPECT_NEAR(s.interdaily_stability, 1.0, 1e-9);
  EXPECT_GT(s.mims_strength[0], 0.0);
}

TEST(CircadianSummary, LuxInsideAndOutsideSleep) {
  std::vector<double> day(1440, 10.0);
  const auto start = MinuteStamp::from_civil(2012, 1, 2);
  auto g = grid_from_days(std::vector<std::vector<double>>(3, day), start);
  for (std::size_t i = 0; i < g.size(); ++i) g.lux[i] = (i % 1440) < 360 ? 1.0 : 300.0;
  std::vector<SleepWindow> w{{0, start + 1440, start + 1440 + 360, 360, 360}};
  const auto s = circadian_summary(g, w);
  EXPECT_DOUBLE_EQ(s.lux_sleep.mean, 1.0);
  EXPECT_TRUE(is_missing(s.lux_sleep.sd));
  ASSERT_FALSE(is_missing(s.lux_nonsleep.mean));
  EXPECT_GT(s.lux_nonsleep.mean, 200.0);
}
