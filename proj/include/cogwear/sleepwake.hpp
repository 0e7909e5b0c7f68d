#pragma once

// Two-state Gaussian HMM sleep/wake detection and nightly sleep windows.
//
// Emissions are Gaussian on x = ln(1 + MIMS). Non-wear minutes are treated
// as unobserved (emission likelihood 1) during fitting and decode to
// SleepState::unknown. The state with the lower mean is sleep.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "cogwear/circadian.hpp"
#include "cogwear/core/error.hpp"
#include "cogwear/core/stats.hpp"
#include "cogwear/core/time.hpp"
#include "cogwear/ingest.hpp"

namespace cogwear {

struct HmmModel {
  std::array<double, 2> mean{};
  std::array<double, 2> variance{};
  std::array<std::array<double, 2>, 2> transition{};  // row-stochastic
  std::array<double, 2> initial{};
  int iterations = 0;
  double log_likelihood = 0.0;
  std::vector<double> log_likelihood_trace;  // one entry per E-step

  /// Index of the sleep (lower-mean) state.
  int sleep_state() const noexcept { return mean[0] <= mean[1] ? 0 : 1; }
};

struct HmmOptions {
  double tolerance = 1e-4;
  int max_iterations = 100;
  double variance_floor = 1e-4;
};

inline double activity_transform(double mims) { return std::log1p(mims); }

namespace detail {

inline double gaussian_log_density(double x, double mu, double var) {
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + (x - mu) * (x - mu) / var);
}

// Per-step emission likelihoods rescaled by their max; the log of the
// scale is returned in `log_scale`.
inline void emissions(const HmmModel& m, std::span<const double> x, std::span<const std::uint8_t> observed,
                      std::vector<std::array<double, 2>>& b, std::vector<double>& log_scale) {
  const std::size_t n = x.size();
  b.resize(n);
  log_scale.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (!observed[t]) {
      b[t] = {1.0, 1.0};
      log_scale[t] = 0.0;
      continue;
    }
    const double l0 = gaussian_log_density(x[t], m.mean[0], m.variance[0]);
    const double l1 = gaussian_log_density(x[t], m.mean[1], m.variance[1]);
    const double mx = std::max(l0, l1);
    b[t] = {std::exp(l0 - mx), std::exp(l1 - mx)};
    log_scale[t] = mx;
  }
}

inline HmmModel initial_model(std::span<const double> x, std::span<const std::uint8_t> observed, double floor) {
  std::vector<double> obs;
  for (std::size_t t = 0; t < x.size(); ++t)
    if (observed[t]) obs.push_back(x[t]);
  if (obs.size() < 2) throw Error("fit_hmm: no two-state structure (fewer than two observed minutes)");
  const auto [lo_it, hi_it] = std::minmax_element(obs.begin(), obs.end());
  if (*hi_it - *lo_it < 1e-12) throw Error("fit_hmm: no two-state structure (all observations identical)");
  // Median split refined by 1-D two-means, so plateaus of equal values end
  // up on the side of their nearer centre rather than wherever the median falls.
  std::vector<double> low, high;
  auto split = [&](double thr, bool inclusive) {
    low.clear();
    high.clear();
    for (double v : obs) ((inclusive ? v <= thr : v < thr) ? low : high).push_back(v);
  };
  const double med = stats::quantile(obs, 0.5);
  split(med, true);
  if (high.empty()) split(med, false);
  for (int it = 0; it < 100; ++it) {
    const double thr = 0.5 * (stats::mean(low) + stats::mean(high));
    const std::size_t before = low.size();
    split(thr, true);
    if (low.size() == before) break;
  }
  auto var_of = [&](const std::vector<double>& v) {
    if (v.size() < 2) return floor;
    const double m = stats::mean(v);
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    return std::max(floor, ss / static_cast<double>(v.size()));
  };
  HmmModel m;
  m.mean = {stats::mean(low), stats::mean(high)};
  m.variance = {var_of(low), var_of(high)};
  m.transition = {{{0.9, 0.1}, {0.1, 0.9}}};
  m.initial = {0.5, 0.5};
  return m;
}

}  // namespace detail

/// Baum-Welch EM from a given starting model. Stops when the log-likelihood
/// improves by less than `tolerance` or after `max_iterations` E-steps.
/// States are reordered at the end so that state 0 has the lower mean.
inline HmmModel fit_hmm(std::span<const double> x, std::span<const std::uint8_t> observed, HmmModel m,
                        const HmmOptions& opt = {}) {
  const std::size_t n = x.size();
  if (observed.size() != n) throw Error("fit_hmm: mask length mismatch");
  if (n == 0) throw Error("fit_hmm: empty sequence");
  std::vector<std::array<double, 2>> b, alpha(n), beta(n);
  std::vector<double> log_scale, c(n);
  m.log_likelihood_trace.clear();
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    detail::emissions(m, x, observed, b, log_scale);
    // Forward, normalized per step.
    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      std::array<double, 2> a;
      if (t == 0) {
        a = {m.initial[0] * b[0][0], m.initial[1] * b[0][1]};
      } else {
        const auto& p = alpha[t - 1];
        a[0] = (p[0] * m.transition[0][0] + p[1] * m.transition[1][0]) * b[t][0];
        a[1] = (p[0] * m.transition[0][1] + p[1] * m.transition[1][1]) * b[t][1];
      }
      c[t] = a[0] + a[1];
      if (!(c[t] > 0.0)) throw Error("fit_hmm: numerical underflow in forward pass");
      alpha[t] = {a[0] / c[t], a[1] / c[t]};
      ll += std::log(c[t]) + log_scale[t];
    }
    m.log_likelihood_trace.push_back(ll);
    m.log_likelihood = ll;
    m.iterations = iter + 1;
    if (iter > 0 && ll - prev_ll < opt.tolerance) break;
    prev_ll = ll;

    // Backward.
    beta[n - 1] = {1.0, 1.0};
    for (std::size_t t = n - 1; t-- > 0;) {
      const auto& nb = beta[t + 1];
      const double e0 = b[t + 1][0] * nb[0], e1 = b[t + 1][1] * nb[1];
      beta[t][0] = (m.transition[0][0] * e0 + m.transition[0][1] * e1) / c[t + 1];
      beta[t][1] = (m.transition[1][0] * e0 + m.transition[1][1] * e1) / c[t + 1];
    }

    // M-step accumulators.
    std::array<double, 2> g_obs{}, gx{};
    std::array<std::array<double, 2>, 2> xi{};
    for (std::size_t t = 0; t < n; ++t) {
      const double g0 = alpha[t][0] * beta[t][0];
      const double g1 = alpha[t][1] * beta[t][1];
      const double gs = g0 + g1;
      const std::array<double, 2> g{g0 / gs, g1 / gs};
      if (observed[t]) {
        for (int s = 0; s < 2; ++s) {
          g_obs[s] += g[s];
          gx[s] += g[s] * x[t];
        }
      }
      if (t + 1 < n) {
        const auto& nb = beta[t + 1];
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            xi[i][j] += alpha[t][i] * m.transition[i][j] * b[t + 1][j] * nb[j] / c[t + 1];
      }
      if (t == 0) m.initial = g;
    }
    for (int s = 0; s < 2; ++s) {
      if (g_obs[s] > 0.0) {
        const double mu = gx[s] / g_obs[s];
        double var = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          if (!observed[t]) continue;
          const double g = alpha[t][s] * beta[t][s] / (alpha[t][0] * beta[t][0] + alpha[t][1] * beta[t][1]);
          var += g * (x[t] - mu) * (x[t] - mu);
        }
        m.mean[s] = mu;
        m.variance[s] = std::max(opt.variance_floor, var / g_obs[s]);
      }
      const double row = xi[s][0] + xi[s][1];
      if (row > 0.0) {
        m.transition[s][0] = xi[s][0] / row;
        m.transition[s][1] = 1.0 - m.transition[s][0];
      }
    }
  }

  if (m.mean[0] > m.mean[1]) {
    std::swap(m.mean[0], m.mean[1]);
    std::swap(m.variance[0], m.variance[1]);
    std::swap(m.initial[0], m.initial[1]);
    m.transition = {{{m.transition[1][1], m.transition[1][0]}, {m.transition[0][1], m.transition[0][0]}}};
  }
  return m;
}

/// Fits from the median-split initialization.
inline HmmModel fit_hmm(std::span<const double> x, std::span<const std::uint8_t> observed, const HmmOptions& opt = {}) {
  return fit_hmm(x, observed, detail::initial_model(x, observed, opt.variance_floor), opt);
}

inline HmmModel fit_hmm(const MinuteGrid& g, const HmmOptions& opt = {}) {
  std::vector<double> x(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.wear[i]) x[i] = activity_transform(g.mims[i]);
  return fit_hmm(x, g.wear, opt);
}

enum class SleepState : std::uint8_t { sleep, wake, unknown };

inline const char* to_string(SleepState s) {
  switch (s) {
    case SleepState::sleep: return "sleep";
    case SleepState::wake: return "wake";
    case SleepState::unknown: return "unknown";
  }
  return "unknown";
}

/// Viterbi path over hidden states (indices 0/1), unobserved steps included.
inline std::vector<int> viterbi_path(const HmmModel& m, std::span<const double> x, std::span<const std::uint8_t> observed) {
  const std::size_t n = x.size();
  std::vector<int> path(n, 0);
  if (n == 0) return path;
  std::vector<std::array<std::uint8_t, 2>> back(n);
  const std::array<std::array<double, 2>, 2> lt{{{std::log(m.transition[0][0]), std::log(m.transition[0][1])},
                                                 {std::log(m.transition[1][0]), std::log(m.transition[1][1])}}};
  auto emit = [&](std::size_t t, int s) {
    return observed[t] ? detail::gaussian_log_density(x[t], m.mean[s], m.variance[s]) : 0.0;
  };
  std::array<double, 2> delta{std::log(m.initial[0]) + emit(0, 0), std::log(m.initial[1]) + emit(0, 1)};
  for (std::size_t t = 1; t < n; ++t) {
    std::array<double, 2> next;
    for (int j = 0; j < 2; ++j) {
      const double from0 = delta[0] + lt[0][j];
      const double from1 = delta[1] + lt[1][j];
      const int arg = from1 > from0 ? 1 : 0;
      back[t][j] = static_cast<std::uint8_t>(arg);
      next[j] = (arg ? from1 : from0) + emit(t, j);
    }
    delta = next;
  }
  path[n - 1] = delta[1] > delta[0] ? 1 : 0;
  for (std::size_t t = n - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return path;
}

/// Joint log-likelihood of (path, observations) under the model.
inline double path_log_likelihood(const HmmModel& m, std::span<const double> x, std::span<const std::uint8_t> observed,
                                  std::span<const int> path) {
  double ll = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const int s = path[t];
    ll += t == 0 ? std::log(m.initial[s]) : std::log(m.transition[path[t - 1]][s]);
    if (observed[t]) ll += detail::gaussian_log_density(x[t], m.mean[s], m.variance[s]);
  }
  return ll;
}

inline std::vector<SleepState> decode_states(const HmmModel& m, std::span<const double> x,
                                             std::span<const std::uint8_t> observed) {
  const auto path = viterbi_path(m, x, observed);
  const int sleep = m.sleep_state();
  std::vector<SleepState> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t)
    out[t] = !observed[t] ? SleepState::unknown : (path[t] == sleep ? SleepState::sleep : SleepState::wake);
  return out;
}

inline std::vector<SleepState> decode_states(const HmmModel& m, const MinuteGrid& g) {
  std::vector<double> x(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.wear[i]) x[i] = activity_transform(g.mims[i]);
  return decode_states(m, x, g.wear);
}

// ---------------------------------------------------------------------------
// Sleep windows

inline constexpr int kSleepGapMergeMinutes = 60;
inline constexpr int kMinMainSleepMinutes = 180;

struct SleepWindow {
  std::int64_t night = 0;  // calendar day on which the noon-to-noon night begins
  MinuteStamp onset;       // first sleep minute
  MinuteStamp offset;      // minute after the last sleep minute
  int minutes_asleep = 0;
  int window_minutes = 0;
};

/// Main sleep window per noon-to-noon night: sleep runs separated by at most
/// 60 non-sleep minutes are merged, the longest merged window is kept (earliest
/// on ties) if it spans at least 180 minutes. Windows touching either end of
/// the recording are truncated and dropped.
inline std::vector<SleepWindow> extract_sleep_windows(std::span<const SleepState> states, MinuteStamp start) {
  std::vector<SleepWindow> out;
  const std::size_t n = states.size();
  std::size_t i = 0;
  while (i < n) {
    const std::int64_t night = floor_div((start + static_cast<std::int64_t>(i)).minutes - 720, kMinutesPerDay);
    std::size_t end = i;
    while (end < n && floor_div((start + static_cast<std::int64_t>(end)).minutes - 720, kMinutesPerDay) == night) ++end;

    std::size_t best_begin = 0, best_end = 0;  // [begin, end) in indices
    std::size_t t = i;
    while (t < end) {
      if (states[t] != SleepState::sleep) {
        ++t;
        continue;
      }
      const std::size_t run_begin = t;
      std::size_t run_end = t;
      while (true) {
        while (run_end < end && states[run_end] == SleepState::sleep) ++run_end;
        std::size_t gap = run_end;
        while (gap < end && states[gap] != SleepState::sleep) ++gap;
        if (gap < end && gap - run_end <= static_cast<std::size_t>(kSleepGapMergeMinutes)) {
          run_end = gap;
          continue;
        }
        break;
      }
      if (run_end - run_begin > best_end - best_begin) {
        best_begin = run_begin;
        best_end = run_end;
      }
      t = run_end;
    }
    const std::size_t len = best_end - best_begin;
    if (len >= static_cast<std::size_t>(kMinMainSleepMinutes) && best_begin > 0 && best_end < n) {
      SleepWindow w;
      w.night = night;
      w.onset = start + static_cast<std::int64_t>(best_begin);
      w.offset = start + static_cast<std::int64_t>(best_end);
      w.window_minutes = static_cast<int>(len);
      w.minutes_asleep = static_cast<int>(std::count(states.begin() + static_cast<std::ptrdiff_t>(best_begin),
                                                     states.begin() + static_cast<std::ptrdiff_t>(best_end), SleepState::sleep));
      out.push_back(w);
    }
    i = end;
  }
  return out;
}

struct SleepMetrics {
  double onset_mean = kMissing;  // circular, clock hours
  double onset_sd = kMissing;
  double offset_mean = kMissing;
  double offset_sd = kMissing;
  double duration_mean = kMissing;  // hours
  double duration_sd = kMissing;
  double efficiency_mean = kMissing;
  double efficiency_sd = kMissing;
};

/// Per-participant aggregates; every field is missing when there are no windows.
inline SleepMetrics sleep_metrics(std::span<const SleepWindow> windows) {
  SleepMetrics m;
  if (windows.empty()) return m;
  std::vector<double> onset, offset, dur, eff;
  for (const auto& w : windows) {
    onset.push_back(w.onset.clock_hour());
    offset.push_back(w.offset.clock_hour());
    dur.push_back(w.minutes_asleep / 60.0);
    eff.push_back(static_cast<double>(w.minutes_asleep) / w.window_minutes);
  }
  const auto on = circular_mean_sd(onset);
  const auto off = circular_mean_sd(offset);
  m.onset_mean = on.mean;
  m.onset_sd = on.sd;
  m.offset_mean = off.mean;
  m.offset_sd = off.sd;
  m.duration_mean = stats::mean(dur);
  m.duration_sd = stats::sd(dur);
  m.efficiency_mean = stats::mean(eff);
  m.efficiency_sd = stats::sd(eff);
  return m;
}

}  // namespace cogwear
