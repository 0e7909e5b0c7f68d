// Acceptance suite. Prints one PASS / FAIL / SKIP line per criterion and
// exits nonzero when any criterion fails.
//
// Environment:
//   COGWEAR_ACCEPT_FULL=1    paper-scale budgets (200 trials, 20 repeats) in
//                            criteria 4 and 5 instead of the reduced desk budgets
//   COGWEAR_NHANES_DIR=dir   enables criterion 6; dir holds epochs.csv and
//                            survey.csv produced by the NHANES adapter

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cogwear/cogwear.hpp"
#include "support/oracles.hpp"

using namespace cogwear;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

/// Collects failed checks; the first few messages go into the detail line.
struct Checks {
  int failed = 0;
  int total = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (!ok) {
      ++failed;
      if (notes.size() < 5) notes.push_back(what);
    }
  }

  Outcome outcome(std::string summary) const {
    if (failed == 0) return {Status::pass, summary + " (" + std::to_string(total) + " checks)"};
    std::string d = summary + "; " + std::to_string(failed) + "/" + std::to_string(total) + " checks failed:";
    for (const auto& n : notes) d += " [" + n + "]";
    return {Status::fail, d};
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool full_budget() {
  const char* v = std::getenv("COGWEAR_ACCEPT_FULL");
  return v && std::string(v) == "1";
}

double circ_dist(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 24.0);
  return std::min(d, 24.0 - d);
}

// ---------------------------------------------------------------------------
// 1. Circadian properties

Outcome circadian_suite() {
  const auto t0 = Clock::now();
  Checks c;
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v, shifted;
    const int n = static_cast<int>(rng.uniform_int(2, 15));
    const double centre = rng.uniform(0, 24);
    for (int i = 0; i < n; ++i) v.push_back(std::fmod(centre + rng.normal(0, 2.0) + 48.0, 24.0));
    const double delta = rng.uniform(-48, 48);
    for (double h : v) shifted.push_back(std::fmod(std::fmod(h + delta, 24.0) + 24.0, 24.0));
    const auto a = circular_mean_sd(v);
    const auto b = circular_mean_sd(shifted);
    c.expect(circ_dist(a.mean + delta, b.mean) < 1e-9 && std::fabs(a.sd - b.sd) < 1e-9, "circular shift invariance");
  }

  std::vector<double> alternating(24);
  for (int i = 0; i < 24; ++i) alternating[static_cast<std::size_t>(i)] = i % 2 ? 3.0 : 1.0;
  c.expect(intradaily_variability(alternating) == 4.0, "IV alternating = 4");

  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 24> prof;
    for (auto& v : prof) v = rng.uniform(0, 100);
    std::vector<std::array<double, 24>> days(static_cast<std::size_t>(3 + trial % 6), prof);
    c.expect(std::fabs(interdaily_stability(days) - 1.0) < 1e-9, "IS repeated = 1");
  }

  // RA = (M10 - L5) / (M10 + L5) on rectangular days.
  for (auto [hi, lo] : std::vector<std::pair<double, double>>{{100, 0}, {60, 20}, {30, 30}, {7, 1}}) {
    std::vector<double> day(1440, lo);
    for (int m = 8 * 60; m < 18 * 60; ++m) day[static_cast<std::size_t>(m)] = hi;
    const auto w = find_l5_m10(day);
    const double want = hi + lo > 0 ? (hi - lo) / (hi + lo) : 0.0;
    c.expect(w && std::fabs(w->relative_amplitude - want) < 1e-12 && (hi == lo || w->m10_midpoint == 13.0), "RA arithmetic");
  }

  for (double amp : {1.0, 12.5, 80.0})
    for (double period : kSpectralPeriodsHours) {
      std::vector<double> x(7 * 1440);
      for (std::size_t t = 0; t < x.size(); ++t) x[t] = 100 + amp * std::sin(2 * std::numbers::pi * t / (period * 60.0) + 0.3);
      c.expect(std::fabs(spectral_strength(x, period) - amp) <= 0.01 * amp, "sinusoid strength within 1%");
    }

  const double secs = seconds_since(t0);
  c.expect(secs < 10.0, "runtime < 10 s");
  return c.outcome(fmt("%.2f s", secs));
}

// ---------------------------------------------------------------------------
// 2. HMM

Outcome hmm_suite() {
  const auto t0 = Clock::now();
  Checks c;
  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // Means 2.5 SD apart, sticky two-state chain.
    Rng rng(mix_seed(0x686d6d, seed));
    const double sigma = 0.4, mu0 = 0.5, mu1 = mu0 + 2.5 * sigma;
    std::vector<double> x;
    std::vector<std::uint8_t> obs;
    std::vector<int> truth;
    int s = 0;
    for (int t = 0; t < 5000; ++t) {
      if (t > 0 && !rng.bernoulli(0.98)) s = 1 - s;
      truth.push_back(s);
      x.push_back(rng.normal(s ? mu1 : mu0, sigma));
      obs.push_back(1);
    }
    const auto m = fit_hmm(x, obs);
    bool monotone = true;
    for (std::size_t i = 1; i < m.log_likelihood_trace.size(); ++i)
      monotone &= m.log_likelihood_trace[i] >= m.log_likelihood_trace[i - 1] - 1e-8;
    c.expect(monotone, "EM log-likelihood monotone, seed " + std::to_string(seed));
    const auto states = decode_states(m, x, obs);
    std::size_t agree = 0;
    for (std::size_t t = 0; t < states.size(); ++t) agree += (states[t] == SleepState::sleep) == (truth[t] == 0);
    const double acc = static_cast<double>(agree) / static_cast<double>(states.size());
    worst = std::min(worst, acc);
    c.expect(acc >= 0.95, "decode accuracy >= 95%, seed " + std::to_string(seed));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime < 60 s");
  return c.outcome("worst decode accuracy " + fmt("%.4f", worst) + ", " + fmt("%.1f s", secs));
}

// ---------------------------------------------------------------------------
// 3. Learners

FeatureMatrix numeric_matrix(const std::vector<std::vector<double>>& rows, const std::string& prefix) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back(prefix + std::to_string(i));
  std::vector<Column> cols;
  for (std::size_t j = 0; j < rows[0].size(); ++j) cols.push_back({"x" + std::to_string(j), ColumnKind::numeric, {}});
  FeatureMatrix m(ids, cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < rows[r].size(); ++j) m.at(r, j) = rows[r][j];
  return m;
}

Outcome learner_suite() {
  Checks c;
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 50));
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.uniform_int(0, 8));
      y[i] = rng.bernoulli(0.35) ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    c.expect(auc(s, y) == oracle::pairwise_auc(s, y), "AUC equals pair counting");
  }

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> d(25, std::vector<double>(6)), t(15, std::vector<double>(6));
    for (auto* m : {&d, &t})
      for (auto& row : *m)
        for (double& v : row) v = rng.bernoulli(0.12) ? kMissing : rng.normal(0.0, 2.0);
    const auto out = knn_impute(numeric_matrix(d, "d"), numeric_matrix(t, "t"));
    const auto want = oracle::nearest_donor_fill(d, t);
    bool same = true;
    for (std::size_t r = 0; r < t.size(); ++r)
      for (std::size_t j = 0; j < 6; ++j) same &= out.at(r, j) == want[r][j];
    c.expect(same, "KNN(k=1) equals exhaustive nearest donor");
  }

  for (int trial = 0; trial < 10; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(10, 200));
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
    std::vector<int> y(n);
    int pos = 0;
    for (auto& v : y) pos += v = rng.bernoulli(0.3) ? 1 : 0;
    if (pos == 0 || pos == static_cast<int>(n)) {
      y[0] = 1 - y[0];
      pos += y[0] ? 1 : -1;
    }
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    const auto m = fit_logistic(FeatureMatrix(ids, {}), y);
    c.expect(std::fabs(m.intercept - std::log(p / (1 - p))) < 1e-6, "intercept-only logistic equals log-odds");
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(mix_seed(0x67626d, seed));
    std::vector<std::vector<double>> rows(200, std::vector<double>(4));
    std::vector<int> y;
    for (auto& row : rows) {
      for (double& v : row) v = r.normal();
      y.push_back(r.bernoulli(sigmoid(1.5 * row[0] - row[1] * row[2])) ? 1 : 0);
    }
    GbmConfig g;
    g.iterations = 80;
    g.max_depth = 4;
    g.subsample = 1.0;
    g.seed = seed;
    const auto m = fit_gbm(numeric_matrix(rows, "r"), y, g);
    bool monotone = true;
    for (std::size_t i = 1; i < m.train_loss.size(); ++i) monotone &= m.train_loss[i] <= m.train_loss[i - 1] + 1e-12;
    c.expect(monotone, "gbm training loss non-increasing, seed " + std::to_string(seed));
  }
  return c.outcome("AUC, KNN, logistic and gbm oracles");
}

// ---------------------------------------------------------------------------
// 4. Pipeline determinism through the CLI

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cogwear");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

Outcome pipeline_determinism(const fs::path& work) {
  const auto t0 = Clock::now();
  const bool full = full_budget();
  const std::string trials = full ? "200" : "20";
  const std::string repeats = full ? "20" : "10";
  Checks c;
  const auto data = work / "c4";
  fs::remove_all(data);
  const auto d = data.string();
  c.expect(cli({"--out", d, "simulate", "--n", "200", "--seed", "4"}) == 0, "simulate");
  const auto sim = data / "simulate-seed4";
  c.expect(cli({"--out", d, "ingest", "--epochs", (sim / "epochs.csv").string(), "--survey", (sim / "survey.csv").string()}) == 0, "ingest");
  c.expect(cli({"--out", d, "features", "--epochs", (sim / "epochs.csv").string(), "--survey", (sim / "survey.csv").string(), "--cohort",
                (data / "ingest" / "cohort.csv").string()}) == 0,
           "features");
  const std::vector<std::string> ds{"--features", (data / "features" / "features.csv").string(), "--cohort",
                                    (data / "ingest" / "cohort.csv").string()};
  const std::vector<std::string> files{"select/rfe_trace.json", "select/manifest.json",          "tune/tune_result.json",
                                       "tune/manifest.json",    "evaluate/eval_dsst_wearable.json", "evaluate/manifest.json"};
  // Both passes use identical command lines (same run ids, same input paths)
  // so the manifests must match byte for byte as well; the first pass is
  // moved aside before the second.
  const auto out = (data / "run").string();
  const auto sel = (data / "run" / "select" / "rfe_trace.json").string();
  const auto tun = (data / "run" / "tune" / "tune_result.json").string();
  auto with = [&](std::vector<std::string> a) {
    a.insert(a.end(), ds.begin(), ds.end());
    return a;
  };
  for (const char* pass : {"run1", "run2"}) {
    c.expect(cli(with({"--out", out, "--run-id", "select", "select", "--seed", "41"})) == 0, "select");
    c.expect(cli(with({"--out", out, "--run-id", "tune", "tune", "--seed", "42", "--selection", sel, "--trials", trials})) == 0, "tune");
    c.expect(cli(with({"--out", out, "--run-id", "evaluate", "evaluate", "--seed", "43", "--selection", sel, "--tuned", tun,
                       "--repeats", repeats})) == 0,
             "evaluate");
    fs::rename(data / "run", data / pass);
  }
  for (const auto& f : files) {
    const auto a = data / "run1" / f, b = data / "run2" / f;
    c.expect(fs::exists(a) && fs::exists(b) && read_text_file(a) == read_text_file(b), "byte-identical " + f);
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 600.0, "runtime < 10 min");
  return c.outcome(std::string(full ? "full" : "reduced") + " budget (" + trials + " trials, " + repeats + "x10-fold CV), " +
                   fmt("%.0f s", secs));
}

// ---------------------------------------------------------------------------
// 5. Headline ordering on synthetic cohorts

struct OrderingResult {
  double benchmark = 0, wearable = 0, combined = 0;
};

/// RFE, tuning and repeated CV for the three DSST models of one cohort.
OrderingResult three_models(const Study& st, CognitiveTest test, std::uint64_t seed, int trials, int tune_folds, int repeats) {
  const auto y = labels_for_rows(st.features, st.labels.labels, test);
  GbmConfig rfe_cfg;
  rfe_cfg.learning_rate = 0.05;
  rfe_cfg.iterations = 500;
  rfe_cfg.max_depth = 4;
  const auto trace = recursive_feature_elimination(st.features.select_columns(features::wearable_candidates()), y, rfe_cfg, seed);
  OrderingResult r;
  for (auto type : {ModelType::benchmark, ModelType::wearable, ModelType::combined}) {
    ModelSpec spec;
    spec.features = model_columns(type, trace.chosen);
    if (type != ModelType::benchmark) {
      SearchSpace space;
      space.n_trials = trials;
      TuneOptions opt;
      opt.folds = tune_folds;
      spec.learner = ModelKind::gbm;
      spec.gbm = tune_hyperparameters(st.features.select_columns(spec.features), y, space, mix_seed(seed, 1), opt).best;
    }
    EvalOptions eo;
    eo.repeats = repeats;
    const double m = repeated_cv_evaluate(st.features, y, spec, mix_seed(seed, 2), eo).mean;
    (type == ModelType::benchmark ? r.benchmark : type == ModelType::wearable ? r.wearable : r.combined) = m;
  }
  return r;
}

Outcome headline_ordering() {
  const auto t0 = Clock::now();
  const bool full = full_budget();
  const int trials = full ? 200 : 10, tune_folds = full ? 10 : 5, repeats = full ? 20 : 5;
  OrderingResult mean;
  Checks c;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto spec = SimSpec::headline(400, seed);
    spec.days = 7;
    const auto cohort = generate_cohort(spec);
    const auto st = build_study(cohort.series, cohort.conventional, cohort.scores);
    const auto r = three_models(st, CognitiveTest::dsst, seed, trials, tune_folds, repeats);
    mean.benchmark += r.benchmark / 5;
    mean.wearable += r.wearable / 5;
    mean.combined += r.combined / 5;
    per_seed += " s" + std::to_string(seed) + "=" + fmt("%.3f", r.benchmark) + "/" + fmt("%.3f", r.wearable) + "/" + fmt("%.3f", r.combined);
    c.expect(r.combined >= std::max(r.benchmark, r.wearable) - 0.02, "combined >= max - 0.02, seed " + std::to_string(seed));
  }
  c.expect(mean.combined >= mean.wearable, "combined >= wearable");
  c.expect(mean.wearable > mean.benchmark, "wearable > benchmark");
  c.expect(mean.wearable - mean.benchmark >= 0.03, "wearable - benchmark >= 0.03");
  return c.outcome("mean AUC benchmark " + fmt("%.3f", mean.benchmark) + ", wearable " + fmt("%.3f", mean.wearable) + ", combined " +
                   fmt("%.3f", mean.combined) + "; b/w/c per seed:" + per_seed + "; " + (full ? "full" : "reduced") + " budget (" +
                   std::to_string(trials) + " trials x " + std::to_string(tune_folds) + " folds, " + std::to_string(repeats) +
                   "x10-fold CV), " + fmt("%.0f s", seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// 6. NHANES reproduction

Outcome nhanes_reproduction() {
  const char* dir = std::getenv("COGWEAR_NHANES_DIR");
  if (!dir || !*dir) return {Status::skip, "COGWEAR_NHANES_DIR not set (needs adapter output epochs.csv and survey.csv)"};
  const auto t0 = Clock::now();
  Checks c;
  std::ifstream es(fs::path(dir) / "epochs.csv"), ss(fs::path(dir) / "survey.csv");
  if (!es || !ss) return {Status::fail, std::string("cannot open epochs.csv / survey.csv in ") + dir};
  Study st;
  {
    const auto ep = parse_epochs(es);
    const auto sv = parse_survey(ss);
    st = build_study(ep.series, sv.conventional, sv.scores);
  }
  const auto n = st.features.rows();
  c.expect(n == 2508, "cohort N " + std::to_string(n) + " != 2508");
  int dsst = 0, cerad = 0, aft = 0;
  for (const auto& l : st.labels.labels) {
    dsst += l.poor_dsst;
    cerad += l.poor_cerad;
    aft += l.poor_aft;
  }
  c.expect(dsst == 606 && cerad == 616 && aft == 593,
           "poor counts " + std::to_string(dsst) + "/" + std::to_string(cerad) + "/" + std::to_string(aft) + " != 606/616/593");
  const auto summary = cohort_summary(st.features);
  for (auto [label, want] : std::vector<std::pair<const char*, double>>{
           {"Age", 69.56}, {"Sleep duration (hours)", 9.19}, {"Sleep efficiency", 0.94}, {"Sedentary activity (min)", 751.45}}) {
    const double got = summary.row("", label).mean;
    c.expect(std::fabs(got - want) <= 0.005 * want, std::string(label) + " mean " + fmt("%.3f", got) + " vs " + fmt("%.2f", want));
  }
  const std::array<std::pair<CognitiveTest, std::array<double, 3>>, 3> table3{
      {{CognitiveTest::dsst, {0.82, 0.84, 0.85}}, {CognitiveTest::cerad, {0.72, 0.75, 0.75}}, {CognitiveTest::aft, {0.69, 0.70, 0.72}}}};
  std::string aucs;
  for (const auto& [test, want] : table3) {
    const auto r = three_models(st, test, 2023, 200, 10, 20);
    const std::array<double, 3> got{r.benchmark, r.wearable, r.combined};
    aucs += std::string(" ") + to_string(test) + "=" + fmt("%.3f", got[0]) + "/" + fmt("%.3f", got[1]) + "/" + fmt("%.3f", got[2]);
    for (int k = 0; k < 3; ++k)
      c.expect(std::fabs(got[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]) <= 0.03,
               std::string(to_string(test)) + " model " + std::to_string(k) + " AUC off by more than 0.03");
  }
  return c.outcome("N " + std::to_string(n) + "; AUCs b/w/c" + aucs + "; " + fmt("%.0f s", seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// 7. Extraction throughput

Outcome extraction_throughput() {
  auto spec = SimSpec::headline(2500, 7);
  spec.days = 9;
  const int batch = 250;
  double extract_secs = 0.0;
  std::size_t epochs = 0, participants = 0, with_sleep = 0;
  for (int first = 0; first < spec.n; first += batch) {
    const auto cls = sim_classes(spec);
    std::vector<EpochSeries> series;
    for (int i = first; i < std::min(spec.n, first + batch); ++i)
      series.push_back(generate_participant(spec, i, cls[static_cast<std::size_t>(i)] == 1).series);
    for (const auto& s : series) epochs += s.records.size();
    const auto t0 = Clock::now();
    const auto pf = extract_all(series);
    extract_secs += seconds_since(t0);
    participants += pf.size();
    for (const auto& p : pf) with_sleep += p.sleep_detected;
  }
  Checks c;
  c.expect(participants == 2500, "2500 participants extracted");
  c.expect(with_sleep == participants, "sleep detected for every participant");
  c.expect(extract_secs < 300.0, "extraction < 5 min");
  return c.outcome(std::to_string(epochs) + " epochs in " + fmt("%.1f s", extract_secs) + " on " + std::to_string(default_threads()) +
                   " thread(s)");
}

}  // namespace

int main() {
  const auto work = fs::temp_directory_path() / "cogwear_acceptance";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 circadian property suite", circadian_suite},
      {"2 HMM suite", hmm_suite},
      {"3 learner suite", learner_suite},
      {"4 pipeline determinism", [&] { return pipeline_determinism(work); }},
      {"5 synthetic headline ordering", headline_ordering},
      {"6 NHANES reproduction", nhanes_reproduction},
      {"7 extraction throughput", extraction_throughput},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    failures += o.status == Status::fail;
    std::printf("%s  %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
