#include <gtest/gtest.h>

#include <cmath>

#include "cogwear/core/random.hpp"
#include "cogwear/learn/importance.hpp"

using namespace cogwear;

namespace {

FeatureMatrix matrix(std::size_t n, std::size_t p) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  std::vector<Column> cols;
  for (std::size_t c = 0; c < p; ++c) cols.push_back({"f" + std::to_string(c), ColumnKind::numeric, {}});
  return FeatureMatrix(ids, cols);
}

struct Data {
  FeatureMatrix x;
  std::vector<int> y;
};

// Label = Bernoulli(sigmoid(score(row))) over standard normal features.
template <class Score>
Data make(std::uint64_t seed, std::size_t n, std::size_t p, Score score) {
  Rng rng(seed);
  Data d{matrix(n, p), {}};
  std::vector<double> row(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) row[c] = d.x.at(r, c) = rng.normal();
    d.y.push_back(rng.bernoulli(sigmoid(score(row))) ? 1 : 0);
  }
  return d;
}

GbmConfig cfg(std::uint64_t seed, int depth = 3, int iterations = 80) {
  GbmConfig c;
  c.learning_rate = 0.1;
  c.iterations = iterations;
  c.max_depth = depth;
  c.subsample = 0.8;
  c.seed = seed;
  return c;
}

double value_of(const ImportanceReport& r, const std::string& name) {
  for (const auto& f : r.features)
    if (f.feature == name) return f.value;
  ADD_FAILURE() << "missing " << name;
  return 0.0;
}

double synergy_of(const ImportanceReport& r, const std::string& a, const std::string& b) {
  for (const auto& p : r.pairs)
    if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return p.synergy;
  ADD_FAILURE() << "missing pair " << a << "," << b;
  return 0.0;
}

}  // namespace

TEST(LossChangeImportance, UnusedFeatureIsExactlyZero) {
  auto d = make(1, 200, 3, [](const std::vector<double>& r) { return 2.0 * r[0]; });
  for (std::size_t i = 0; i < d.x.rows(); ++i) d.x.at(i, 2) = 1.0;  // constant: never split
  const auto m = fit_gbm(d.x, d.y, cfg(1));
  const auto rep = loss_change_importance(m, d.x, d.y);
  EXPECT_EQ(value_of(rep, "f2"), 0.0);
  EXPECT_GT(value_of(rep, "f0"), 0.0);
}

TEST(LossChangeImportance, PerfectStumpPositive) {
  auto d = make(2, 100, 1, [](const std::vector<double>&) { return 0.0; });
  for (std::size_t i = 0; i < d.x.rows(); ++i) d.y[i] = d.x.at(i, 0) > 0.0 ? 1 : 0;
  auto c = cfg(2, 1, 1);
  c.subsample = 1.0;
  const auto m = fit_gbm(d.x, d.y, c);
  ASSERT_EQ(m.trees.size(), 1u);
  EXPECT_GT(loss_change_importance(m, d.x, d.y).features[0].value, 0.0);
}

TEST(LossChangeImportance, CoverWeightedNeutralization) {
  TrainedModel m;
  m.kind = ModelKind::gbm;
  m.input_columns = {{"a", ColumnKind::numeric, {}}};
  m.feature_names = {"a"};
  m.base_score = 0.0;
  m.learning_rate = 1.0;
  m.trees = {Tree{{{0, 1.0, 1, 2, 0, 10}, {-1, 0, -1, -1, -1.0, 4}, {-1, 0, -1, -1, 2.0, 6}}}};
  FeatureMatrix x(std::vector<std::string>{"p", "q"}, m.input_columns);
  x.at(0, 0) = 0.0;
  x.at(1, 0) = 3.0;
  const std::vector<int> y{0, 1};
  const NeutralizedScorer s(m, x, y);
  const std::vector<double> neutral{0.8, 0.8};  // (4*-1 + 6*2) / 10
  const std::size_t a[] = {0};
  EXPECT_DOUBLE_EQ(s.loss(a), log_loss_from_scores(neutral, y));
  const std::vector<double> full{-1.0, 2.0};
  EXPECT_DOUBLE_EQ(s.full_loss(), log_loss_from_scores(full, y));
}

TEST(LossChangeImportance, StrongSignalRanksFirst) {
  int first = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tr = make(100 + seed, 400, 4, [](const std::vector<double>& r) { return 2.0 * r[0] + 0.5 * r[1]; });
    const auto ev = make(200 + seed, 300, 4, [](const std::vector<double>& r) { return 2.0 * r[0] + 0.5 * r[1]; });
    const auto rep = loss_change_importance(fit_gbm(tr.x, tr.y, cfg(seed)), ev.x, ev.y);
    first += rep.features[0].feature == "f0";
    for (std::size_t i = 1; i < rep.features.size(); ++i) EXPECT_GE(rep.features[i - 1].value, rep.features[i].value);
  }
  EXPECT_GE(first, 19);
}

TEST(LossChangeImportance, RequiresBoostedModel) {
  auto d = make(3, 60, 2, [](const std::vector<double>& r) { return r[0]; });
  const auto m = fit_logistic(d.x, d.y);
  EXPECT_THROW(loss_change_importance(m, d.x, d.y), Error);
}

TEST(PairedImportance, XorPairHasLargestSynergyMagnitude) {
  int wins = 0;
  auto xor_score = [](const std::vector<double>& r) { return (r[0] > 0) != (r[1] > 0) ? 3.0 : -3.0; };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tr = make(300 + seed, 600, 4, xor_score);
    const auto ev = make(400 + seed, 400, 4, xor_score);
    const auto rep = paired_importance(fit_gbm(tr.x, tr.y, cfg(seed, 3, 100)), ev.x, ev.y);
    const double xor_syn = synergy_of(rep, "f0", "f1");
    // each half of the pair is useless alone, so the joint loss barely
    // exceeds either single loss and the synergy is close to -delta
    EXPECT_LT(xor_syn, -0.8 * std::min(value_of(rep, "f0"), value_of(rep, "f1")));
    const auto& top = rep.pairs.front();
    wins += (top.first == "f0" && top.second == "f1") || (top.first == "f1" && top.second == "f0");
    for (std::size_t i = 1; i < rep.pairs.size(); ++i) EXPECT_GE(std::abs(rep.pairs[i - 1].synergy), std::abs(rep.pairs[i].synergy));
  }
  EXPECT_GE(wins, 18);
}

TEST(PairedImportance, AdditiveFeaturesInteractFarLessThanXor) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto additive = [](const std::vector<double>& r) { return 1.5 * r[0] + 1.5 * r[1]; };
    const auto tr = make(500 + seed, 500, 3, additive);
    const auto ev = make(600 + seed, 400, 3, additive);
    const auto rep = paired_importance(fit_gbm(tr.x, tr.y, cfg(seed, 1, 100)), ev.x, ev.y);
    // stumps make the score exactly additive; what remains is log-loss curvature
    const double hi = std::max(value_of(rep, "f0"), value_of(rep, "f1"));
    EXPECT_LT(std::abs(synergy_of(rep, "f0", "f1")), 0.6 * hi) << "seed " << seed;
  }
}

TEST(PairedImportance, UnusedPairIsZero) {
  auto d = make(7, 200, 4, [](const std::vector<double>& r) { return 2.0 * r[0]; });
  for (std::size_t i = 0; i < d.x.rows(); ++i) {
    d.x.at(i, 2) = 0.0;
    d.x.at(i, 3) = 5.0;
  }
  const auto rep = paired_importance(fit_gbm(d.x, d.y, cfg(7)), d.x, d.y);
  EXPECT_EQ(synergy_of(rep, "f2", "f3"), 0.0);
  EXPECT_EQ(rep.pairs.size(), 6u);
}
