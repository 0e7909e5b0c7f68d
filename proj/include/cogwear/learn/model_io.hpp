#pragma once

// JSON form of TrainedModel: trees as nested nodes, logistic coefficients as
// a name -> value map.

#include <deque>
#include <nlohmann/json.hpp>

#include "cogwear/core/feature_matrix_io.hpp"
#include "cogwear/learn/model.hpp"

namespace cogwear {

inline constexpr int kModelSchemaVersion = 1;

inline nlohmann::json gbm_config_json(const GbmConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"iterations", c.iterations}, {"max_depth", c.max_depth},
          {"subsample", c.subsample},         {"l2_leaf", c.l2_leaf},       {"early_stopping_patience", c.early_stopping_patience},
          {"seed", c.seed},                   {"max_bins", c.max_bins}};
}

inline GbmConfig gbm_config_from_json(const nlohmann::json& j) {
  GbmConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.iterations = j.at("iterations").get<int>();
  c.max_depth = j.at("max_depth").get<int>();
  c.subsample = j.at("subsample").get<double>();
  c.l2_leaf = j.value("l2_leaf", 1.0);
  c.early_stopping_patience = j.value("early_stopping_patience", 50);
  c.seed = j.value("seed", std::uint64_t{0});
  c.max_bins = j.value("max_bins", 254);
  return c;
}

namespace detail {

inline nlohmann::json node_json(const Tree& t, int i, const std::vector<std::string>& names) {
  const auto& n = t.nodes[static_cast<std::size_t>(i)];
  if (n.is_leaf()) return {{"value", n.value}, {"cover", n.cover}};
  return {{"feature", names.at(static_cast<std::size_t>(n.feature))},
          {"threshold", n.threshold},
          {"cover", n.cover},
          {"left", node_json(t, n.left, names)},
          {"right", node_json(t, n.right, names)}};
}

// Rebuilds nodes in breadth-first order, the order the grower emits.
inline Tree tree_from_json(const nlohmann::json& root, const std::vector<std::string>& names) {
  Tree t;
  std::deque<std::pair<const nlohmann::json*, std::size_t>> queue;
  t.nodes.push_back({});
  queue.emplace_back(&root, 0);
  while (!queue.empty()) {
    const auto [j, i] = queue.front();
    queue.pop_front();
    TreeNode n;
    n.cover = j->at("cover").get<double>();
    if (j->contains("feature")) {
      const auto name = j->at("feature").get<std::string>();
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw SchemaError("model tree refers to unknown feature '" + name + "'");
      n.feature = static_cast<int>(it - names.begin());
      n.threshold = j->at("threshold").get<double>();
      n.left = static_cast<int>(t.nodes.size());
      n.right = n.left + 1;
      t.nodes.push_back({});
      t.nodes.push_back({});
      queue.emplace_back(&j->at("left"), static_cast<std::size_t>(n.left));
      queue.emplace_back(&j->at("right"), static_cast<std::size_t>(n.right));
    } else {
      n.value = j->at("value").get<double>();
    }
    t.nodes[i] = n;
  }
  return t;
}

}  // namespace detail

inline nlohmann::json model_to_json(const TrainedModel& m) {
  nlohmann::json j{{"schema_version", kModelSchemaVersion},
                   {"kind", to_string(m.kind)},
                   {"input_columns", columns_to_json(m.input_columns)},
                   {"feature_names", m.feature_names}};
  if (m.kind == ModelKind::logistic) {
    nlohmann::json coef = nlohmann::json::object();
    for (std::size_t i = 0; i < m.coefficients.size(); ++i) coef[m.feature_names[i]] = m.coefficients[i];
    j["intercept"] = m.intercept;
    j["coefficients"] = coef;
    j["converged"] = m.converged;
    j["separation"] = m.separation;
    j["iterations_run"] = m.iterations_run;
  } else {
    j["base_score"] = m.base_score;
    j["learning_rate"] = m.learning_rate;
    j["config"] = gbm_config_json(m.config);
    j["best_iteration"] = m.best_iteration;
    j["iterations_run"] = m.iterations_run;
    j["train_loss"] = m.train_loss;
    j["valid_loss"] = m.valid_loss;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : m.trees) trees.push_back(detail::node_json(t, 0, m.feature_names));
    j["trees"] = trees;
  }
  return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kModelSchemaVersion) throw SchemaError("unsupported model schema version");
  TrainedModel m;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "logistic")
    m.kind = ModelKind::logistic;
  else if (kind == "gbm")
    m.kind = ModelKind::gbm;
  else
    throw SchemaError("unknown model kind '" + kind + "'");
  m.input_columns = columns_from_json(j.at("input_columns"));
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.iterations_run = j.value("iterations_run", 0);
  if (m.kind == ModelKind::logistic) {
    m.intercept = j.at("intercept").get<double>();
    const auto& coef = j.at("coefficients");
    for (const auto& name : m.feature_names) {
      if (!coef.contains(name)) throw SchemaError("model lacks a coefficient for '" + name + "'");
      m.coefficients.push_back(coef.at(name).get<double>());
    }
    m.converged = j.value("converged", false);
    m.separation = j.value("separation", false);
  } else {
    m.base_score = j.at("base_score").get<double>();
    m.learning_rate = j.at("learning_rate").get<double>();
    m.config = gbm_config_from_json(j.at("config"));
    m.best_iteration = j.at("best_iteration").get<int>();
    m.train_loss = j.value("train_loss", std::vector<double>{});
    m.valid_loss = j.value("valid_loss", std::vector<double>{});
    for (const auto& t : j.at("trees")) m.trees.push_back(detail::tree_from_json(t, m.feature_names));
  }
  return m;
}

}  // namespace cogwear
