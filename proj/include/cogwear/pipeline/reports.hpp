#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cogwear/learn/importance.hpp"
#include "cogwear/learn/model_io.hpp"
#include "cogwear/pipeline/evaluate.hpp"
#include "cogwear/pipeline/rfe.hpp"
#include "cogwear/pipeline/tune.hpp"

namespace cogwear {

inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json eval_report_json(const EvalReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "eval_report"},
          {"target", r.target},
          {"model", r.model},
          {"learner", to_string(r.learner)},
          {"seed", r.seed},
          {"repeats", r.repeats},
          {"folds", r.folds},
          {"features", r.features},
          {"aucs", r.aucs},
          {"mean", r.mean},
          {"sd", r.sd},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"ci_method", to_string(r.ci_method)},
          {"redraws", r.redraws}};
}

inline void require_report_kind(const nlohmann::json& j, const char* kind) {
  if (j.value("schema_version", 0) != kReportSchemaVersion) throw SchemaError("unsupported report schema version");
  if (j.value("kind", std::string()) != kind) throw SchemaError(std::string("expected a ") + kind + " document");
}

inline EvalReport eval_report_from_json(const nlohmann::json& j) {
  require_report_kind(j, "eval_report");
  EvalReport r;
  r.target = j.at("target").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.learner = model_kind_from_string(j.at("learner").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.repeats = j.at("repeats").get<int>();
  r.folds = j.at("folds").get<int>();
  r.features = j.at("features").get<std::vector<std::string>>();
  r.aucs = j.at("aucs").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.sd = j.at("sd").get<double>();
  r.ci_low = j.at("ci_low").get<double>();
  r.ci_high = j.at("ci_high").get<double>();
  r.ci_method = ci_method_from_string(j.at("ci_method").get<std::string>());
  r.redraws = j.at("redraws").get<int>();
  return r;
}

inline nlohmann::json rfe_trace_json(const RfeTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) steps.push_back({{"eliminated", s.eliminated}, {"valid_loss", s.valid_loss}, {"features", s.features}});
  return {{"schema_version", kReportSchemaVersion}, {"kind", "rfe_trace"},      {"steps", steps},
          {"chosen", t.chosen},                     {"chosen_loss", t.chosen_loss}, {"chosen_step", t.chosen_step}};
}

inline RfeTrace rfe_trace_from_json(const nlohmann::json& j) {
  require_report_kind(j, "rfe_trace");
  RfeTrace t;
  for (const auto& s : j.at("steps"))
    t.steps.push_back({s.at("eliminated").get<std::string>(), s.at("valid_loss").get<double>(), s.at("features").get<std::size_t>()});
  t.chosen = j.at("chosen").get<std::vector<std::string>>();
  t.chosen_loss = j.at("chosen_loss").get<double>();
  t.chosen_step = j.at("chosen_step").get<std::size_t>();
  return t;
}

inline nlohmann::json search_space_json(const SearchSpace& s) {
  return {{"learning_rate", {s.learning_rate_lo, s.learning_rate_hi}},
          {"iterations", {s.iterations_lo, s.iterations_hi}},
          {"max_depth", {s.max_depth_lo, s.max_depth_hi}},
          {"subsample", {s.subsample_lo, s.subsample_hi}},
          {"n_trials", s.n_trials}};
}

/// Missing keys keep the values of `base`.
inline SearchSpace search_space_from_json(const nlohmann::json& j, SearchSpace s = {}) {
  auto range = [&](const char* key, auto& lo, auto& hi) {
    if (!j.contains(key)) return;
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 2) throw SchemaError(std::string("search space '") + key + "' must be [lo, hi]");
    r[0].get_to(lo);
    r[1].get_to(hi);
  };
  range("learning_rate", s.learning_rate_lo, s.learning_rate_hi);
  range("iterations", s.iterations_lo, s.iterations_hi);
  range("max_depth", s.max_depth_lo, s.max_depth_hi);
  range("subsample", s.subsample_lo, s.subsample_hi);
  if (j.contains("n_trials")) s.n_trials = j.at("n_trials").get<int>();
  s.validate();
  return s;
}

inline nlohmann::json tune_result_json(const TuneResult& r, const SearchSpace& space) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"trial", t.trial}, {"config", gbm_config_json(t.config)}, {"fold_aucs", t.fold_aucs}, {"mean_auc", t.mean_auc}});
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "tune_result"},
          {"space", search_space_json(space)},
          {"folds", r.folds},
          {"redraws", r.redraws},
          {"best_trial", r.best_trial},
          {"best_auc", r.best_auc},
          {"best", gbm_config_json(r.best)},
          {"trials", trials}};
}

inline TuneResult tune_result_from_json(const nlohmann::json& j) {
  require_report_kind(j, "tune_result");
  TuneResult r;
  r.folds = j.at("folds").get<int>();
  r.redraws = j.at("redraws").get<int>();
  r.best_trial = j.at("best_trial").get<int>();
  r.best_auc = j.at("best_auc").get<double>();
  r.best = gbm_config_from_json(j.at("best"));
  for (const auto& t : j.at("trials"))
    r.trials.push_back({t.at("trial").get<int>(), gbm_config_from_json(t.at("config")), t.at("fold_aucs").get<std::vector<double>>(),
                        t.at("mean_auc").get<double>()});
  return r;
}

inline nlohmann::json importance_json(const ImportanceReport& r) {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& x : r.features) f.push_back({{"feature", x.feature}, {"value", x.value}});
  nlohmann::json p = nlohmann::json::array();
  for (const auto& x : r.pairs) p.push_back({{"first", x.first}, {"second", x.second}, {"synergy", x.synergy}});
  return {{"schema_version", kReportSchemaVersion}, {"kind", "importance"}, {"full_loss", r.full_loss}, {"features", f}, {"pairs", p}};
}

inline ImportanceReport importance_from_json(const nlohmann::json& j) {
  require_report_kind(j, "importance");
  ImportanceReport r;
  r.full_loss = j.at("full_loss").get<double>();
  for (const auto& x : j.at("features")) r.features.push_back({x.at("feature").get<std::string>(), x.at("value").get<double>()});
  for (const auto& x : j.at("pairs"))
    r.pairs.push_back({x.at("first").get<std::string>(), x.at("second").get<std::string>(), x.at("synergy").get<double>()});
  return r;
}

// ---------------------------------------------------------------------------
// Files

/// Writes `content` to `path`, creating parent directories. Any failure is fatal.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + path.string());
  os << content;
  os.flush();
  if (!os) throw Error("failed writing " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Plots

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(2);
  ss << v;
  return ss.str();
}

inline std::string num3(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(3);
  ss << v;
  return ss.str();
}

}  // namespace detail

/// Mean AUC with its interval per model, one row each.
inline std::string auc_interval_svg(std::span<const EvalReport> reports) {
  const double left = 220, width = 420, row_h = 28, top = 40;
  double lo = 1.0, hi = 0.0;
  for (const auto& r : reports) {
    lo = std::min(lo, r.ci_low);
    hi = std::max(hi, r.ci_high);
  }
  if (reports.empty() || !(hi > lo)) lo = 0.5, hi = 1.0;
  const double pad = 0.05 * (hi - lo) + 1e-3;
  lo -= pad;
  hi += pad;
  auto x = [&](double v) { return left + (v - lo) / (hi - lo) * width; };
  const double h = top + row_h * static_cast<double>(reports.size()) + 40;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(left + width + 40) << "\" height=\"" << detail::num(h)
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"10\" y=\"20\" font-size=\"14\">Mean AUC with 95% interval</text>\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double y = top + row_h * (static_cast<double>(i) + 0.5);
    s << "<text x=\"10\" y=\"" << detail::num(y + 4) << "\">" << detail::svg_escape(r.target + " / " + r.model) << "</text>\n";
    s << "<line x1=\"" << detail::num(x(r.ci_low)) << "\" y1=\"" << detail::num(y) << "\" x2=\"" << detail::num(x(r.ci_high))
      << "\" y2=\"" << detail::num(y) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    s << "<circle cx=\"" << detail::num(x(r.mean)) << "\" cy=\"" << detail::num(y) << "\" r=\"4\" fill=\"steelblue\"/>\n";
    s << "<text x=\"" << detail::num(left + width + 5) << "\" y=\"" << detail::num(y + 4) << "\">" << detail::num3(r.mean) << "</text>\n";
  }
  const double axis_y = top + row_h * static_cast<double>(reports.size()) + 10;
  s << "<line x1=\"" << detail::num(left) << "\" y1=\"" << detail::num(axis_y) << "\" x2=\"" << detail::num(left + width) << "\" y2=\""
    << detail::num(axis_y) << "\" stroke=\"gray\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    s << "<text x=\"" << detail::num(x(v) - 12) << "\" y=\"" << detail::num(axis_y + 16) << "\">" << detail::num3(v) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// Horizontal bars of the largest loss-change importances.
inline std::string importance_svg(const std::string& title, const ImportanceReport& r, std::size_t top_n = 20) {
  const std::size_t n = std::min(top_n, r.features.size());
  const double left = 220, width = 400, row_h = 20, top = 40;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, std::abs(r.features[i].value));
  if (!(hi > 0.0)) hi = 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(left + width + 80) << "\" height=\""
    << detail::num(top + row_h * static_cast<double>(n) + 20) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"10\" y=\"20\" font-size=\"14\">" << detail::svg_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = r.features[i];
    const double y = top + row_h * static_cast<double>(i);
    const double w = std::abs(f.value) / hi * width;
    s << "<text x=\"10\" y=\"" << detail::num(y + 14) << "\">" << detail::svg_escape(f.feature) << "</text>\n";
    s << "<rect x=\"" << detail::num(left) << "\" y=\"" << detail::num(y + 3) << "\" width=\"" << detail::num(w) << "\" height=\""
      << detail::num(row_h - 6) << "\" fill=\"" << (f.value >= 0 ? "steelblue" : "indianred") << "\"/>\n";
    s << "<text x=\"" << detail::num(left + w + 5) << "\" y=\"" << detail::num(y + 14) << "\">" << detail::num3(f.value) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Emission

struct NamedImportance {
  std::string name;  // e.g. "dsst_wearable"
  ImportanceReport report;
};

inline std::string report_stem(const EvalReport& r) { return r.target + "_" + r.model; }

/// Writes one JSON per evaluation report, a combined AUC CSV, the AUC
/// interval plot and, per importance report, its JSON and bar plot.
/// Returns the written paths in write order.
inline std::vector<std::filesystem::path> emit_reports(std::span<const EvalReport> reports, std::span<const NamedImportance> importances,
                                                       const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    written.push_back(dir / name);
  };
  std::ostringstream csv_out;
  csv_out << "target,model,repeat,fold,auc\n";
  for (const auto& r : reports) {
    put("eval_" + report_stem(r) + ".json", dump_json(eval_report_json(r)));
    for (std::size_t i = 0; i < r.aucs.size(); ++i)
      csv_out << r.target << ',' << r.model << ',' << i / static_cast<std::size_t>(r.folds) << ',' << i % static_cast<std::size_t>(r.folds)
              << ',' << csv::format_double(r.aucs[i]) << '\n';
  }
  put("auc_distributions.csv", csv_out.str());
  put("auc_intervals.svg", auc_interval_svg(reports));
  for (const auto& imp : importances) {
    put("importance_" + imp.name + ".json", dump_json(importance_json(imp.report)));
    put("importance_" + imp.name + ".svg", importance_svg("Loss-change importance: " + imp.name, imp.report));
  }
  return written;
}

}  // namespace cogwear
