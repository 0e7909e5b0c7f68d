#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cogwear/core/feature_matrix_io.hpp"
#include "cogwear/features.hpp"
#include "cogwear/ingest.hpp"
#include "cogwear/pipeline/cohort_summary.hpp"
#include "cogwear/pipeline/reports.hpp"
#include "cogwear/pipeline/study.hpp"
#include "cogwear/simlab.hpp"

namespace cogwear::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kManifestSchemaVersion = 1;

/// Every flag of every subcommand. A subcommand registers the subset it uses.
struct RunConfig {
  std::string subcommand;
  std::string out = "runs";
  std::string run_id;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;  // 0 = logical cores

  // simulate
  int n = 200;
  int days = 9;
  double prevalence = 0.25;
  std::string profile = "rectangular";
  std::string preset = "headline";

  // inputs
  std::string epochs, survey, cohort, features, selection, tuned, space;
  std::vector<std::string> evals, importances;

  std::string target = "dsst";
  std::string model = "wearable";
  std::string policy = "train_donors";
  std::string ci = "normal";
  int folds = 10;
  int repeats = 20;
  std::optional<int> trials;
  double valid_fraction = 0.2;
  double rfe_learning_rate = 0.05;
  int rfe_iterations = 500;
  int rfe_depth = 4;
};

// ---------------------------------------------------------------------------
// Helpers

inline std::string to_hex(const unsigned char* md, unsigned int len) {
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  return to_hex(md, len);
}

inline std::string sha256_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::vector<char> buf(1 << 20);
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  return to_hex(md, len);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  return is;
}

inline json read_json_file(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": not valid JSON (" + e.what() + ")");
  }
}

/// `features.csv` -> `features.schema.json` in the same directory.
inline fs::path schema_sidecar(const fs::path& csv_path) { return csv_path.parent_path() / (csv_path.stem().string() + ".schema.json"); }

inline constexpr std::string_view kCohortHeader = "participant_id,poor_dsst,poor_cerad,poor_aft";

inline void write_cohort_csv(std::ostream& os, const LabelSet& labels) {
  os << kCohortHeader << '\n';
  for (const auto& l : labels.labels) os << l.participant_id << ',' << l.poor_dsst << ',' << l.poor_cerad << ',' << l.poor_aft << '\n';
}

inline std::vector<OutcomeLabels> read_cohort_csv(const std::string& path) {
  std::istringstream is(read_text_file(path));
  std::string line;
  if (!std::getline(is, line) || csv::trim_cr(line) != kCohortHeader)
    throw SchemaError(path + ": cohort header must be '" + std::string(kCohortHeader) + "'");
  std::vector<OutcomeLabels> out;
  auto flag = [&](std::string_view v) {
    if (v == "0") return false;
    if (v == "1") return true;
    throw SchemaError(path + ": labels must be 0 or 1");
  };
  while (std::getline(is, line)) {
    const auto sv = csv::trim_cr(line);
    if (sv.empty()) continue;
    const auto f = csv::split(sv);
    if (f.size() != 4 || f[0].empty()) throw SchemaError(path + ": cohort row must have 4 fields");
    out.push_back({std::string(f[0]), flag(f[1]), flag(f[2]), flag(f[3])});
  }
  return out;
}

inline FeatureMatrix load_features(const std::string& path) {
  const auto sidecar = schema_sidecar(path);
  if (!fs::exists(sidecar)) throw SchemaError(path + ": no schema sidecar " + sidecar.string());
  const auto schema = read_json_file(sidecar.string());
  std::istringstream is(read_text_file(path));
  return read_feature_csv(is, schema);
}

inline std::vector<std::string> load_selection(const std::string& path) { return rfe_trace_from_json(read_json_file(path)).chosen; }

/// Collects artifacts and input hashes, then writes the run directory.
class Run {
 public:
  explicit Run(const RunConfig& cfg) : dir_(fs::path(cfg.out) / cfg.run_id) {}

  const fs::path& dir() const { return dir_; }

  void input(const std::string& path) { inputs_.push_back({{"path", path}, {"sha256", sha256_file(path)}}); }

  void put(const std::string& name, const std::string& content) {
    write_text_file(dir_ / name, content);
    names_.push_back(name);
  }

  /// Records a file some other writer already placed in the run directory.
  void adopt(const fs::path& path) { names_.push_back(fs::relative(path, dir_).generic_string()); }

  void finish(const RunConfig& cfg, const json& params) {
    json artifacts = json::array();
    for (const auto& name : names_) {
      const auto text = read_text_file(dir_ / name);
      artifacts.push_back({{"file", name}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
    }
    json m{{"schema_version", kManifestSchemaVersion},
           {"kind", "manifest"},
           {"subcommand", cfg.subcommand},
           {"run_id", cfg.run_id},
           {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
           {"params", params},
           {"inputs", inputs_},
           {"artifacts", artifacts}};
    write_text_file(dir_ / "manifest.json", dump_json(m));
  }

 private:
  fs::path dir_;
  json inputs_ = json::array();
  std::vector<std::string> names_;
};

inline std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw Error(cfg.subcommand + ": --seed is required");
  return *cfg.seed;
}

struct Dataset {
  FeatureMatrix x;
  Labels y;
};

inline Dataset load_dataset(const RunConfig& cfg, Run& run) {
  Dataset d{load_features(cfg.features), {}};
  run.input(cfg.features);
  run.input(schema_sidecar(cfg.features).string());
  run.input(cfg.cohort);
  d.y = labels_for_rows(d.x, read_cohort_csv(cfg.cohort), cognitive_test_from_string(cfg.target));
  return d;
}

inline ModelType tuned_model(const RunConfig& cfg) {
  const auto t = model_type_from_string(cfg.model);
  if (t == ModelType::benchmark) throw Error(cfg.subcommand + ": benchmark models are logistic and take no tuning");
  return t;
}

// ---------------------------------------------------------------------------
// Subcommands

inline json cmd_simulate(const RunConfig& cfg, Run& run) {
  SimSpec spec;
  if (cfg.preset == "headline") spec = SimSpec::headline(cfg.n, require_seed(cfg));
  else if (cfg.preset == "plain") spec.seed = require_seed(cfg);
  else throw Error("simulate: unknown preset '" + cfg.preset + "'");
  spec.n = cfg.n;
  spec.days = cfg.days;
  spec.prevalence = cfg.prevalence;
  if (cfg.profile == "sinusoid") spec.profile = SimProfile::sinusoid;
  else if (cfg.profile != "rectangular") throw Error("simulate: unknown profile '" + cfg.profile + "'");
  const auto cohort = generate_cohort(spec);

  std::ostringstream epochs, survey, truth;
  write_epochs(epochs, cohort.series);
  write_survey(survey, cohort.conventional, cohort.scores);
  truth << "participant_id,poor_class\n";
  for (std::size_t i = 0; i < cohort.series.size(); ++i) truth << cohort.series[i].participant_id << ',' << cohort.poor[i] << '\n';
  run.put("epochs.csv", epochs.str());
  run.put("survey.csv", survey.str());
  run.put("truth.csv", truth.str());
  json params{{"n", cfg.n}, {"days", cfg.days}, {"prevalence", cfg.prevalence}, {"profile", cfg.profile}, {"preset", cfg.preset}};
  run.put("sim_spec.json", dump_json(params));
  return params;
}

inline json cmd_ingest(const RunConfig& cfg, Run& run) {
  run.input(cfg.epochs);
  run.input(cfg.survey);
  auto es = open_input(cfg.epochs);
  auto ss = open_input(cfg.survey);
  const auto ep = parse_epochs(es);
  const auto sv = parse_survey(ss);
  const auto ex = apply_exclusions(ep.series, sv.scores, sv.conventional);
  if (ex.cohort.empty()) throw Error("ingest: no participant passes the exclusion criteria");
  std::unordered_map<std::string, const CognitiveScores*> by_id;
  for (const auto& s : sv.scores) by_id.emplace(s.participant_id, &s);
  std::vector<CognitiveScores> kept;
  for (const auto& id : ex.cohort) kept.push_back(*by_id.at(id));
  const auto labels = label_outcomes(kept);

  std::ostringstream cohort;
  write_cohort_csv(cohort, labels);
  run.put("cohort.csv", cohort.str());
  json counts{{"dsst", 0}, {"cerad", 0}, {"aft", 0}};
  for (const auto& l : labels.labels) {
    counts["dsst"] = counts["dsst"].get<int>() + l.poor_dsst;
    counts["cerad"] = counts["cerad"].get<int>() + l.poor_cerad;
    counts["aft"] = counts["aft"].get<int>() + l.poor_aft;
  }
  const auto& er = ep.report;
  const auto& sr = sv.report;
  json report{{"schema_version", kReportSchemaVersion},
              {"kind", "ingest_report"},
              {"epochs",
               {{"rows", er.rows},
                {"accepted", er.accepted},
                {"rejected_negative", er.rejected_negative},
                {"duplicates", er.duplicates},
                {"malformed", er.malformed},
                {"participants", ep.series.size()}}},
              {"survey", {{"rows", sr.rows}, {"malformed", sr.malformed}, {"duplicates", sr.duplicates}, {"out_of_range", sr.out_of_range}}},
              {"exclusions",
               {{"under_age", ex.under_age},
                {"insufficient_wear", ex.insufficient_wear},
                {"incomplete_cognition", ex.incomplete_cognition},
                {"no_epochs", ex.no_epochs},
                {"log", ex.log}}},
              {"cohort_size", ex.cohort.size()},
              {"cutoffs", {{"dsst", labels.cutoff_dsst}, {"cerad", labels.cutoff_cerad}, {"aft", labels.cutoff_aft}}},
              {"poor_counts", counts}};
  run.put("ingest_report.json", dump_json(report));
  return json::object();
}

inline json cmd_features(const RunConfig& cfg, Run& run) {
  run.input(cfg.epochs);
  run.input(cfg.survey);
  run.input(cfg.cohort);
  auto es = open_input(cfg.epochs);
  auto ss = open_input(cfg.survey);
  const auto ep = parse_epochs(es);
  const auto sv = parse_survey(ss);
  std::vector<std::string> ids;
  for (const auto& l : read_cohort_csv(cfg.cohort)) ids.push_back(l.participant_id);
  std::unordered_map<std::string, const EpochSeries*> by_id;
  for (const auto& s : ep.series) by_id.emplace(s.participant_id, &s);
  std::vector<EpochSeries> kept;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw SchemaError("features: cohort participant " + id + " has no epochs");
    kept.push_back(*it->second);
  }
  const auto wearable = extract_all(kept);
  const auto x = assemble_features(wearable, sv.conventional, ids);

  std::ostringstream csv_out, summary;
  write_feature_csv(csv_out, x);
  write_cohort_summary_csv(summary, cohort_summary(x));
  run.put("features.csv", csv_out.str());
  run.put("features.schema.json", dump_json(feature_schema_json(x)));
  run.put("cohort_summary.csv", summary.str());
  return json::object();
}

inline json cmd_select(const RunConfig& cfg, Run& run) {
  const auto seed = require_seed(cfg);
  const auto d = load_dataset(cfg, run);
  GbmConfig g;
  g.learning_rate = cfg.rfe_learning_rate;
  g.iterations = cfg.rfe_iterations;
  g.max_depth = cfg.rfe_depth;
  RfeOptions opt;
  opt.valid_fraction = cfg.valid_fraction;
  opt.policy = impute_policy_from_string(cfg.policy);
  const auto trace = recursive_feature_elimination(d.x.select_columns(features::wearable_candidates()), d.y, g, seed, opt);
  run.put("rfe_trace.json", dump_json(rfe_trace_json(trace)));
  return {{"target", cfg.target}, {"gbm", gbm_config_json(g)}, {"valid_fraction", cfg.valid_fraction}, {"policy", cfg.policy}};
}

inline json cmd_tune(const RunConfig& cfg, Run& run) {
  const auto seed = require_seed(cfg);
  const auto type = tuned_model(cfg);
  const auto d = load_dataset(cfg, run);
  run.input(cfg.selection);
  SearchSpace space;
  if (!cfg.space.empty()) {
    run.input(cfg.space);
    space = search_space_from_json(read_json_file(cfg.space));
  }
  if (cfg.trials) space.n_trials = *cfg.trials;
  space.validate();
  TuneOptions opt;
  opt.folds = cfg.folds;
  opt.policy = impute_policy_from_string(cfg.policy);
  const auto cols = model_columns(type, load_selection(cfg.selection));
  const auto result = tune_hyperparameters(d.x.select_columns(cols), d.y, space, seed, opt);
  run.put("tune_result.json", dump_json(tune_result_json(result, space)));
  return {{"target", cfg.target}, {"model", cfg.model}, {"folds", cfg.folds}, {"policy", cfg.policy}, {"space", search_space_json(space)}};
}

inline json cmd_evaluate(const RunConfig& cfg, Run& run) {
  const auto seed = require_seed(cfg);
  const auto type = model_type_from_string(cfg.model);
  const auto d = load_dataset(cfg, run);
  ModelSpec spec;
  spec.policy = impute_policy_from_string(cfg.policy);
  if (type == ModelType::benchmark) {
    spec.learner = ModelKind::logistic;
    spec.features = model_columns(type, {});
  } else {
    if (cfg.selection.empty() || cfg.tuned.empty()) throw Error("evaluate: --selection and --tuned are required for boosted models");
    run.input(cfg.selection);
    run.input(cfg.tuned);
    spec.learner = ModelKind::gbm;
    spec.features = model_columns(type, load_selection(cfg.selection));
    spec.gbm = tune_result_from_json(read_json_file(cfg.tuned)).best;
  }
  EvalOptions opt;
  opt.repeats = cfg.repeats;
  opt.folds = cfg.folds;
  opt.ci = ci_method_from_string(cfg.ci);
  auto report = repeated_cv_evaluate(d.x, d.y, spec, seed, opt);
  report.target = cfg.target;
  report.model = cfg.model;
  run.put("eval_" + report_stem(report) + ".json", dump_json(eval_report_json(report)));
  return {{"target", cfg.target}, {"model", cfg.model}, {"repeats", cfg.repeats}, {"folds", cfg.folds}, {"ci", cfg.ci}, {"policy", cfg.policy}};
}

inline json cmd_importance(const RunConfig& cfg, Run& run) {
  const auto seed = require_seed(cfg);
  const auto type = tuned_model(cfg);
  const auto d = load_dataset(cfg, run);
  run.input(cfg.selection);
  run.input(cfg.tuned);
  const auto cols = model_columns(type, load_selection(cfg.selection));
  const auto gbm = tune_result_from_json(read_json_file(cfg.tuned)).best;
  const auto report = study_importance(d.x.select_columns(cols), d.y, gbm, seed, impute_policy_from_string(cfg.policy));
  run.put("importance_" + cfg.target + "_" + cfg.model + ".json", dump_json(importance_json(report)));
  return {{"target", cfg.target}, {"model", cfg.model}, {"policy", cfg.policy}};
}

inline json cmd_report(const RunConfig& cfg, Run& run) {
  std::vector<EvalReport> reports;
  std::set<std::string> stems;
  for (const auto& p : cfg.evals) {
    run.input(p);
    reports.push_back(eval_report_from_json(read_json_file(p)));
    if (!stems.insert(report_stem(reports.back())).second) throw Error("report: duplicate evaluation " + report_stem(reports.back()));
  }
  std::vector<NamedImportance> imps;
  for (const auto& p : cfg.importances) {
    run.input(p);
    auto name = fs::path(p).stem().string();
    if (name.rfind("importance_", 0) == 0) name = name.substr(11);
    imps.push_back({name, importance_from_json(read_json_file(p))});
  }
  for (const auto& path : emit_reports(reports, imps, run.dir())) run.adopt(path);
  return json::object();
}

// ---------------------------------------------------------------------------
// Entry point

inline void print_error(int code, const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

inline int run(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Wearable-based prediction of poor cognition: ingest, features, model selection and evaluation"};
  app.name("cogwear");
  app.set_config("--config", "", "TOML config file with flag values (sections per subcommand)");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "Output root directory")->capture_default_str();
  app.add_option("--run-id", cfg.run_id, "Run directory name (default <subcommand>-seed<seed>)");
  app.add_option("--seed", cfg.seed, "Seed; fully determines randomized behavior");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = logical cores)")->capture_default_str();

  auto existing = [](CLI::Option* o) { return o->check(CLI::ExistingFile); };
  auto add_dataset = [&](CLI::App* s) {
    existing(s->add_option("--features", cfg.features, "features.csv (schema sidecar alongside)")->required());
    existing(s->add_option("--cohort", cfg.cohort, "cohort.csv from ingest")->required());
    s->add_option("--target", cfg.target, "dsst | cerad | aft")->check(CLI::IsMember({"dsst", "cerad", "aft"}))->capture_default_str();
  };
  auto add_policy = [&](CLI::App* s) {
    s->add_option("--policy", cfg.policy, "Validation imputation donors")
        ->check(CLI::IsMember({"train_donors", "separate"}))
        ->capture_default_str();
  };
  auto add_model = [&](CLI::App* s, std::vector<std::string> allowed) {
    s->add_option("--model", cfg.model, "Model type")->check(CLI::IsMember(allowed))->capture_default_str();
  };

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic cohort in the ingest formats");
  sim->add_option("--n", cfg.n, "Participants")->capture_default_str();
  sim->add_option("--days", cfg.days, "Days per participant")->capture_default_str();
  sim->add_option("--prevalence", cfg.prevalence, "Poor-cognition class share")->capture_default_str();
  sim->add_option("--profile", cfg.profile, "rectangular | sinusoid")->capture_default_str();
  sim->add_option("--preset", cfg.preset, "headline | plain")->capture_default_str();

  auto* ing = app.add_subcommand("ingest", "Parse inputs, apply exclusions and label outcomes");
  existing(ing->add_option("--epochs", cfg.epochs, "Epoch CSV")->required());
  existing(ing->add_option("--survey", cfg.survey, "Survey CSV")->required());

  auto* feat = app.add_subcommand("features", "Extract the feature matrix for the cohort");
  existing(feat->add_option("--epochs", cfg.epochs, "Epoch CSV")->required());
  existing(feat->add_option("--survey", cfg.survey, "Survey CSV")->required());
  existing(feat->add_option("--cohort", cfg.cohort, "cohort.csv from ingest")->required());

  auto* sel = app.add_subcommand("select", "Recursive feature elimination over the wearable candidates");
  add_dataset(sel);
  add_policy(sel);
  sel->add_option("--valid-fraction", cfg.valid_fraction, "Held-out share for elimination")->capture_default_str();
  sel->add_option("--rfe-learning-rate", cfg.rfe_learning_rate, "Learning rate during elimination")->capture_default_str();
  sel->add_option("--rfe-iterations", cfg.rfe_iterations, "Tree budget during elimination")->capture_default_str();
  sel->add_option("--rfe-depth", cfg.rfe_depth, "Tree depth during elimination")->capture_default_str();

  auto* tun = app.add_subcommand("tune", "Random hyperparameter search with cross-validated AUC");
  add_dataset(tun);
  add_policy(tun);
  add_model(tun, {"wearable", "combined"});
  existing(tun->add_option("--selection", cfg.selection, "rfe_trace.json from select")->required());
  existing(tun->add_option("--space", cfg.space, "Search space JSON (missing keys keep defaults)"));
  tun->add_option("--trials", cfg.trials, "Number of trials (overrides the space)");
  tun->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();

  auto* ev = app.add_subcommand("evaluate", "Repeated stratified cross-validation");
  add_dataset(ev);
  add_policy(ev);
  add_model(ev, {"benchmark", "wearable", "combined"});
  existing(ev->add_option("--selection", cfg.selection, "rfe_trace.json (boosted models)"));
  existing(ev->add_option("--tuned", cfg.tuned, "tune_result.json (boosted models)"));
  ev->add_option("--repeats", cfg.repeats, "Cross-validation repeats")->capture_default_str();
  ev->add_option("--folds", cfg.folds, "Folds per repeat")->capture_default_str();
  ev->add_option("--ci", cfg.ci, "normal | percentile")->check(CLI::IsMember({"normal", "percentile"}))->capture_default_str();

  auto* imp = app.add_subcommand("importance", "Loss-change and paired importance of a tuned model");
  add_dataset(imp);
  add_policy(imp);
  add_model(imp, {"wearable", "combined"});
  existing(imp->add_option("--selection", cfg.selection, "rfe_trace.json from select")->required());
  existing(imp->add_option("--tuned", cfg.tuned, "tune_result.json from tune")->required());

  auto* rep = app.add_subcommand("report", "Collect evaluation and importance results into tables and plots");
  existing(rep->add_option("--eval", cfg.evals, "Evaluation report JSON (repeatable)")->required());
  existing(rep->add_option("--importance", cfg.importances, "Importance JSON (repeatable)"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    print_error(kExitUsage, "usage", e.what());
    return kExitUsage;
  }

  const std::unordered_map<const CLI::App*, json (*)(const RunConfig&, Run&)> handlers{
      {sim, cmd_simulate}, {ing, cmd_ingest},     {feat, cmd_features}, {sel, cmd_select},
      {tun, cmd_tune},     {ev, cmd_evaluate},    {imp, cmd_importance}, {rep, cmd_report}};
  const auto* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (cfg.run_id.empty()) cfg.run_id = cfg.seed ? cfg.subcommand + "-seed" + std::to_string(*cfg.seed) : cfg.subcommand;
  if (cfg.threads > 0) set_default_threads(cfg.threads);

  try {
    Run r(cfg);
    const auto params = handlers.at(sub)(cfg, r);
    r.finish(cfg, params);
    std::cout << (r.dir() / "manifest.json").string() << '\n';
    return 0;
  } catch (const SchemaError& e) {
    print_error(kExitSchema, "schema", e.what());
    return kExitSchema;
  } catch (const json::exception& e) {
    print_error(kExitSchema, "schema", e.what());
    return kExitSchema;
  } catch (const std::exception& e) {
    print_error(kExitRuntime, "runtime", e.what());
    return kExitRuntime;
  }
}

}  // namespace cogwear::cli
