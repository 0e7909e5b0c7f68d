#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace cogwear;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cogwear");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

int run_binary(const std::string& args) {
  const auto cmd = std::string(COGWEAR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

class CliPipeline : public ::testing::Test {
 protected:
  static inline fs::path root;

  static void SetUpTestSuite() {
    root = fs::temp_directory_path() / "cogwear_cli_test";
    fs::remove_all(root);
    const auto out = root.string();
    ASSERT_EQ(run_cli({"--out", out, "simulate", "--n", "200", "--days", "5", "--seed", "11"}), 0);
    const auto sim = root / "simulate-seed11";
    ASSERT_EQ(run_cli({"--out", out, "ingest", "--epochs", (sim / "epochs.csv").string(), "--survey", (sim / "survey.csv").string()}), 0);
    ASSERT_EQ(run_cli({"--out", out, "features", "--epochs", (sim / "epochs.csv").string(), "--survey", (sim / "survey.csv").string(),
                       "--cohort", (root / "ingest" / "cohort.csv").string()}),
              0);
  }

  static std::vector<std::string> dataset() {
    return {"--features", (root / "features" / "features.csv").string(), "--cohort", (root / "ingest" / "cohort.csv").string()};
  }

  /// select -> tune -> evaluate under `tag`; returns the evaluation JSON path.
  static fs::path modelling(const std::string& tag) {
    const auto out = root.string();
    auto with = [&](std::vector<std::string> a) {
      auto d = dataset();
      a.insert(a.end(), d.begin(), d.end());
      return a;
    };
    const auto sel = root / ("select-" + tag) / "rfe_trace.json";
    const auto tun = root / ("tune-" + tag) / "tune_result.json";
    EXPECT_EQ(run_cli(with({"--out", out, "--run-id", "select-" + tag, "select", "--seed", "5", "--rfe-iterations", "150"})), 0);
    EXPECT_EQ(run_cli(with({"--out", out, "--run-id", "tune-" + tag, "tune", "--seed", "6", "--selection", sel.string(), "--trials", "2",
                            "--folds", "3", "--model", "combined"})),
              0);
    EXPECT_EQ(run_cli(with({"--out", out, "--run-id", "eval-" + tag, "evaluate", "--seed", "7", "--model", "combined", "--selection",
                            sel.string(), "--tuned", tun.string(), "--repeats", "2", "--folds", "5"})),
              0);
    return root / ("eval-" + tag) / "eval_dsst_combined.json";
  }
};

}  // namespace

TEST_F(CliPipeline, IngestAndFeaturesWriteTheirArtifacts) {
  EXPECT_TRUE(fs::exists(root / "ingest" / "ingest_report.json"));
  EXPECT_TRUE(fs::exists(root / "features" / "features.schema.json"));
  EXPECT_TRUE(fs::exists(root / "features" / "cohort_summary.csv"));
  const auto report = nlohmann::json::parse(slurp(root / "ingest" / "ingest_report.json"));
  EXPECT_EQ(report["cohort_size"].get<int>(), 200);
  const auto manifest = nlohmann::json::parse(slurp(root / "features" / "manifest.json"));
  EXPECT_EQ(manifest["artifacts"].size(), 3u);
  EXPECT_EQ(manifest["inputs"].size(), 3u);
  for (const auto& a : manifest["artifacts"])
    EXPECT_EQ(a["sha256"].get<std::string>(), cli::sha256_hex(slurp(root / "features" / a["file"].get<std::string>())));
}

TEST_F(CliPipeline, SmokePathEmitsOneEvalReportAndIsByteIdentical) {
  const auto a = modelling("a");
  ASSERT_TRUE(fs::exists(a));
  const auto rep = eval_report_from_json(nlohmann::json::parse(slurp(a)));
  EXPECT_EQ(rep.aucs.size(), 10u);
  EXPECT_EQ(rep.model, "combined");

  const auto out = root.string();
  ASSERT_EQ(run_cli({"--out", out, "--run-id", "report-a", "report", "--eval", a.string()}), 0);
  std::size_t evals = 0;
  for (const auto& e : fs::directory_iterator(root / "report-a")) evals += e.path().filename().string().rfind("eval_", 0) == 0;
  EXPECT_EQ(evals, 1u);

  const auto b = modelling("b");
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(root / "select-a" / "rfe_trace.json"), slurp(root / "select-b" / "rfe_trace.json"));
  EXPECT_EQ(slurp(root / "tune-a" / "tune_result.json"), slurp(root / "tune-b" / "tune_result.json"));
}

TEST_F(CliPipeline, ThreadCountDoesNotChangeOutput) {
  const auto out = root.string();
  auto d = dataset();
  std::vector<std::string> one{"--out", out, "--threads", "1", "--run-id", "t1", "evaluate", "--seed", "3", "--model", "benchmark",
                               "--repeats", "3"};
  std::vector<std::string> four{"--out", out, "--threads", "4", "--run-id", "t4", "evaluate", "--seed", "3", "--model", "benchmark",
                                "--repeats", "3"};
  one.insert(one.end(), d.begin(), d.end());
  four.insert(four.end(), d.begin(), d.end());
  ASSERT_EQ(run_cli(one), 0);
  ASSERT_EQ(run_cli(four), 0);
  set_default_threads(0);
  EXPECT_EQ(slurp(root / "t1" / "eval_dsst_benchmark.json"), slurp(root / "t4" / "eval_dsst_benchmark.json"));
}

TEST_F(CliPipeline, ExitCodes) {
  const auto d = dataset();
  const auto ds = " " + d[0] + " " + d[1] + " " + d[2] + " " + d[3];
  const auto out = " --out " + (root / "codes").string();
  EXPECT_EQ(run_binary(out + " evaluate --no-such-flag" + ds), 2);
  EXPECT_EQ(run_binary(out), 2);
  EXPECT_EQ(run_binary(out + " evaluate --model benchmark --target memory --seed 1" + ds), 2);
  EXPECT_EQ(run_binary("--help"), 0);
  // Cohort labels passed where features are expected.
  EXPECT_EQ(run_binary(out + " evaluate --model benchmark --seed 1 --features " + d[3] + " --cohort " + d[3]), 3);
  // A tune result passed where an evaluation report is expected.
  write_text_file(root / "codes" / "not_eval.json", "{\"schema_version\": 1, \"kind\": \"rfe_trace\"}");
  EXPECT_EQ(run_binary(out + " report --eval " + (root / "codes" / "not_eval.json").string()), 3);
  // Missing seed is a runtime error.
  EXPECT_EQ(run_binary(out + " evaluate --model benchmark" + ds), 1);
}
