#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xaibench/harness/benchmark.hpp"
#include "xaibench/harness/cli.hpp"

using namespace xaibench;
using namespace xaibench::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("xaibench_harness_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// A small but complete run: every method, every metric, both models.
BenchmarkConfig small_config(const fs::path& out) {
  auto j = nlohmann::json::parse(R"({
    "dataset": {"type": "synthetic", "params": {"n_samples": 120, "dim": 5, "n_clusters": 3}},
    "explainer_params": {"lime": {"n_samples": 100}, "smoothgrad": {"n_samples": 20}, "ig": {"n_steps": 8}},
    "perturbation": {"n_perturbations": 10},
    "stability": {"n_neighbors": 5},
    "train": {"epochs": 5},
    "subgroup": {"feature": "x0", "threshold": 3.0},
    "max_instances": 12
  })");
  auto cfg = parse_config(j);
  cfg.output_dir = out.string();
  return cfg;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "xaibench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

Cell cell(double mean, double se, std::size_t n) {
  Cell c;
  c.mean = mean;
  c.std_error = se;
  c.n = n;
  return c;
}

}  // namespace

TEST(Config, DefaultsAreTheFullBenchmark) {
  const auto cfg = parse_config(nlohmann::json::object());
  EXPECT_EQ(cfg.explainers.size(), 7u);
  EXPECT_EQ(cfg.metrics.size(), 22u);
  EXPECT_EQ(cfg.models.size(), 2u);
  EXPECT_EQ(cfg.topk.resolve(20), 5);
  EXPECT_EQ(cfg.train_config().seed, cfg.seed);
}

TEST(Config, ValidationErrors) {
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"explainers": ["nope"]})")), ConfigError);
  auto cfg = parse_config(nlohmann::json::parse(R"({"explainers": []})"));
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = parse_config(nlohmann::json::parse(R"({"metrics": []})"));
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = parse_config(nlohmann::json::parse(R"({"dataset": {"type": "csv", "path": "/no/such.csv", "target": "y"}})"));
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(run_benchmark(cfg), ConfigError);
}

TEST(Config, FingerprintIgnoresExecutionSettings) {
  auto a = parse_config(nlohmann::json::object());
  auto b = a;
  b.workers = 8;
  b.output_dir = "elsewhere";
  b.formats = {"json"};
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  b.seed = 1;
  EXPECT_NE(fingerprint(a), fingerprint(b));
  EXPECT_EQ(fingerprint(a).size(), 64u);
}

TEST(Leaderboard, SingleMethodTableHasNoBold) {
  Leaderboard lb;
  lb.fingerprint = "f";
  LeaderboardTable t{"d", "lr", {"Random"}, {metrics::parse_metric("PGI")}, {{cell(0.2, 0.01, 3)}}};
  lb.tables.push_back(t);
  const auto md = to_markdown(lb);
  EXPECT_EQ(md.find("**"), std::string::npos);
  EXPECT_NE(md.find("| Random | 0.200 ± 0.010 |"), std::string::npos);
}

TEST(Leaderboard, BoldsByMetricDirection) {
  Leaderboard lb;
  lb.fingerprint = "f";
  LeaderboardTable t{"d",
                     "lr",
                     {"A", "B"},
                     {metrics::parse_metric("PGU"), metrics::parse_metric("PGI")},
                     {{cell(0.1, 0.0, 2), cell(0.3, 0.0, 2)}, {cell(0.2, 0.0, 2), cell(0.4, 0.0, 2)}}};
  EXPECT_EQ(t.best_rows(0), std::vector<std::size_t>{0});
  EXPECT_EQ(t.best_rows(1), std::vector<std::size_t>{1});
  lb.tables.push_back(t);
  const auto md = to_markdown(lb);
  EXPECT_NE(md.find("| A | **0.100 ± 0.000** | 0.300 ± 0.000 |"), std::string::npos);
  EXPECT_NE(md.find("| B | 0.200 ± 0.000 | **0.400 ± 0.000** |"), std::string::npos);
}

TEST(Leaderboard, JsonRoundTripIsExact) {
  Leaderboard lb;
  lb.fingerprint = "abc";
  Cell undefined;
  undefined.n_undefined = 4;
  undefined.note = "no ground truth";
  Cell fair = cell(0.1 + 0.2, 1.0 / 3.0, 7);
  fair.subgroups = metrics::SubgroupSummary{0.5, 0.2, 0.3, 5, 2, 1};
  lb.tables.push_back({"d", "ann", {"A", "B"}, {metrics::parse_metric("RC"), metrics::parse_metric("RC_disparity")},
                       {{cell(std::nextafter(1.0, 0.0), 1e-300, 3), undefined}, {cell(-0.0, kNaN, 1), fair}}});
  const auto back = leaderboard_from_json(nlohmann::json::parse(to_json(lb).dump()));
  EXPECT_TRUE(back == lb);
  EXPECT_EQ(to_json(back).dump(), to_json(lb).dump());
  EXPECT_THROW(leaderboard_from_json(nlohmann::json::parse(R"({"tables": 3})")), ParseError);
}

TEST(Benchmark, ProducesCompleteTables) {
  const auto dir = scratch("complete");
  const auto cfg = small_config(dir);
  const auto r = run_benchmark(cfg);
  ASSERT_EQ(r.leaderboard.tables.size(), 2u);
  for (const auto& t : r.leaderboard.tables) {
    ASSERT_EQ(t.methods.size(), 7u);
    ASSERT_EQ(t.metrics.size(), 22u);
    for (const auto& row : t.cells) {
      ASSERT_EQ(row.size(), 22u);
      for (const auto& c : row) EXPECT_TRUE(c.defined() || !c.note.empty());
    }
  }
  const auto& lr = r.leaderboard.tables[0];
  EXPECT_EQ(lr.at("VanillaGrad", "PRA").mean, 1.0);
  EXPECT_EQ(lr.at("VanillaGrad", "FA").mean, 1.0);
}

TEST(Benchmark, WorkerCountDoesNotChangeOutputs) {
  const auto d1 = scratch("w1"), d3 = scratch("w3");
  auto c1 = small_config(d1);
  auto c3 = small_config(d3);
  c3.workers = 3;
  write_outputs(run_benchmark(c1), c1);
  write_outputs(run_benchmark(c3), c3);
  for (const char* f :
       {"leaderboard.md", "leaderboard.csv", "leaderboard.json", "explanations.csv", "explanations.jsonl", "metrics.csv"})
    EXPECT_EQ(slurp(d1 / f), slurp(d3 / f)) << f;
}

TEST(Benchmark, RerunServesEverythingFromCache) {
  const auto dir = scratch("cache");
  const auto cfg = small_config(dir);
  const auto first = run_benchmark(cfg);
  const auto second = run_benchmark(cfg);
  for (const auto& run : second.runs) {
    EXPECT_EQ(run.computed, 0u);
    EXPECT_TRUE(run.model_from_cache);
  }
  EXPECT_EQ(to_json(first.leaderboard).dump(), to_json(second.leaderboard).dump());
  EXPECT_EQ(explanations_csv(first, cfg), explanations_csv(second, cfg));
}

TEST(Benchmark, CsvWithoutProtectedColumnMarksDisparityUndefined) {
  const auto dir = scratch("csv");
  std::ofstream f(dir / "toy.csv");
  f << "a,b,c,y\n";
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    f << a << ',' << b << ',' << c << ',' << (a + 0.5 * b > 0 ? 1 : 0) << '\n';
  }
  f.close();
  auto cfg = parse_config(nlohmann::json::parse(R"({
    "dataset": {"type": "csv", "path": "toy.csv", "target": "y"},
    "explainers": ["grad", "random"],
    "perturbation": {"n_perturbations": 5}, "stability": {"n_neighbors": 3},
    "max_instances": 5})"),
                          dir);
  cfg.output_dir = (dir / "out").string();
  const auto r = run_benchmark(cfg);
  const auto& lr = r.leaderboard.tables[0];
  const auto& ann = r.leaderboard.tables[1];
  EXPECT_TRUE(r.data.standardized);
  EXPECT_FALSE(lr.at("VanillaGrad", "PGI_disparity").defined());
  EXPECT_EQ(lr.at("VanillaGrad", "PGI_disparity").note, "no protected attribute or subgroup rule configured");
  EXPECT_TRUE(lr.at("VanillaGrad", "PRA").defined());
  EXPECT_FALSE(ann.at("VanillaGrad", "PRA").defined());
  EXPECT_EQ(ann.at("VanillaGrad", "PRA").n_undefined, 5u);
  EXPECT_TRUE(ann.at("VanillaGrad", "PGI").defined());
}

TEST(Benchmark, StageFailuresCarryContext) {
  const auto dir = scratch("ctx");
  auto cfg = small_config(dir);
  models::save_model(models::Model(models::LinearModel(3, 2)), (dir / "narrow.json").string());
  cfg.models = {{models::Family::logistic, (dir / "narrow.json").string()}};
  try {
    run_benchmark(cfg);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("train[lr]"), std::string::npos) << e.what();
  }
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  std::string out, err;
  EXPECT_EQ(run_cli({"frobnicate"}, &out, &err), 1);
  EXPECT_NE(err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({}), 1);
}

TEST(Cli, BenchmarkHappyPathWritesEveryFile) {
  const auto dir = scratch("cli");
  const std::string cmd = std::string(XAIBENCH_CLI) + " benchmark --config " + XAIBENCH_SOURCE_DIR +
                          "/fixtures/synth.json --out " + dir.string() + " > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  for (const char* f : {"leaderboard.md", "leaderboard.csv", "leaderboard.json", "explanations.csv", "metrics.csv",
                        "run_metadata.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  std::string out;
  EXPECT_EQ(run_cli({"leaderboard", "--input", (dir / "leaderboard.json").string()}, &out), 0);
  EXPECT_EQ(out, slurp(dir / "leaderboard.md"));
}

TEST(Cli, GenerateIsDeterministic) {
  const auto a = scratch("gen_a"), b = scratch("gen_b");
  EXPECT_EQ(run_cli({"generate", "--seed", "7", "--out", a.string()}), 0);
  EXPECT_EQ(run_cli({"generate", "--seed", "7", "--out", b.string()}), 0);
  for (const char* f : {"train.csv", "test.csv", "ground_truth.csv", "synthetic.json"}) {
    ASSERT_TRUE(fs::exists(a / f));
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, ExitCodesForValidationAndRuntimeFailures) {
  const auto dir = scratch("codes");
  EXPECT_EQ(run_cli({"benchmark", "--config", (dir / "missing.json").string()}), 1);
  std::ofstream(dir / "bad.json") << R"({"explainers": []})";
  EXPECT_EQ(run_cli({"benchmark", "--config", (dir / "bad.json").string()}), 1);
  std::ofstream(dir / "ok.json") << R"({"dataset": {"params": {"n_samples": 60, "dim": 3, "n_clusters": 2}},
                                       "explainers": ["grad"], "max_instances": 2})";
  EXPECT_EQ(run_cli({"evaluate", "--config", (dir / "ok.json").string(), "--explanations",
                     (dir / "none.csv").string(), "--out", dir.string()}),
            2);
}

TEST(Cli, ExplainThenEvaluateMatchesBenchmark) {
  const auto dir = scratch("stages");
  const std::string cfg = std::string(XAIBENCH_SOURCE_DIR) + "/fixtures/synth.json";
  ASSERT_EQ(run_cli({"benchmark", "--config", cfg, "--out", (dir / "full").string(), "--format", "json"}), 0);
  ASSERT_EQ(run_cli({"explain", "--config", cfg, "--out", (dir / "x").string()}), 0);
  EXPECT_EQ(slurp(dir / "x" / "explanations.csv"), slurp(dir / "full" / "explanations.csv"));
  ASSERT_EQ(run_cli({"evaluate", "--config", cfg, "--explanations", (dir / "x" / "explanations.csv").string(),
                     "--out", (dir / "e").string(), "--format", "json"}),
            0);
  EXPECT_EQ(slurp(dir / "e" / "leaderboard.json"), slurp(dir / "full" / "leaderboard.json"));
  ASSERT_EQ(run_cli({"train", "--config", cfg, "--out", (dir / "m").string()}), 0);
  EXPECT_TRUE(fs::exists(dir / "m" / "model_ann.json"));
}
