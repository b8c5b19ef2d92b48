//
// Copyright 2026 The drodp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "drodp/experiment.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drodp/textio.h"
#include "gtest/gtest.h"

namespace drodp {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.is_open()) << path;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string TempDir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("drodp_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string BaseConfigJson(const std::string& out_dir) {
  return R"({
    "name": "t",
    "generate": {"n": 40, "d": 3, "imratio": 0.2, "seed": 5},
    "oracle": "logistic",
    "divergence": "chi2",
    "lambda": 1.0,
    "optimizer": "double-spider",
    "epsilon": 1.0,
    "delta": 1e-5,
    "seeds": [1, 2, 3],
    "eval_every": 4,
    "out": ")" + out_dir + R"(",
    "double_spider": {"T": 12, "q": 4, "N2": 4, "N4": 4}
  })";
}

TEST(ExperimentConfig, ParsesFieldsAndValidates) {
  const ExperimentConfig cfg = ExperimentConfig::FromJsonText(
      BaseConfigJson("/tmp/x"));
  EXPECT_EQ(cfg.name, "t");
  ASSERT_TRUE(cfg.generate.has_value());
  EXPECT_EQ(cfg.generate->n, 40);
  EXPECT_EQ(cfg.optimizer, "double-spider");
  EXPECT_EQ(cfg.seeds.size(), 3u);
  EXPECT_EQ(cfg.double_spider.t, 12);

  EXPECT_THROW(ExperimentConfig::FromJsonText(R"({"seeds": []})"),
               std::invalid_argument);
  EXPECT_ANY_THROW(ExperimentConfig::FromJsonText("{nonsense"));
}

TEST(ExperimentConfig, EpsilonInfString) {
  const ExperimentConfig cfg = ExperimentConfig::FromJsonText(
      R"({"epsilon": "inf", "seeds": [1]})");
  EXPECT_TRUE(std::isinf(cfg.budget.epsilon));
}

TEST(RunExperiment, OneTraceAndRowPerSeed) {
  const std::string dir = TempDir("cardinality");
  const ExperimentConfig cfg =
      ExperimentConfig::FromJsonText(BaseConfigJson(dir));
  const ExperimentResult result = RunExperiment(cfg);
  EXPECT_EQ(result.rows.size(), 3u);
  EXPECT_EQ(result.trace_files.size(), 3u);
  for (const std::string& f : result.trace_files) {
    EXPECT_TRUE(fs::exists(f)) << f;
  }
  EXPECT_TRUE(fs::exists(fs::path(dir) / "t_summary.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "t_aggregate.csv"));
  EXPECT_FALSE(result.any_aborted);
}

TEST(RunExperiment, RerunIsByteIdentical) {
  const std::string dir_a = TempDir("rerun_a");
  const std::string dir_b = TempDir("rerun_b");
  const ExperimentResult ra =
      RunExperiment(ExperimentConfig::FromJsonText(BaseConfigJson(dir_a)));
  const ExperimentResult rb =
      RunExperiment(ExperimentConfig::FromJsonText(BaseConfigJson(dir_b)));
  ASSERT_EQ(ra.trace_files.size(), rb.trace_files.size());
  for (size_t i = 0; i < ra.trace_files.size(); ++i) {
    EXPECT_EQ(ReadFile(ra.trace_files[i]), ReadFile(rb.trace_files[i]));
  }
  EXPECT_EQ(ReadFile(dir_a + "/t_summary.csv"), ReadFile(dir_b + "/t_summary.csv"));
  EXPECT_EQ(ReadFile(dir_a + "/t_aggregate.csv"),
            ReadFile(dir_b + "/t_aggregate.csv"));
}

TEST(RunExperiment, TraceSchema) {
  const std::string dir = TempDir("schema");
  const ExperimentConfig cfg =
      ExperimentConfig::FromJsonText(BaseConfigJson(dir));
  const ExperimentResult result = RunExperiment(cfg);
  const std::string csv = ReadFile(result.trace_files[0]);
  std::stringstream ss(csv);
  std::string line;
  ASSERT_TRUE(std::getline(ss, line));
  EXPECT_EQ(line, "t,est_norm_x,est_norm_eta,true_grad_norm,objective,clamps,wall_ms");
  int rows = 0;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    ASSERT_EQ(fields.size(), 7u) << line;
    const long t = std::stol(fields[0]);
    // true_grad_norm present exactly at eval steps (multiples of eval_every
    // plus the final row).
    const bool eval_step = t % 4 == 0 || t == 11;
    EXPECT_EQ(!fields[3].empty(), eval_step) << line;
    for (int i : {1, 2, 4, 6}) EXPECT_FALSE(fields[i].empty()) << line;
    // Timing is off by default, so reruns stay byte-identical.
    EXPECT_EQ(fields[6], "0");
    ++rows;
  }
  EXPECT_EQ(rows, 12);
}

TEST(RunExperiment, AggregateMatchesTraceRecomputation) {
  const std::string dir = TempDir("aggregate");
  const ExperimentConfig cfg =
      ExperimentConfig::FromJsonText(BaseConfigJson(dir));
  const ExperimentResult result = RunExperiment(cfg);

  // Recompute the mean/std of the final true gradient norm from the trace
  // files themselves (last row, 4th column).
  std::vector<double> finals;
  for (const std::string& f : result.trace_files) {
    std::stringstream ss(ReadFile(f));
    std::string line, last;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
      if (!line.empty()) last = line;
    }
    std::stringstream ls(last);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    finals.push_back(ParseDouble(fields[3]));
  }
  double mean = 0;
  for (double v : finals) mean += v;
  mean /= finals.size();
  double var = 0;
  for (double v : finals) var += (v - mean) * (v - mean);
  const double std_dev = std::sqrt(var / finals.size());

  const std::string agg = ReadFile(dir + "/t_aggregate.csv");
  std::stringstream ss(agg);
  std::string line;
  std::getline(ss, line);  // header
  ASSERT_TRUE(std::getline(ss, line));
  std::vector<std::string> fields;
  std::stringstream ls(line);
  std::string field;
  while (std::getline(ls, field, ',')) fields.push_back(field);
  ASSERT_GE(fields.size(), 6u);
  EXPECT_NEAR(ParseDouble(fields[4]), mean, 1e-12);
  EXPECT_NEAR(ParseDouble(fields[5]), std_dev, 1e-12);
}

TEST(RunExperiment, SweepCartesianGrid) {
  const std::string dir = TempDir("sweep");
  std::string json = BaseConfigJson(dir);
  json.insert(json.rfind('}'), R"(,
    "sweep": {"optimizers": ["double-spider", "dp-sgda"],
              "epsilons": [0.5, "inf"]},
    "sgda": {"T": 12, "batch": 8}
  )");
  const ExperimentConfig cfg = ExperimentConfig::FromJsonText(json);
  const ExperimentResult result = RunExperiment(cfg);
  // 2 optimizers x 2 epsilons x 3 seeds
  EXPECT_EQ(result.rows.size(), 12u);
  int ds = 0, sgda = 0;
  for (const SummaryRow& row : result.rows) {
    if (row.optimizer == "double-spider") ++ds;
    if (row.optimizer == "dp-sgda") ++sgda;
  }
  EXPECT_EQ(ds, 6);
  EXPECT_EQ(sgda, 6);
}

TEST(RunExperiment, EvalRecomputesSavedIterate) {
  const std::string dir = TempDir("eval");
  const ExperimentConfig cfg =
      ExperimentConfig::FromJsonText(BaseConfigJson(dir));
  const ExperimentResult result = RunExperiment(cfg);
  const std::string iterate =
      dir + "/t_double-spider_eps1_n40_seed1_iterate.json";
  ASSERT_TRUE(fs::exists(iterate));
  const double norm = EvaluateIterateFile(cfg, iterate);
  // Seed 1 is the first row after sorting.
  EXPECT_NEAR(norm, result.rows[0].final_true_grad_norm, 1e-12);
}

TEST(RunExperiment, RecursiveSpiderPathAndGnuplot) {
  const std::string dir = TempDir("recursive");
  const std::string json = R"({
    "name": "r",
    "generate": {"n": 20, "d": 2, "imratio": 0.25, "seed": 9},
    "oracle": "smoothed-hinge",
    "optimizer": "recursive-spider",
    "epsilon": "inf",
    "rho": 0.1,
    "lambda_min": 0.5,
    "seeds": [4],
    "eval_every": 5,
    "emit_gnuplot": true,
    "out": ")" + dir + R"(",
    "recursive_spider": {"T": 10, "q": 5, "eta": 0.05}
  })";
  const ExperimentConfig cfg = ExperimentConfig::FromJsonText(json);
  const ExperimentResult result = RunExperiment(cfg);
  EXPECT_EQ(result.rows.size(), 1u);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "r_plot.gp"));
  const std::string iterate = dir + "/r_recursive-spider_epsinf_n20_seed4_iterate.json";
  ASSERT_TRUE(fs::exists(iterate));
  EXPECT_NEAR(EvaluateIterateFile(cfg, iterate),
              result.rows[0].final_true_grad_norm, 1e-12);
}

TEST(RunExperiment, TimingFlagPopulatesRuntime) {
  const std::string dir = TempDir("timing");
  std::string json = BaseConfigJson(dir);
  json.insert(json.rfind('}'), R"(, "timing": true)");
  const ExperimentConfig cfg = ExperimentConfig::FromJsonText(json);
  const ExperimentResult result = RunExperiment(cfg);
  for (const SummaryRow& row : result.rows) EXPECT_GT(row.runtime_ms, 0.0);
}

TEST(RunExperiment, MissingDatasetFails) {
  ExperimentConfig cfg;
  cfg.seeds = {1};
  cfg.dataset_path = "/nonexistent/file.csv";
  EXPECT_THROW(RunExperiment(cfg), std::invalid_argument);
}

TEST(RunExperiment, UnknownOptimizerFails) {
  const std::string dir = TempDir("badopt");
  std::string json = BaseConfigJson(dir);
  ExperimentConfig cfg = ExperimentConfig::FromJsonText(json);
  cfg.optimizer = "adam";
  EXPECT_THROW(RunExperiment(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace drodp
