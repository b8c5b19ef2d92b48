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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "drodp/compositional.h"
#include "drodp/dual_objective.h"
#include "drodp/mechanisms.h"
#include "drodp/textio.h"

namespace drodp {
namespace {

using nlohmann::json;

double ParseEpsilonValue(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
    return ParseDouble(s);
  }
  return j.get<double>();
}

std::string ShortNumber(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void ReadThresholds(const json& j, ClipThresholds& c) {
  if (j.contains("C1")) c.c1 = j.at("C1").get<double>();
  if (j.contains("C2")) c.c2 = j.at("C2").get<double>();
  if (j.contains("C3")) c.c3 = j.at("C3").get<double>();
  if (j.contains("C4")) c.c4 = j.at("C4").get<double>();
  if (j.contains("C5")) c.c5 = j.at("C5").get<double>();
}

void ReadDoubleSpider(const json& j, DoubleSpiderConfig& cfg) {
  if (j.contains("T")) cfg.t = j.at("T").get<long>();
  if (j.contains("q")) cfg.q = j.at("q").get<long>();
  if (j.contains("N1")) cfg.n1 = j.at("N1").get<long>();
  if (j.contains("N2")) cfg.n2 = j.at("N2").get<long>();
  if (j.contains("N3")) cfg.n3 = j.at("N3").get<long>();
  if (j.contains("N4")) cfg.n4 = j.at("N4").get<long>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("movement_thresholds")) {
    cfg.movement_thresholds = j.at("movement_thresholds").get<bool>();
  }
  ReadThresholds(j, cfg.thresholds);
}

void ReadRecursiveSpider(const json& j, RecursiveSpiderConfig& cfg) {
  if (j.contains("T")) cfg.t = j.at("T").get<long>();
  if (j.contains("q")) cfg.q = j.at("q").get<long>();
  if (j.contains("b1")) cfg.b1 = j.at("b1").get<long>();
  if (j.contains("b2")) cfg.b2 = j.at("b2").get<long>();
  if (j.contains("b3")) cfg.b3 = j.at("b3").get<long>();
  if (j.contains("b4")) cfg.b4 = j.at("b4").get<long>();
  if (j.contains("eta")) cfg.eta_step = j.at("eta").get<double>();
  if (j.contains("eta_adaptive")) cfg.eta_adaptive = j.at("eta_adaptive").get<bool>();
  if (j.contains("eta_k")) cfg.eta_k = j.at("eta_k").get<double>();
  if (j.contains("eta_m")) cfg.eta_m = j.at("eta_m").get<double>();
  if (j.contains("eta_sigma_sq")) cfg.eta_sigma_sq = j.at("eta_sigma_sq").get<double>();
  if (j.contains("beta_c")) cfg.beta_momentum_c = j.at("beta_c").get<double>();
  if (j.contains("storm_conventional")) {
    cfg.storm_conventional = j.at("storm_conventional").get<bool>();
  }
  ReadThresholds(j, cfg.thresholds);
}

void ReadSgda(const json& j, SgdaConfig& cfg) {
  if (j.contains("T")) cfg.t = j.at("T").get<long>();
  if (j.contains("batch")) cfg.batch = j.at("batch").get<long>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("C_eta")) cfg.c_eta = j.at("C_eta").get<double>();
  if (j.contains("C_x")) cfg.c_x = j.at("C_x").get<double>();
}

struct Combo {
  std::string optimizer;
  double epsilon;
  long n;
  uint64_t seed;
};

struct ProblemBundle {
  Dataset data;
  LossOracle oracle;
  Divergence divergence;
  SmoothnessConstants constants;
};

ProblemBundle BuildBundle(const ExperimentConfig& cfg, long n_override) {
  Dataset data = [&]() {
    if (cfg.generate.has_value()) {
      const GenerateSpec& g = *cfg.generate;
      const int n = n_override > 0 ? static_cast<int>(n_override) : g.n;
      return MakeImbalancedDataset(n, g.d, g.imratio, g.seed);
    }
    if (cfg.dataset_path.empty()) {
      throw std::invalid_argument("config: dataset or generate section required");
    }
    Dataset d = Dataset::FromCsv(cfg.dataset_path);
    if (n_override > 0 && n_override != d.size()) {
      throw std::invalid_argument(
          "config: an n-sweep needs a generate section, not a fixed dataset file");
    }
    return d;
  }();
  LossOracle oracle = LossOracle::For(cfg.oracle, data);
  Divergence divergence = Divergence::Parse(cfg.divergence);
  const double sigma_var = EstimateSigmaVar(data, oracle);
  SmoothnessConstants constants = ComputeSmoothnessConstants(
      oracle.lipschitz_g(), oracle.smooth_l(), divergence.smooth_m(),
      cfg.lambda, sigma_var, divergence.domain_bound_s0());
  return ProblemBundle{std::move(data), std::move(oracle),
                       std::move(divergence), constants};
}

RunTrace RunOne(const ExperimentConfig& cfg, const ProblemBundle& bundle,
                const Combo& combo) {
  const PrivacyBudget budget{combo.epsilon, cfg.budget.delta};
  const long n = bundle.data.size();
  Rng rng(combo.seed);
  if (combo.optimizer == "double-spider") {
    DoubleSpiderConfig ds = cfg.double_spider;
    ds.budget = budget;
    ds.seed = combo.seed;
    ds.eval_every = cfg.eval_every;
    ds.constants = bundle.constants;
    ds.clip_mode = cfg.clip_mode;
    ds.timing = cfg.timing;
    const ResolvedBatches b = ResolveDoubleSpiderBatches(ds, n);
    const NoisePlan plan = NoisePlanDoubleSpider(
        ds.constants, ds.thresholds, ds.t, ds.q, n, b.increment_scalar,
        b.increment_x, budget, cfg.mech_c);
    DualProblem problem(&bundle.data, &bundle.oracle, bundle.divergence,
                        cfg.lambda);
    return DpDoubleSpider(problem, ds, plan, rng);
  }
  if (combo.optimizer == "recursive-spider") {
    RecursiveSpiderConfig rs = cfg.recursive_spider;
    rs.budget = budget;
    rs.seed = combo.seed;
    rs.eval_every = cfg.eval_every;
    rs.clip_mode = cfg.clip_mode;
    rs.exact_lambda_grad = cfg.exact_lambda_grad;
    rs.timing = cfg.timing;
    const ResolvedBatches b = ResolveRecursiveBatches(rs, n);
    const NoisePlan plan =
        NoisePlanRecursive(rs.thresholds, rs.t, rs.q, n, b.increment_x,
                           b.increment_scalar, budget, cfg.mech_c);
    CompProblem problem(&bundle.data, &bundle.oracle, cfg.rho, cfg.lambda_min);
    return DpRecursiveSpider(problem, rs, plan, rng);
  }
  if (combo.optimizer == "dp-sgda") {
    SgdaConfig sg = cfg.sgda;
    sg.budget = budget;
    sg.seed = combo.seed;
    sg.eval_every = cfg.eval_every;
    sg.mech_c = cfg.mech_c;
    sg.timing = cfg.timing;
    DualProblem problem(&bundle.data, &bundle.oracle, bundle.divergence,
                        cfg.lambda);
    return DpSgda(problem, sg, rng);
  }
  throw std::invalid_argument("unknown optimizer: " + combo.optimizer);
}

std::string RunFileStem(const ExperimentConfig& cfg, const Combo& combo) {
  return cfg.name + "_" + combo.optimizer + "_eps" + ShortNumber(combo.epsilon) +
         "_n" + std::to_string(combo.n) + "_seed" + std::to_string(combo.seed);
}

std::string IterateToJson(const std::string& optimizer, const RunTrace& trace) {
  json j;
  j["optimizer"] = optimizer;
  j["x"] = std::vector<double>(trace.final_x.data(),
                               trace.final_x.data() + trace.final_x.size());
  const char* scalar_name = optimizer == "recursive-spider" ? "lambda" : "eta";
  j[scalar_name] = trace.final_scalar;
  j["output_index"] = trace.output_index;
  if (trace.output_x.size() > 0) {
    j["output_x"] = std::vector<double>(
        trace.output_x.data(), trace.output_x.data() + trace.output_x.size());
    j[std::string("output_") + scalar_name] = trace.output_scalar;
  }
  return j.dump(2) + "\n";
}

std::string GnuplotScript(const ExperimentConfig& cfg,
                          const std::vector<std::string>& trace_files) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set logscale y\n";
  s += "set xlabel 't'\n";
  s += "set ylabel 'true gradient norm'\n";
  s += "plot ";
  for (size_t i = 0; i < trace_files.size(); ++i) {
    if (i > 0) s += ", \\\n     ";
    s += "'" + trace_files[i] + "' using 1:4 with lines title '" +
         std::filesystem::path(trace_files[i]).stem().string() + "'";
  }
  s += "\n";
  (void)cfg;
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJsonText(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
  if (j.contains("dataset")) cfg.dataset_path = j.at("dataset").get<std::string>();
  if (j.contains("generate")) {
    const json& g = j.at("generate");
    GenerateSpec spec;
    spec.n = g.at("n").get<int>();
    spec.d = g.at("d").get<int>();
    spec.imratio = g.value("imratio", 0.1);
    spec.seed = g.value("seed", uint64_t{0});
    cfg.generate = spec;
  }
  if (j.contains("oracle")) cfg.oracle = ParseLossKind(j.at("oracle").get<std::string>());
  if (j.contains("divergence")) cfg.divergence = j.at("divergence").get<std::string>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
  if (j.contains("lambda_min")) cfg.lambda_min = j.at("lambda_min").get<double>();
  if (j.contains("s0")) cfg.s0 = j.at("s0").get<double>();
  if (j.contains("optimizer")) cfg.optimizer = j.at("optimizer").get<std::string>();
  if (j.contains("epsilon")) cfg.budget.epsilon = ParseEpsilonValue(j.at("epsilon"));
  if (j.contains("delta")) cfg.budget.delta = j.at("delta").get<double>();
  if (j.contains("mech_c")) cfg.mech_c = j.at("mech_c").get<double>();
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  if (j.contains("eval_every")) cfg.eval_every = j.at("eval_every").get<long>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("double_spider")) ReadDoubleSpider(j.at("double_spider"), cfg.double_spider);
  if (j.contains("recursive_spider")) {
    ReadRecursiveSpider(j.at("recursive_spider"), cfg.recursive_spider);
  }
  if (j.contains("sgda")) ReadSgda(j.at("sgda"), cfg.sgda);
  if (j.contains("clip_mode")) cfg.clip_mode = ParseClipMode(j.at("clip_mode").get<std::string>());
  if (j.contains("exact_lambda_grad")) cfg.exact_lambda_grad = j.at("exact_lambda_grad").get<bool>();
  if (j.contains("timing")) cfg.timing = j.at("timing").get<bool>();
  if (j.contains("emit_gnuplot")) cfg.emit_gnuplot = j.at("emit_gnuplot").get<bool>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    SweepSpec sweep;
    if (s.contains("optimizers")) {
      sweep.optimizers = s.at("optimizers").get<std::vector<std::string>>();
    }
    if (s.contains("epsilons")) {
      for (const json& e : s.at("epsilons")) sweep.epsilons.push_back(ParseEpsilonValue(e));
    }
    if (s.contains("ns")) sweep.ns = s.at("ns").get<std::vector<long>>();
    cfg.sweep = sweep;
  }
  if (cfg.seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
  return cfg;
}

ExperimentConfig ExperimentConfig::FromJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

std::string TraceToCsv(const RunTrace& trace) {
  std::string out = "t,est_norm_x,est_norm_eta,true_grad_norm,objective,clamps,wall_ms\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.t);
    out += ',';
    out += FormatDouble(row.est_norm_x);
    out += ',';
    out += FormatDouble(row.est_norm_eta);
    out += ',';
    if (row.true_grad_norm.has_value()) out += FormatDouble(*row.true_grad_norm);
    out += ',';
    out += FormatDouble(row.objective);
    out += ',';
    out += std::to_string(row.clamps);
    out += ',';
    out += FormatDouble(row.wall_ms);
    out += '\n';
  }
  return out;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  std::vector<std::string> optimizers{cfg.optimizer};
  std::vector<double> epsilons{cfg.budget.epsilon};
  std::vector<long> ns{0};  // 0 -> base dataset size
  if (cfg.sweep.has_value()) {
    if (!cfg.sweep->optimizers.empty()) optimizers = cfg.sweep->optimizers;
    if (!cfg.sweep->epsilons.empty()) epsilons = cfg.sweep->epsilons;
    if (!cfg.sweep->ns.empty()) ns = cfg.sweep->ns;
  }

  // One bundle per n; runs share it read-only.
  std::vector<std::pair<long, ProblemBundle>> bundles;
  for (long n : ns) bundles.emplace_back(n, BuildBundle(cfg, n));

  std::vector<Combo> combos;
  for (const std::string& opt : optimizers) {
    for (double eps : epsilons) {
      for (const auto& [n_req, bundle] : bundles) {
        for (uint64_t seed : cfg.seeds) {
          combos.push_back(Combo{opt, eps, bundle.data.size(), seed});
        }
      }
    }
  }

  ExperimentResult result;
  std::mutex mu;
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const size_t index = next.fetch_add(1);
      if (index >= combos.size()) return;
      const Combo& combo = combos[index];
      const ProblemBundle* bundle = nullptr;
      for (const auto& [n_req, b] : bundles) {
        if (b.data.size() == combo.n) bundle = &b;
      }
      const RunTrace trace = RunOne(cfg, *bundle, combo);
      const std::string stem =
          (fs::path(cfg.out_dir) / RunFileStem(cfg, combo)).string();
      AtomicWriteFile(stem + ".csv", TraceToCsv(trace));
      AtomicWriteFile(stem + "_iterate.json",
                      IterateToJson(combo.optimizer, trace));
      SummaryRow row;
      row.optimizer = combo.optimizer;
      row.epsilon = combo.epsilon;
      row.n = combo.n;
      row.seed = combo.seed;
      row.final_true_grad_norm = trace.final_true_grad_norm;
      row.best_true_grad_norm = trace.best_true_grad_norm;
      row.final_objective = trace.final_objective;
      row.clamp_count = trace.clamp_count;
      row.runtime_ms = trace.runtime_ms;
      std::lock_guard<std::mutex> lock(mu);
      result.rows.push_back(std::move(row));
      result.trace_files.push_back(stem + ".csv");
      result.any_aborted = result.any_aborted || trace.aborted;
    }
  };

  const int thread_count = std::max(1, cfg.threads);
  if (thread_count == 1 || combos.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  auto combo_key = [](const SummaryRow& r) {
    return std::make_tuple(r.optimizer, r.epsilon, r.n, r.seed);
  };
  std::sort(result.rows.begin(), result.rows.end(),
            [&](const SummaryRow& a, const SummaryRow& b) {
              return combo_key(a) < combo_key(b);
            });
  std::sort(result.trace_files.begin(), result.trace_files.end());

  std::string summary =
      "optimizer,epsilon,n,seed,final_true_grad_norm,best_true_grad_norm,"
      "final_objective,clamp_count,runtime_ms\n";
  for (const SummaryRow& r : result.rows) {
    summary += r.optimizer + ',' + FormatDouble(r.epsilon) + ',' +
               std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' +
               FormatDouble(r.final_true_grad_norm) + ',' +
               FormatDouble(r.best_true_grad_norm) + ',' +
               FormatDouble(r.final_objective) + ',' +
               std::to_string(r.clamp_count) + ',' +
               FormatDouble(r.runtime_ms) + '\n';
  }
  AtomicWriteFile((fs::path(cfg.out_dir) / (cfg.name + "_summary.csv")).string(),
                  summary);

  // Per-(optimizer, epsilon, n) aggregate; population std over seeds.
  std::string aggregate =
      "optimizer,epsilon,n,seeds,mean_final_true_grad_norm,"
      "std_final_true_grad_norm,mean_best_true_grad_norm,"
      "std_best_true_grad_norm\n";
  for (size_t i = 0; i < result.rows.size();) {
    size_t j = i;
    double sum_final = 0, sum_best = 0;
    while (j < result.rows.size() &&
           result.rows[j].optimizer == result.rows[i].optimizer &&
           result.rows[j].epsilon == result.rows[i].epsilon &&
           result.rows[j].n == result.rows[i].n) {
      sum_final += result.rows[j].final_true_grad_norm;
      sum_best += result.rows[j].best_true_grad_norm;
      ++j;
    }
    const double k = static_cast<double>(j - i);
    const double mean_final = sum_final / k;
    const double mean_best = sum_best / k;
    double var_final = 0, var_best = 0;
    for (size_t r = i; r < j; ++r) {
      var_final += (result.rows[r].final_true_grad_norm - mean_final) *
                   (result.rows[r].final_true_grad_norm - mean_final);
      var_best += (result.rows[r].best_true_grad_norm - mean_best) *
                  (result.rows[r].best_true_grad_norm - mean_best);
    }
    aggregate += result.rows[i].optimizer + ',' +
                 FormatDouble(result.rows[i].epsilon) + ',' +
                 std::to_string(result.rows[i].n) + ',' +
                 std::to_string(j - i) + ',' + FormatDouble(mean_final) + ',' +
                 FormatDouble(std::sqrt(var_final / k)) + ',' +
                 FormatDouble(mean_best) + ',' +
                 FormatDouble(std::sqrt(var_best / k)) + '\n';
    i = j;
  }
  AtomicWriteFile(
      (fs::path(cfg.out_dir) / (cfg.name + "_aggregate.csv")).string(),
      aggregate);

  if (cfg.emit_gnuplot) {
    AtomicWriteFile((fs::path(cfg.out_dir) / (cfg.name + "_plot.gp")).string(),
                    GnuplotScript(cfg, result.trace_files));
  }
  return result;
}

double EvaluateIterateFile(const ExperimentConfig& cfg,
                           const std::string& iterate_path) {
  std::ifstream in(iterate_path, std::ios::binary);
  if (!in) throw std::invalid_argument("eval: cannot open " + iterate_path);
  const json j = json::parse(in);
  const std::vector<double> xv = j.at("x").get<std::vector<double>>();
  Eigen::VectorXd x =
      Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<long>(xv.size()));

  const ProblemBundle bundle = BuildBundle(cfg, 0);
  const std::string optimizer =
      j.value("optimizer", cfg.optimizer.empty() ? "double-spider" : cfg.optimizer);
  if (optimizer == "recursive-spider") {
    CompProblem problem(&bundle.data, &bundle.oracle, cfg.rho, cfg.lambda_min);
    CompositionalPoint w{std::move(x), j.at("lambda").get<double>()};
    return problem.TrueGradientNorm(w);
  }
  DualProblem problem(&bundle.data, &bundle.oracle, bundle.divergence,
                      cfg.lambda);
  return problem.TrueGradientNorm(x);
}

}  // namespace drodp
