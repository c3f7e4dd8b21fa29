// Copyright 2026 The dp-graphgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// dp-graphgen: train a private graph generator from an edge list, assemble
// synthetic graphs, and evaluate them.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpgraphgen/accountant.hpp"
#include "dpgraphgen/config.hpp"
#include "dpgraphgen/pipeline.hpp"

namespace fs = std::filesystem;
using namespace dpgraphgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

ExperimentConfig load_cfg(const std::string& config_path,
                          const std::optional<std::uint64_t>& seed,
                          const std::string& out) {
  ExperimentConfig cfg =
      config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
  if (seed.has_value()) cfg.seed = *seed;
  if (!out.empty()) cfg.output_dir = out;
  return cfg;
}

std::vector<double> parse_grid(const std::string& csv, const char* what) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      grid.push_back(std::stod(item));
    } catch (...) {
      throw ConfigError(std::string("bad ") + what + " value: '" + item + "'");
    }
  }
  if (grid.empty()) throw ConfigError(std::string(what) + " grid is empty");
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dp-graphgen: edge-differentially-private graph generation"};
  app.require_subcommand(1);

  std::string config_path, out, input, graph_path, split_dir, checkpoint_path;
  std::string samples_path, generated_path, original_path;
  std::optional<std::uint64_t> seed;
  double fraction = 0.15;
  std::size_t count = 400000;
  std::size_t target_edges = 0;
  std::uint64_t nodes_override = 0;
  int threads = 0;

  auto* ingest = app.add_subcommand("ingest",
                                    "Load an edge list and extract the LCC");
  ingest->add_option("--input", input, "Edge-list file")->required();
  ingest->add_option("--out", out, "Output directory")->required();

  auto* split = app.add_subcommand("split", "Train/validation edge split");
  split->add_option("--graph", graph_path, "Edge-list file (LCC)")->required();
  split->add_option("--fraction", fraction, "Validation fraction");
  split->add_option("--seed", seed, "Split seed");
  split->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train the generator");
  train->add_option("--config", config_path, "Config file")->required();
  train->add_option("--graph", graph_path, "LCC edge-list file")->required();
  train->add_option("--split", split_dir, "Split directory")->required();
  train->add_option("--seed", seed, "Training seed override");
  train->add_option("--out", out, "Output directory")->required();

  auto* generate = app.add_subcommand("generate",
                                      "Sample edges from a checkpoint");
  generate->add_option("--checkpoint", checkpoint_path, "Generator checkpoint")
      ->required();
  generate->add_option("--count", count, "Number of samples");
  generate->add_option("--seed", seed, "Sampling seed");
  generate->add_option("--out", out, "Samples file")->required();
  generate->add_option("--threads", threads, "Worker threads (0 = auto)");

  auto* assemble = app.add_subcommand("assemble",
                                      "Assemble a graph from samples");
  assemble->add_option("--samples", samples_path, "Samples file")->required();
  assemble->add_option("--target-edges", target_edges, "Unique edge target")
      ->required();
  assemble->add_option("--nodes", nodes_override,
                       "Node count (default: samples header)");
  assemble->add_option("--seed", seed, "Assembly seed");
  assemble->add_option("--out", out, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate",
                                      "Graph statistics and link prediction");
  evaluate->add_option("--generated", generated_path, "Assembled edge list")
      ->required();
  evaluate->add_option("--original", original_path, "Original edge list")
      ->required();
  evaluate->add_option("--samples", samples_path, "Samples file (for AUC/AP)")
      ->required();
  evaluate->add_option("--split", split_dir, "Split directory")->required();
  double eval_epsilon = std::numeric_limits<double>::infinity();
  evaluate->add_option("--epsilon", eval_epsilon,
                       "Epsilon to stamp into the report");
  evaluate->add_option("--out", out, "Output directory")->required();

  auto* account = app.add_subcommand("account", "Moments-accountant query");
  double q = 0.0, sigma = 0.0, delta = 1e-5;
  std::uint64_t steps = 0;
  std::optional<double> epsilon_query;
  int max_order = 64;
  bool as_json = false;
  account->add_option("--q", q, "Sampling rate")->required();
  account->add_option("--sigma", sigma, "Noise scale")->required();
  account->add_option("--steps", steps, "Composed steps")->required();
  account->add_option("--delta", delta, "Target delta");
  account->add_option("--epsilon", epsilon_query,
                      "Query delta at this epsilon instead");
  account->add_option("--orders", max_order, "Largest moment order");
  account->add_flag("--json", as_json, "Machine-readable output");

  auto* run = app.add_subcommand("run", "Full pipeline");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--out", out, "Output directory override");

  auto* sweep = app.add_subcommand("sweep", "Sigma x clip grid of runs");
  sweep->add_option("--config", config_path, "Config file")->required();
  std::string sigmas_csv, clips_csv;
  bool resume = false;
  sweep->add_option("--sigmas", sigmas_csv, "Comma-separated noise scales")
      ->required();
  sweep->add_option("--clips", clips_csv, "Comma-separated clip bounds")
      ->required();
  sweep->add_flag("--resume", resume, "Skip rows with an existing report");
  sweep->add_option("--seed", seed, "Seed override");
  sweep->add_option("--out", out, "Output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      const IngestResult res = ingest_stage(input, resolve_output_dir(out));
      std::cout << "lcc nodes " << res.lcc.num_nodes() << ", edges "
                << res.lcc.num_edges() << " (self-loops dropped "
                << res.stats.self_loops_dropped << ", duplicates dropped "
                << res.stats.duplicates_dropped << ")\n";
    } else if (*split) {
      const Graph g = load_edge_list_file(graph_path).graph;
      const EdgeSplit s = split_stage(g, fraction, seed.value_or(1),
                                      resolve_output_dir(out));
      std::cout << "train edges " << s.train.num_edges()
                << ", validation edges " << s.validation_edges.size() << "\n";
    } else if (*train) {
      ExperimentConfig cfg = load_cfg(config_path, seed, "");
      cfg.validate();
      const Graph lcc = load_edge_list_file(graph_path).graph;
      const EdgeSplit s = load_split(split_dir);
      const TrainStageResult res =
          train_stage(cfg, lcc, s, resolve_output_dir(out));
      std::cout << "stopped: " << to_string(res.result.stop_reason)
                << ", best checkpoint " << res.result.best_checkpoint_index
                << ", epsilon "
                << res.result.history.records.back().epsilon << "\n";
    } else if (*generate) {
      const GeneratorState gen =
          generator_from_checkpoint(load_checkpoint(checkpoint_path));
      generate_stage(gen, count, seed.value_or(1), out, threads);
      std::cout << "wrote " << count << " samples to " << out << "\n";
    } else if (*assemble) {
      NodeId n = 0;
      const auto samples = load_samples(samples_path, &n);
      if (nodes_override > 0) n = static_cast<NodeId>(nodes_override);
      const AssembleStageResult res =
          assemble_stage(samples, n, target_edges, seed.value_or(1),
                         resolve_output_dir(out));
      std::cout << "assembled " << res.assembly.graph.num_edges()
                << " edges over " << n << " nodes ("
                << res.assembly.isolated_nodes << " isolated)\n";
    } else if (*evaluate) {
      const Graph generated = load_edge_list_file(generated_path).graph;
      const Graph original = load_edge_list_file(original_path).graph;
      NodeId n = 0;
      const auto samples = load_samples(samples_path, &n);
      ScoreMatrix sm = count_sample_sequences(
          samples, std::max<NodeId>(n, original.num_nodes()));
      sm.symmetrize();
      const EdgeSplit s = load_split(split_dir);
      EvaluationReport rep =
          evaluate_generated(generated, original, sm, s, eval_epsilon);
      rep.seed = seed.value_or(0);
      rep.label = "evaluate";
      const std::string dir = resolve_output_dir(out);
      fs::create_directories(dir);
      const std::string report_path =
          (fs::path(dir) / "report.json").string();
      std::ofstream rj(report_path);
      rj << rep.to_json();
      std::ofstream rc((fs::path(dir) / "report.csv").string());
      rc << EvaluationReport::csv_header() << "\n" << rep.to_csv_row() << "\n";
      std::cout << rep.to_json();
    } else if (*account) {
      if (max_order < 1) throw ConfigError("--orders must be >= 1");
      std::vector<int> orders(static_cast<std::size_t>(max_order));
      for (int i = 0; i < max_order; ++i) orders[i] = i + 1;
      PrivacyLedger ledger(q, sigma, orders);
      ledger.advance(steps);
      nlohmann::json j;
      if (epsilon_query.has_value()) {
        const double d = ledger.delta_for_epsilon(*epsilon_query);
        const int order = ledger.minimizing_order_for_epsilon(*epsilon_query);
        j = {{"delta", d}, {"epsilon", *epsilon_query}, {"order", order}};
        if (as_json)
          std::cout << j.dump() << "\n";
        else
          std::cout << "delta = " << d << " at epsilon = " << *epsilon_query
                    << " (minimizing order " << order << ")\n";
      } else {
        const double eps = ledger.epsilon_for_delta(delta);
        const int order = ledger.minimizing_order(delta);
        j = {{"epsilon", std::isinf(eps) ? nlohmann::json("inf")
                                         : nlohmann::json(eps)},
             {"delta", delta},
             {"order", order}};
        if (as_json)
          std::cout << j.dump() << "\n";
        else
          std::cout << "epsilon = " << eps << " at delta = " << delta
                    << " (minimizing order " << order << ")\n";
      }
    } else if (*run) {
      ExperimentConfig cfg = load_cfg(config_path, seed, out);
      const EvaluationReport rep = run_pipeline(cfg);
      std::cout << rep.to_json();
    } else if (*sweep) {
      ExperimentConfig cfg = load_cfg(config_path, seed, out);
      const SweepResult res = run_sweep(cfg, parse_grid(sigmas_csv, "sigma"),
                                        parse_grid(clips_csv, "clip"), resume);
      std::size_t ok = 0;
      for (const auto& row : res.rows)
        if (row.report.has_value()) ++ok;
      std::cout << "sweep finished: " << ok << "/" << res.rows.size()
                << " rows ok, table at " << res.csv_path << "\n";
      for (const auto& row : res.rows)
        if (!row.report.has_value())
          std::cout << "  sigma " << row.sigma << " clip " << row.clip << ": "
                    << row.status << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return kExitOk;
}
