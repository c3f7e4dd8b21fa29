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

#include "dpgraphgen/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dpgraphgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
  return json::parse(read_text_file(path));
}

json sentinel_number(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  if (std::isnan(v)) return json("undefined");
  return json(v);
}

double parse_sentinel_number(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

std::string pair_lines(const std::vector<Edge>& edges) {
  std::ostringstream out;
  for (const Edge& e : edges) out << e.a << " " << e.b << "\n";
  return out.str();
}

std::vector<Edge> parse_pair_lines(const std::string& text,
                                   const std::string& what) {
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t a = 0, b = 0;
    if (!(ls >> a >> b))
      throw std::runtime_error("malformed pair line in " + what);
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return edges;
}

}  // namespace

std::string resolve_output_dir(const std::string& output_dir) {
  fs::path p(output_dir.empty() ? std::string("run") : output_dir);
  if (p.is_absolute()) return p.string();
  const char* root = std::getenv("DP_GRAPHGEN_OUT_ROOT");
  if (root != nullptr && *root != '\0') return (fs::path(root) / p).string();
  return p.string();
}

IngestResult ingest_stage(const std::string& dataset_path,
                          const std::string& out_dir) {
  fs::create_directories(out_dir);
  const LoadResult loaded = load_edge_list_file(dataset_path);
  LccResult lcc = largest_connected_component(loaded.graph);

  IngestResult res{std::move(lcc.graph), std::move(lcc.new_to_old),
                   loaded.stats};
  save_edge_list_file(res.lcc, (fs::path(out_dir) / "lcc.edges").string());
  std::ostringstream remap;
  remap << "# new old\n";
  for (NodeId n = 0; n < res.new_to_old.size(); ++n)
    remap << n << " " << res.new_to_old[n] << "\n";
  write_text_file((fs::path(out_dir) / "lcc_remap.txt").string(), remap.str());

  json manifest;
  manifest["dataset_path"] = dataset_path;
  manifest["input_nodes"] = loaded.graph.num_nodes();
  manifest["input_edges"] = loaded.graph.num_edges();
  manifest["lcc_nodes"] = res.lcc.num_nodes();
  manifest["lcc_edges"] = res.lcc.num_edges();
  manifest["self_loops_dropped"] = loaded.stats.self_loops_dropped;
  manifest["duplicates_dropped"] = loaded.stats.duplicates_dropped;
  write_json_file((fs::path(out_dir) / "ingest_manifest.json").string(),
                  manifest);
  return res;
}

EdgeSplit split_stage(const Graph& lcc, double fraction, std::uint64_t seed,
                      const std::string& out_dir) {
  fs::create_directories(out_dir);
  EdgeSplit split = split_edges(lcc, fraction, seed);
  save_edge_list_file(split.train,
                      (fs::path(out_dir) / "train.edges").string());
  write_text_file((fs::path(out_dir) / "validation_edges.txt").string(),
                  pair_lines(split.validation_edges));
  write_text_file((fs::path(out_dir) / "validation_non_edges.txt").string(),
                  pair_lines(split.validation_non_edges));
  json manifest;
  manifest["seed"] = seed;
  manifest["fraction"] = fraction;
  manifest["num_nodes"] = lcc.num_nodes();
  manifest["train_edges"] = split.train.num_edges();
  manifest["validation_edges"] = split.validation_edges.size();
  manifest["validation_non_edges"] = split.validation_non_edges.size();
  write_json_file((fs::path(out_dir) / "manifest.json").string(), manifest);
  return split;
}

EdgeSplit load_split(const std::string& split_dir) {
  const fs::path dir(split_dir);
  const json manifest = read_json_file((dir / "manifest.json").string());
  EdgeSplit split;
  split.seed = manifest.at("seed").get<std::uint64_t>();
  split.fraction = manifest.at("fraction").get<double>();
  split.train =
      load_edge_list_file((dir / "train.edges").string()).graph;
  split.validation_edges = parse_pair_lines(
      read_text_file((dir / "validation_edges.txt").string()),
      "validation_edges.txt");
  split.validation_non_edges = parse_pair_lines(
      read_text_file((dir / "validation_non_edges.txt").string()),
      "validation_non_edges.txt");
  return split;
}

TrainStageResult train_stage(const ExperimentConfig& cfg, const Graph& lcc,
                             const EdgeSplit& split, const std::string& out_dir,
                             const CheckpointCallback& extra_callback) {
  const fs::path dir(out_dir);
  fs::create_directories(dir / "checkpoints");
  std::ofstream history((dir / "history.jsonl").string(), std::ios::binary);
  if (!history)
    throw std::runtime_error("cannot write history.jsonl under " + out_dir);

  ModelConfig model_cfg = cfg.model;
  model_cfg.num_nodes = lcc.num_nodes();
  model_cfg.sequence_length = cfg.sequence_length();

  std::vector<std::string> checkpoint_paths;
  CheckpointCallback cb = [&](const CheckpointRecord& rec,
                              const GeneratorState& gen,
                              const DiscriminatorState& disc,
                              const PrivacyLedger& ledger) {
    json line;
    line["index"] = rec.index;
    line["epoch"] = rec.epoch;
    line["disc_loss"] = rec.disc_loss;
    line["gen_loss"] = rec.gen_loss;
    line["auc"] = rec.auc;
    line["ap"] = rec.ap;
    line["epsilon"] = sentinel_number(rec.epsilon);
    line["delta"] = rec.delta;
    line["wall_seconds"] = rec.wall_seconds;
    history << line.dump() << "\n";
    history.flush();

    std::ostringstream name;
    name << "checkpoint_" << std::setw(4) << std::setfill('0') << rec.index
         << ".ckpt";
    const std::string path = (dir / "checkpoints" / name.str()).string();
    save_checkpoint(path, to_checkpoint(gen, ""));
    checkpoint_paths.push_back(path);
    if (extra_callback) return extra_callback(rec, gen, disc, ledger);
    return true;
  };

  TrainingRun run(split.train, model_cfg, cfg.gan, cfg.dp,
                  mix64(cfg.seed, 0x7e41u), 0);
  TrainStageResult out{
      run.run(split, static_cast<int>(cfg.checkpoint_sample_volume), cb), ""};

  // Persist the selected best snapshot.
  const std::string best_path = (dir / "checkpoints" / "best.ckpt").string();
  save_checkpoint(best_path, to_checkpoint(out.result.best_generator, ""));
  out.best_checkpoint_path = best_path;

  json manifest;
  manifest["best_checkpoint"] = "checkpoints/best.ckpt";
  manifest["best_checkpoint_index"] = out.result.best_checkpoint_index;
  manifest["stop_reason"] = to_string(out.result.stop_reason);
  manifest["epochs_run"] = out.result.epochs_run;
  manifest["critic_steps"] = out.result.ledger.steps();
  manifest["accountant"] = {
      {"sampling_rate", out.result.ledger.sampling_rate()},
      {"noise_scale", out.result.ledger.noise_scale()},
      {"steps", out.result.ledger.steps()},
      {"target_delta", cfg.dp.target_delta},
      {"target_epsilon", sentinel_number(cfg.dp.target_epsilon)},
  };
  manifest["final_epsilon"] =
      sentinel_number(cfg.dp.enabled
                          ? out.result.ledger.epsilon_for_delta(
                                cfg.dp.target_delta)
                          : std::numeric_limits<double>::infinity());
  write_json_file((dir / "train_manifest.json").string(), manifest);
  return out;
}

void generate_stage(const GeneratorState& gen, std::size_t count,
                    std::uint64_t seed, const std::string& samples_path,
                    int num_threads) {
  const int threads =
      num_threads > 0 ? num_threads
                      : static_cast<int>(std::max(
                            1u, std::thread::hardware_concurrency()));
  const auto samples = generate_samples_parallel(gen, count, seed, threads);
  std::ofstream out(samples_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + samples_path);
  out << "# nodes=" << gen.config.num_nodes << "\n";
  for (const auto& seq : samples) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (t > 0) out << ' ';
      out << seq[t];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + samples_path);
}

std::vector<std::vector<std::uint32_t>> load_samples(
    const std::string& samples_path, NodeId* num_nodes) {
  const std::string text = read_text_file(samples_path);
  std::vector<std::vector<std::uint32_t>> samples;
  NodeId max_id = 0;
  NodeId header_nodes = 0;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (first) {
        const std::size_t pos = line.find("nodes=");
        if (pos != std::string::npos) {
          std::uint64_t n = 0;
          std::from_chars(line.data() + pos + 6, line.data() + line.size(), n);
          header_nodes = static_cast<NodeId>(n);
        }
      }
      first = false;
      continue;
    }
    first = false;
    std::istringstream ls(line);
    std::vector<std::uint32_t> seq;
    std::uint64_t id = 0;
    while (ls >> id) {
      seq.push_back(static_cast<std::uint32_t>(id));
      max_id = std::max<NodeId>(max_id, static_cast<NodeId>(id));
    }
    if (seq.size() < 2)
      throw std::runtime_error("sample line with fewer than 2 ids in " +
                               samples_path);
    samples.push_back(std::move(seq));
  }
  if (num_nodes != nullptr)
    *num_nodes = header_nodes > 0 ? header_nodes : max_id + 1;
  return samples;
}

AssembleStageResult assemble_stage(
    const std::vector<std::vector<std::uint32_t>>& samples, NodeId num_nodes,
    std::size_t target_edges, std::uint64_t seed, const std::string& out_dir) {
  fs::create_directories(out_dir);
  ScoreMatrix sm = count_sample_sequences(samples, num_nodes);
  sm.symmetrize();
  AssemblyResult assembly = assemble_graph(sm, target_edges, seed);
  save_edge_list_file(assembly.graph,
                      (fs::path(out_dir) / "assembled.edges").string());
  json manifest;
  manifest["sample_volume"] = samples.size();
  manifest["num_nodes"] = num_nodes;
  manifest["target_edges"] = target_edges;
  manifest["dropped_self_pairs"] = assembly.dropped_self_pairs;
  manifest["isolated_nodes"] = assembly.isolated_nodes;
  manifest["phase1_edges"] = assembly.phase1_edges;
  manifest["seed"] = seed;
  write_json_file((fs::path(out_dir) / "assembly_manifest.json").string(),
                  manifest);
  return AssembleStageResult{std::move(assembly), std::move(sm)};
}

EvaluationReport run_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.dataset_path.empty()) throw ConfigError("dataset.path is required");
  const std::string out_dir = resolve_output_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "effective.cfg").string(),
                  cfg.to_text());

  std::string stage = "ingest";
  try {
    const IngestResult ingest = ingest_stage(cfg.dataset_path, out_dir);

    stage = "split";
    const EdgeSplit split =
        split_stage(ingest.lcc, cfg.split_fraction,
                    mix64(cfg.seed, 0x5b117u),
                    (fs::path(out_dir) / "split").string());

    stage = "train";
    const TrainStageResult trained =
        train_stage(cfg, ingest.lcc, split, out_dir);

    stage = "generate";
    const std::string samples_path =
        (fs::path(out_dir) / "samples.txt").string();
    generate_stage(trained.result.best_generator, cfg.sample_volume,
                   mix64(cfg.seed, 0x6e4a2u), samples_path, 0);

    stage = "assemble";
    const auto samples = load_samples(samples_path, nullptr);
    AssembleStageResult assembled =
        assemble_stage(samples, ingest.lcc.num_nodes(),
                       ingest.lcc.num_edges(), mix64(cfg.seed, 0xa55eu),
                       out_dir);

    stage = "evaluate";
    const double eps =
        cfg.dp.enabled
            ? trained.result.ledger.epsilon_for_delta(cfg.dp.target_delta)
            : std::numeric_limits<double>::infinity();
    EvaluationReport report =
        evaluate_generated(assembled.assembly.graph, ingest.lcc,
                           assembled.score_matrix, split, eps);
    report.isolated_nodes = assembled.assembly.isolated_nodes;
    report.config_hash = cfg.hash();
    report.seed = cfg.seed;
    if (cfg.mode == SampleMode::kWalk)
      report.label = "baseline-walk" + std::to_string(cfg.walk_length);
    else
      report.label = cfg.dp.enabled ? "dp-edge" : "edge";

    write_text_file((fs::path(out_dir) / "report.json").string(),
                    report.to_json());
    write_text_file((fs::path(out_dir) / "report.csv").string(),
                    EvaluationReport::csv_header() + "\n" +
                        report.to_csv_row() + "\n");
    return report;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    write_text_file((fs::path(out_dir) / "FAILED").string(),
                    "stage: " + stage + "\nerror: " + e.what() + "\n");
    throw StageError(stage, e.what());
  }
}

EvaluationReport load_report(const std::string& path) {
  const json j = read_json_file(path);
  EvaluationReport rep;
  rep.max_degree = j.at("max_degree").get<std::size_t>();
  if (j.at("assortativity").is_number())
    rep.assortativity = j.at("assortativity").get<double>();
  rep.triangle_count = j.at("triangle_count").get<std::uint64_t>();
  if (j.at("power_law_exponent").is_number())
    rep.power_law_exponent = j.at("power_law_exponent").get<double>();
  rep.clustering_coefficient = j.at("clustering_coefficient").get<double>();
  rep.mean_local_clustering = j.at("mean_local_clustering").get<double>();
  rep.characteristic_path_length =
      j.at("characteristic_path_length").get<double>();
  rep.disconnected_pair_fraction =
      j.at("disconnected_pair_fraction").get<double>();
  rep.edge_overlap = j.at("edge_overlap").get<double>();
  rep.auc = j.at("auc").get<double>();
  rep.ap = j.at("ap").get<double>();
  rep.isolated_nodes = j.at("isolated_nodes").get<std::size_t>();
  rep.epsilon_at_eval = parse_sentinel_number(j.at("epsilon_at_eval"));
  rep.config_hash = j.at("config_hash").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.label = j.at("label").get<std::string>();
  return rep;
}

SweepResult run_sweep(const ExperimentConfig& base,
                      const std::vector<double>& sigma_grid,
                      const std::vector<double>& clip_grid, bool resume) {
  if (sigma_grid.empty() || clip_grid.empty())
    throw ConfigError("run_sweep: grids must be non-empty");
  const std::string root = resolve_output_dir(base.output_dir);
  fs::create_directories(root);

  SweepResult result;
  std::ostringstream csv;
  csv << "sigma,clip,status," << EvaluationReport::csv_header() << "\n";
  for (double sigma : sigma_grid) {
    for (double clip : clip_grid) {
      ExperimentConfig cfg = base;
      cfg.dp.noise_scale = sigma;
      cfg.dp.clip_bound = clip;
      std::ostringstream sub;
      sub << "sigma_" << sigma << "_clip_" << clip;
      cfg.output_dir = (fs::path(root) / sub.str()).string();

      SweepRow row;
      row.sigma = sigma;
      row.clip = clip;
      const std::string report_path =
          (fs::path(cfg.output_dir) / "report.json").string();
      try {
        if (resume && fs::exists(report_path)) {
          row.report = load_report(report_path);
          row.status = "resumed";
        } else {
          row.report = run_pipeline(cfg);
          row.status = "ok";
        }
      } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
      }
      csv << sigma << "," << clip << ","
          << (row.status.rfind("failed", 0) == 0 ? "failed" : row.status)
          << ",";
      if (row.report)
        csv << row.report->to_csv_row();
      else
        csv << "";
      csv << "\n";
      result.rows.push_back(std::move(row));
    }
  }
  result.csv_path = (fs::path(root) / "sweep.csv").string();
  write_text_file(result.csv_path, csv.str());
  return result;
}

}  // namespace dpgraphgen
