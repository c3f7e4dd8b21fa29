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

#ifndef DPGRAPHGEN_PIPELINE_HPP_
#define DPGRAPHGEN_PIPELINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dpgraphgen/assembler.hpp"
#include "dpgraphgen/config.hpp"
#include "dpgraphgen/evaluation.hpp"
#include "dpgraphgen/graph.hpp"
#include "dpgraphgen/trainer.hpp"

namespace dpgraphgen {

// Stage artifacts are files so every stage is independently re-runnable.

struct IngestResult {
  Graph lcc;
  std::vector<NodeId> new_to_old;
  LoadStats stats;
};

// Loads an edge list, extracts the LCC, and writes lcc.edges,
// lcc_remap.txt, and ingest_manifest.json under out_dir.
IngestResult ingest_stage(const std::string& dataset_path,
                          const std::string& out_dir);

// Splits and persists train.edges, validation_edges.txt,
// validation_non_edges.txt, and manifest.json under out_dir.
EdgeSplit split_stage(const Graph& lcc, double fraction, std::uint64_t seed,
                      const std::string& out_dir);

EdgeSplit load_split(const std::string& split_dir);

struct TrainStageResult {
  TrainResult result;
  std::string best_checkpoint_path;
};

// Trains, writing checkpoint files, history.jsonl, and train_manifest.json
// (selected best checkpoint plus the (q, sigma, T) needed to recompute
// epsilon) under out_dir.
TrainStageResult train_stage(const ExperimentConfig& cfg, const Graph& lcc,
                             const EdgeSplit& split, const std::string& out_dir,
                             const CheckpointCallback& extra_callback = nullptr);

// Samples from a generator checkpoint into the text stream format (one line
// of node ids per sample, "# nodes=<N>" header).
void generate_stage(const GeneratorState& gen, std::size_t count,
                    std::uint64_t seed, const std::string& samples_path,
                    int num_threads = 0);

std::vector<std::vector<std::uint32_t>> load_samples(
    const std::string& samples_path, NodeId* num_nodes);

struct AssembleStageResult {
  AssemblyResult assembly;
  ScoreMatrix score_matrix;
};

// Counts, symmetrizes, assembles, and writes assembled.edges plus
// assembly_manifest.json under out_dir.
AssembleStageResult assemble_stage(
    const std::vector<std::vector<std::uint32_t>>& samples, NodeId num_nodes,
    std::size_t target_edges, std::uint64_t seed, const std::string& out_dir);

// Full pipeline: ingest -> split -> train -> generate -> assemble ->
// evaluate. Writes every stage artifact plus report.json / report.csv under
// cfg.output_dir; on a stage failure a FAILED marker naming the stage is
// left behind and StageError is thrown.
EvaluationReport run_pipeline(const ExperimentConfig& cfg);

struct SweepRow {
  double sigma = 0.0;
  double clip = 0.0;
  std::string status;  // "ok", "failed: ...", "resumed"
  std::optional<EvaluationReport> report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string csv_path;
};

// One pipeline run per (sigma, clip) grid point; individual failures are
// recorded per row and the sweep continues. With resume=true, rows whose
// report already exists are loaded instead of re-run.
SweepResult run_sweep(const ExperimentConfig& base,
                      const std::vector<double>& sigma_grid,
                      const std::vector<double>& clip_grid, bool resume);

EvaluationReport load_report(const std::string& path);

// Default output root: the DP_GRAPHGEN_OUT_ROOT environment variable, or
// "out" when unset. Relative output_dir values are placed under it.
std::string resolve_output_dir(const std::string& output_dir);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_PIPELINE_HPP_
