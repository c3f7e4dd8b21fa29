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

#ifndef DPGRAPHGEN_EVALUATION_HPP_
#define DPGRAPHGEN_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "dpgraphgen/assembler.hpp"
#include "dpgraphgen/graph.hpp"

namespace dpgraphgen {

// Maximum node degree; 0 for an edgeless graph.
std::size_t max_degree(const Graph& g);

// Pearson correlation over the multiset of ordered edge-endpoint degree
// pairs (each undirected edge contributes both orientations). nullopt when a
// marginal variance is zero (regular graphs). Throws on an edgeless graph.
std::optional<double> assortativity(const Graph& g);

// Number of unordered node triples with all three edges present.
std::uint64_t triangle_count(const Graph& g);

// Global transitivity: 3 * triangles / wedges, 0 when the graph has no
// wedge. Wedges are unordered paths of length 2, sum_v d_v (d_v - 1) / 2.
double clustering_coefficient(const Graph& g);

// Mean of per-node local clustering coefficients over nodes with degree
// >= 2 (auxiliary report field).
double mean_local_clustering(const Graph& g);

struct PowerLawFit {
  // Continuous MLE alpha = 1 + n / sum_i ln(d_i / (d_min - 0.5)) over nodes
  // with degree >= 1, with d_min fixed at the minimum such degree. nullopt
  // when all fitted degrees are equal (degenerate distribution, the
  // unshifted log-sum is zero and the exponent diverges).
  std::optional<double> alpha;
  std::size_t isolated_nodes = 0;
  std::size_t fitted_nodes = 0;
  std::size_t min_degree = 0;
};

PowerLawFit power_law_exponent(const Graph& g);

struct PathLengthStats {
  double characteristic_path_length = 0.0;  // over connected pairs only
  double disconnected_pair_fraction = 0.0;
};

// Mean shortest-path length over connected unordered node pairs (BFS from
// every node). Throws when no connected pair exists.
PathLengthStats characteristic_path_length(const Graph& g);

// |E_gen intersect E_orig| / |E_orig|. Requires the same node universe.
double edge_overlap(const Graph& generated, const Graph& original);

struct LinkPredictionScores {
  double auc = 0.0;
  double ap = 0.0;
};

// Scores each validation edge and frozen non-edge (i, j) by s_ij. AUC uses
// the rank statistic with ties counting 1/2; AP is the mean precision at
// each positive in descending-score order, ties broken by ascending (i, j).
LinkPredictionScores link_prediction(const ScoreMatrix& sm,
                                     const EdgeSplit& split);

struct EvaluationReport {
  std::size_t max_degree = 0;
  std::optional<double> assortativity;
  std::uint64_t triangle_count = 0;
  std::optional<double> power_law_exponent;
  double clustering_coefficient = 0.0;
  double mean_local_clustering = 0.0;
  double characteristic_path_length = 0.0;
  double disconnected_pair_fraction = 0.0;
  double edge_overlap = 0.0;
  double auc = 0.0;
  double ap = 0.0;
  std::size_t isolated_nodes = 0;
  double epsilon_at_eval = 0.0;  // +infinity when privacy is off
  // Provenance.
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string label;  // e.g. "dp-edge" or "baseline-walk16"

  // Structured document (JSON text) and flat CSV row; infinities and
  // undefined values are written as explicit sentinels, never as zeros.
  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

// Full evaluation of an assembled graph against the original and split.
EvaluationReport evaluate_generated(const Graph& generated,
                                    const Graph& original,
                                    const ScoreMatrix& sm,
                                    const EdgeSplit& split,
                                    double epsilon_at_eval);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_EVALUATION_HPP_
