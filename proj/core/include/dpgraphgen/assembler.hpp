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

#ifndef DPGRAPHGEN_ASSEMBLER_HPP_
#define DPGRAPHGEN_ASSEMBLER_HPP_

#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpgraphgen/graph.hpp"

namespace dpgraphgen {

// Square matrix of generated-edge occurrence counts, stored sparsely.
// Symmetrization takes the elementwise max with the transpose; the diagonal
// stays zero (self-pairs are dropped and counted at ingestion).
class ScoreMatrix {
 public:
  explicit ScoreMatrix(NodeId size) : size_(size) {}

  NodeId size() const { return size_; }
  bool symmetrized() const { return symmetrized_; }
  std::size_t dropped_self_pairs() const { return dropped_self_pairs_; }

  std::uint64_t count(NodeId i, NodeId j) const;
  std::size_t support_size() const { return counts_.size(); }

  // Occurrences of the ordered pair (i, j). Self-pairs are dropped and
  // counted. Throws if an id is out of range.
  void add_ordered_pair(NodeId i, NodeId j, std::uint64_t times = 1);

  // s_ij = s_ji = max(s_ij, s_ji). Idempotent.
  void symmetrize();

  // Sorted (i, j, count) triples; ordered pairs before symmetrization,
  // unordered (i < j) after.
  std::vector<std::tuple<NodeId, NodeId, std::uint64_t>> entries() const;

 private:
  NodeId size_;
  bool symmetrized_ = false;
  std::size_t dropped_self_pairs_ = 0;
  // key: i * size + j; after symmetrization only i < j keys remain.
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

// Counts ordered pairs into an unsymmetrized matrix.
ScoreMatrix count_edges(const std::vector<std::pair<NodeId, NodeId>>& samples,
                        NodeId size);

// Decomposes token sequences into consecutive ordered pairs and counts them;
// one counting path serves both edge and walk mode.
ScoreMatrix count_sample_sequences(
    const std::vector<std::vector<std::uint32_t>>& sequences, NodeId size);

struct AssemblyResult {
  Graph graph;
  std::size_t isolated_nodes = 0;    // zero-row nodes, left unwired
  std::size_t phase1_edges = 0;      // unique edges after the per-node pass
  std::size_t dropped_self_pairs = 0;
  // Phase-1 draw per supported node (node, chosen neighbor), in node order.
  std::vector<std::pair<NodeId, NodeId>> phase1_choices;
};

// Two-phase assembly: first every node with positive row sum draws one
// neighbor from its row distribution p_ij = s_ij / sum_v s_iv; then pairs are
// drawn with global probability p_ij = s_ij / sum_uv s_uv, inserting new
// unique undirected edges until target_edges is reached. Deterministic given
// seed. Throws if the matrix support cannot reach target_edges (the error
// reports the maximum achievable count) or if phase 1 alone exceeds it.
AssemblyResult assemble_graph(const ScoreMatrix& sm, std::size_t target_edges,
                              std::uint64_t seed);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_ASSEMBLER_HPP_
