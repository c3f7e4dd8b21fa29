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

#ifndef DPGRAPHGEN_GRAPH_HPP_
#define DPGRAPHGEN_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dpgraphgen {

using NodeId = std::uint32_t;

// Unordered node pair, stored with first <= second.
struct Edge {
  NodeId a;
  NodeId b;

  Edge() : a(0), b(0) {}
  Edge(NodeId u, NodeId v) : a(u < v ? u : v), b(u < v ? v : u) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected simple graph over contiguous node ids. Edges are kept
// sorted and deduplicated; a CSR-style adjacency is built at construction.
class Graph {
 public:
  Graph() = default;

  // Throws std::invalid_argument on self-loops, duplicates, or endpoints
  // outside [0, num_nodes).
  Graph(NodeId num_nodes, std::vector<Edge> edges);

  NodeId num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(NodeId u, NodeId v) const;
  std::size_t degree(NodeId u) const {
    return adj_offsets_[u + 1] - adj_offsets_[u];
  }
  // Neighbors of u, sorted ascending.
  const NodeId* neighbors_begin(NodeId u) const {
    return adj_.data() + adj_offsets_[u];
  }
  const NodeId* neighbors_end(NodeId u) const {
    return adj_.data() + adj_offsets_[u + 1];
  }

 private:
  NodeId num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<NodeId> adj_;
};

struct LoadStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t lines_parsed = 0;
};

struct LoadResult {
  Graph graph;
  LoadStats stats;
};

// Parses a line-oriented edge list: "<u> <v>" per line, '#' starts a
// comment, optional leading "# nodes=<N>" header overrides the node count.
// Self-loops and duplicate edges are dropped and counted.
// Throws std::invalid_argument with the offending line number on malformed
// input, and on empty input (no edges).
LoadResult load_edge_list(const std::string& text);

// Reads a file and delegates to load_edge_list.
LoadResult load_edge_list_file(const std::string& path);

// Writes the canonical edge-list format ("# nodes=<N>" header, sorted
// "<u> <v>" lines).
std::string format_edge_list(const Graph& g);
void save_edge_list_file(const Graph& g, const std::string& path);

struct LccResult {
  Graph graph;
  // new_to_old[new_id] = original node id, for traceability.
  std::vector<NodeId> new_to_old;
};

// Largest connected component with node ids remapped to [0, n'). Ties in
// component size are broken toward the component containing the smallest
// original node id. Throws on an empty graph.
LccResult largest_connected_component(const Graph& g);

struct EdgeSplit {
  Graph train;
  std::vector<Edge> validation_edges;
  std::vector<Edge> validation_non_edges;
  std::uint64_t seed = 0;
  double fraction = 0.0;
};

// Splits round(val_fraction * |E|) edges into a validation set while keeping
// the training graph connected: a uniformly random spanning tree (Wilson's
// algorithm) is protected from selection. Validation non-edges are sampled
// uniformly from the complement, once, and frozen. Deterministic given seed.
// Throws if the graph is disconnected, the requested fraction is infeasible
// (the error names the maximum feasible fraction), or the complement is too
// small for the non-edge sample.
EdgeSplit split_edges(const Graph& g, double val_fraction, std::uint64_t seed);

// m distinct undirected edges drawn uniformly without replacement, each
// emitted in a uniformly random orientation. Deterministic given
// (seed, step). Throws if m > |E|.
std::vector<std::pair<NodeId, NodeId>> sample_edge_batch(const Graph& g,
                                                         std::size_t m,
                                                         std::uint64_t seed,
                                                         std::uint64_t step);

// m random walks of the given length (>= 2): uniform start node, uniform
// transition over neighbors. Deterministic given (seed, step). Requires
// min degree >= 1.
std::vector<std::vector<NodeId>> sample_random_walks(const Graph& g,
                                                     std::size_t length,
                                                     std::size_t m,
                                                     std::uint64_t seed,
                                                     std::uint64_t step);

bool is_connected(const Graph& g);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_GRAPH_HPP_
