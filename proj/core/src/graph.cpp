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

#include "dpgraphgen/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "dpgraphgen/rng.hpp"

namespace dpgraphgen {

Graph::Graph(NodeId num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.a == e.b) throw std::invalid_argument("Graph: self-loop rejected");
    if (e.b >= num_nodes_)
      throw std::invalid_argument("Graph: endpoint out of range");
    if (i > 0 && edges_[i - 1] == e)
      throw std::invalid_argument("Graph: duplicate edge rejected");
  }
  adj_offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (const Edge& e : edges_) {
    ++adj_offsets_[e.a + 1];
    ++adj_offsets_[e.b + 1];
  }
  std::partial_sum(adj_offsets_.begin(), adj_offsets_.end(),
                   adj_offsets_.begin());
  adj_.resize(adj_offsets_.back());
  std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adj_[cursor[e.a]++] = e.b;
    adj_[cursor[e.b]++] = e.a;
  }
  for (NodeId u = 0; u < num_nodes_; ++u)
    std::sort(adj_.begin() + adj_offsets_[u], adj_.begin() + adj_offsets_[u + 1]);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes_ || v >= num_nodes_) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  return std::binary_search(neighbors_begin(u), neighbors_end(u), v);
}

namespace {

bool parse_node_id(std::string_view tok, NodeId* out) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return false;
  if (v > 0xffffffffULL) return false;
  *out = static_cast<NodeId>(v);
  return true;
}

}  // namespace

LoadResult load_edge_list(const std::string& text) {
  LoadStats stats;
  std::vector<Edge> edges;
  NodeId max_id = 0;
  bool saw_id = false;
  bool header_nodes = false;
  NodeId header_n = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_content_line = true;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = (nl == std::string::npos) ? text.size() : nl;
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (nl == std::string::npos && line.empty()) break;

    // Strip trailing CR and surrounding whitespace.
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);

    if (line.empty()) continue;
    if (line.front() == '#') {
      if (first_content_line) {
        // Optional "# nodes=<N>" header.
        std::string_view rest = line.substr(1);
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        if (rest.rfind("nodes=", 0) == 0) {
          NodeId n = 0;
          if (!parse_node_id(rest.substr(6), &n))
            throw std::invalid_argument("load_edge_list: bad nodes= header at line " +
                                        std::to_string(line_no));
          header_nodes = true;
          header_n = n;
        }
        first_content_line = false;
      }
      continue;
    }
    first_content_line = false;

    // Expect exactly two whitespace-separated ids.
    NodeId ids[2];
    int count = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (count >= 2 || !parse_node_id(line.substr(i, j - i), &ids[count]))
        throw std::invalid_argument("load_edge_list: malformed line " +
                                    std::to_string(line_no));
      ++count;
      i = j;
    }
    if (count != 2)
      throw std::invalid_argument("load_edge_list: malformed line " +
                                  std::to_string(line_no));

    ++stats.lines_parsed;
    max_id = std::max({max_id, ids[0], ids[1]});
    saw_id = true;
    if (ids[0] == ids[1]) {
      ++stats.self_loops_dropped;
      continue;
    }
    edges.emplace_back(ids[0], ids[1]);
    if (nl == std::string::npos) break;
  }

  if (!saw_id) throw std::invalid_argument("load_edge_list: empty input");

  std::sort(edges.begin(), edges.end());
  std::size_t before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  stats.duplicates_dropped = before - edges.size();

  NodeId num_nodes = max_id + 1;
  if (header_nodes) {
    if (header_n < num_nodes)
      throw std::invalid_argument(
          "load_edge_list: nodes= header smaller than max node id + 1");
    num_nodes = header_n;
  }
  return LoadResult{Graph(num_nodes, std::move(edges)), stats};
}

LoadResult load_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open edge list file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_edge_list(ss.str());
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "# nodes=" << g.num_nodes() << "\n";
  for (const Edge& e : g.edges()) out << e.a << " " << e.b << "\n";
  return out.str();
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write edge list file: " + path);
  out << format_edge_list(g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

// Component labels via BFS; labels are assigned in order of the smallest
// node id in each component.
std::vector<NodeId> component_labels(const Graph& g, std::size_t* n_components) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> label(n, n);
  NodeId next = 0;
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    label[s] = next;
    queue.assign(1, s);
    while (!queue.empty()) {
      NodeId u = queue.back();
      queue.pop_back();
      for (const NodeId* it = g.neighbors_begin(u); it != g.neighbors_end(u);
           ++it) {
        if (label[*it] == n) {
          label[*it] = next;
          queue.push_back(*it);
        }
      }
    }
    ++next;
  }
  *n_components = next;
  return label;
}

}  // namespace

LccResult largest_connected_component(const Graph& g) {
  if (g.num_nodes() == 0)
    throw std::invalid_argument("largest_connected_component: empty graph");
  std::size_t n_comp = 0;
  std::vector<NodeId> label = component_labels(g, &n_comp);
  std::vector<std::size_t> size(n_comp, 0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) ++size[label[u]];
  // Labels are in order of smallest contained node id, so the first maximal
  // component wins ties.
  std::size_t best = 0;
  for (std::size_t c = 1; c < n_comp; ++c)
    if (size[c] > size[best]) best = c;

  LccResult res;
  std::vector<NodeId> old_to_new(g.num_nodes(), 0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (label[u] == best) {
      old_to_new[u] = static_cast<NodeId>(res.new_to_old.size());
      res.new_to_old.push_back(u);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (label[e.a] == best)
      edges.emplace_back(old_to_new[e.a], old_to_new[e.b]);
  res.graph = Graph(static_cast<NodeId>(res.new_to_old.size()), std::move(edges));
  return res;
}

bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return false;
  std::size_t n_comp = 0;
  component_labels(g, &n_comp);
  return n_comp == 1;
}

namespace {

// Uniformly random spanning tree by Wilson's algorithm (loop-erased random
// walks). Requires a connected graph.
std::vector<Edge> uniform_spanning_tree(const Graph& g, Rng& rng) {
  const NodeId n = g.num_nodes();
  std::vector<Edge> tree;
  if (n <= 1) return tree;
  std::vector<bool> in_tree(n, false);
  std::vector<NodeId> next(n, 0);
  in_tree[0] = true;
  for (NodeId start = 1; start < n; ++start) {
    if (in_tree[start]) continue;
    NodeId u = start;
    while (!in_tree[u]) {
      const std::size_t deg = g.degree(u);
      next[u] = g.neighbors_begin(u)[rng.uniform_int(deg)];
      u = next[u];
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = true;
      tree.emplace_back(u, next[u]);
      u = next[u];
    }
  }
  return tree;
}

}  // namespace

EdgeSplit split_edges(const Graph& g, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw std::invalid_argument("split_edges: fraction must be in (0,1)");
  if (!is_connected(g))
    throw std::invalid_argument("split_edges: graph must be connected");
  const std::size_t n_edges = g.num_edges();
  const auto k = static_cast<std::size_t>(
      std::llround(val_fraction * static_cast<double>(n_edges)));
  if (k < 1)
    throw std::invalid_argument(
        "split_edges: round(fraction*|E|) must be >= 1");

  Rng rng(mix64(seed, 0x5e711u));
  std::vector<Edge> tree = uniform_spanning_tree(g, rng);
  std::sort(tree.begin(), tree.end());

  std::vector<Edge> candidates;
  candidates.reserve(n_edges - tree.size());
  for (const Edge& e : g.edges())
    if (!std::binary_search(tree.begin(), tree.end(), e))
      candidates.push_back(e);

  if (k > candidates.size()) {
    const double max_frac =
        static_cast<double>(candidates.size()) / static_cast<double>(n_edges);
    throw std::invalid_argument(
        "split_edges: cannot keep the training graph connected at fraction " +
        std::to_string(val_fraction) +
        "; maximum feasible fraction is " + std::to_string(max_frac));
  }

  // Partial Fisher-Yates over the non-tree candidates.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform_int(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  std::vector<Edge> val(candidates.begin(), candidates.begin() + k);

  std::vector<Edge> val_sorted = val;
  std::sort(val_sorted.begin(), val_sorted.end());
  std::vector<Edge> train_edges;
  train_edges.reserve(n_edges - k);
  for (const Edge& e : g.edges())
    if (!std::binary_search(val_sorted.begin(), val_sorted.end(), e))
      train_edges.push_back(e);

  // Frozen validation non-edges, uniform over the complement.
  const NodeId n = g.num_nodes();
  const std::size_t all_pairs =
      static_cast<std::size_t>(n) * (n - 1) / 2;
  if (all_pairs - n_edges < k)
    throw std::invalid_argument(
        "split_edges: complement too small for the non-edge sample");
  std::vector<Edge> non_edges;
  non_edges.reserve(k);
  while (non_edges.size() < k) {
    const NodeId u = static_cast<NodeId>(rng.uniform_int(n));
    const NodeId v = static_cast<NodeId>(rng.uniform_int(n));
    if (u == v) continue;
    Edge e(u, v);
    if (g.has_edge(e.a, e.b)) continue;
    if (std::find(non_edges.begin(), non_edges.end(), e) != non_edges.end())
      continue;
    non_edges.push_back(e);
  }

  EdgeSplit split;
  split.train = Graph(n, std::move(train_edges));
  split.validation_edges = std::move(val);
  split.validation_non_edges = std::move(non_edges);
  split.seed = seed;
  split.fraction = val_fraction;
  return split;
}

std::vector<std::pair<NodeId, NodeId>> sample_edge_batch(const Graph& g,
                                                         std::size_t m,
                                                         std::uint64_t seed,
                                                         std::uint64_t step) {
  if (m > g.num_edges())
    throw std::invalid_argument("sample_edge_batch: m exceeds edge count");
  Rng rng(mix64(seed, step, 0xba7c4u));
  std::vector<std::uint32_t> idx(g.num_edges());
  std::iota(idx.begin(), idx.end(), 0u);
  std::vector<std::pair<NodeId, NodeId>> batch;
  batch.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform_int(idx.size() - i));
    std::swap(idx[i], idx[j]);
    const Edge& e = g.edges()[idx[i]];
    if (rng.next_u64() & 1u)
      batch.emplace_back(e.b, e.a);
    else
      batch.emplace_back(e.a, e.b);
  }
  return batch;
}

std::vector<std::vector<NodeId>> sample_random_walks(const Graph& g,
                                                     std::size_t length,
                                                     std::size_t m,
                                                     std::uint64_t seed,
                                                     std::uint64_t step) {
  if (length < 2)
    throw std::invalid_argument("sample_random_walks: length must be >= 2");
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    if (g.degree(u) == 0)
      throw std::invalid_argument(
          "sample_random_walks: graph has an isolated node");
  Rng rng(mix64(seed, step, 0x3a1c5u));
  std::vector<std::vector<NodeId>> walks(m);
  for (std::size_t w = 0; w < m; ++w) {
    std::vector<NodeId>& walk = walks[w];
    walk.reserve(length);
    NodeId u = static_cast<NodeId>(rng.uniform_int(g.num_nodes()));
    walk.push_back(u);
    for (std::size_t t = 1; t < length; ++t) {
      u = g.neighbors_begin(u)[rng.uniform_int(g.degree(u))];
      walk.push_back(u);
    }
  }
  return walks;
}

}  // namespace dpgraphgen
