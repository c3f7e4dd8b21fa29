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

#include "dpgraphgen/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace dpgraphgen {

std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) best = std::max(best, g.degree(u));
  return best;
}

std::optional<double> assortativity(const Graph& g) {
  if (g.num_edges() == 0)
    throw std::invalid_argument("assortativity: graph has no edges");
  // Both orientations of every edge; the two marginals coincide.
  const double m2 = 2.0 * static_cast<double>(g.num_edges());
  double sum_x = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  for (const Edge& e : g.edges()) {
    const double da = static_cast<double>(g.degree(e.a));
    const double db = static_cast<double>(g.degree(e.b));
    sum_x += da + db;
    sum_xx += da * da + db * db;
    sum_xy += 2.0 * da * db;
  }
  const double mean = sum_x / m2;
  const double var = sum_xx / m2 - mean * mean;
  const double cov = sum_xy / m2 - mean * mean;
  if (var <= 1e-12 * std::max(1.0, mean * mean)) return std::nullopt;
  return cov / var;
}

std::uint64_t triangle_count(const Graph& g) {
  // Sorted-adjacency intersection over edges; each triangle is counted once
  // per edge, so divide by 3.
  std::uint64_t total = 0;
  for (const Edge& e : g.edges()) {
    const NodeId* a = g.neighbors_begin(e.a);
    const NodeId* ae = g.neighbors_end(e.a);
    const NodeId* b = g.neighbors_begin(e.b);
    const NodeId* be = g.neighbors_end(e.b);
    while (a != ae && b != be) {
      if (*a < *b)
        ++a;
      else if (*b < *a)
        ++b;
      else {
        ++total;
        ++a;
        ++b;
      }
    }
  }
  return total / 3;
}

namespace {

std::uint64_t wedge_count(const Graph& g) {
  std::uint64_t wedges = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const std::uint64_t d = g.degree(u);
    wedges += d * (d - 1) / 2;
  }
  return wedges;
}

}  // namespace

double clustering_coefficient(const Graph& g) {
  const std::uint64_t wedges = wedge_count(g);
  if (wedges == 0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) /
         static_cast<double>(wedges);
}

double mean_local_clustering(const Graph& g) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const std::size_t d = g.degree(u);
    if (d < 2) continue;
    std::uint64_t links = 0;
    for (const NodeId* it = g.neighbors_begin(u); it != g.neighbors_end(u);
         ++it)
      for (const NodeId* jt = it + 1; jt != g.neighbors_end(u); ++jt)
        if (g.has_edge(*it, *jt)) ++links;
    sum += 2.0 * static_cast<double>(links) /
           (static_cast<double>(d) * static_cast<double>(d - 1));
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

PowerLawFit power_law_exponent(const Graph& g) {
  PowerLawFit fit;
  std::size_t d_min = std::numeric_limits<std::size_t>::max();
  std::size_t d_max = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const std::size_t d = g.degree(u);
    if (d == 0) {
      ++fit.isolated_nodes;
      continue;
    }
    ++fit.fitted_nodes;
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }
  if (fit.fitted_nodes == 0)
    throw std::invalid_argument("power_law_exponent: min degree must be >= 1");
  fit.min_degree = d_min;
  if (d_min == d_max) return fit;  // degenerate: infinite-exponent sentinel
  const double x0 = static_cast<double>(d_min) - 0.5;
  double log_sum = 0.0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const std::size_t d = g.degree(u);
    if (d == 0) continue;
    log_sum += std::log(static_cast<double>(d) / x0);
  }
  fit.alpha = 1.0 + static_cast<double>(fit.fitted_nodes) / log_sum;
  return fit;
}

PathLengthStats characteristic_path_length(const Graph& g) {
  if (g.num_edges() == 0)
    throw std::invalid_argument(
        "characteristic_path_length: graph has no connected pair");
  const NodeId n = g.num_nodes();

  // BFS from every source; integer accumulators keep the parallel
  // reduction exact and order-independent.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, 8);
  std::vector<std::uint64_t> dist_sum(workers, 0);
  std::vector<std::uint64_t> pair_cnt(workers, 0);

  auto bfs_range = [&](unsigned worker) {
    std::vector<std::uint32_t> dist(n);
    std::vector<NodeId> frontier, next;
    for (NodeId s = worker; s < n; s += workers) {
      std::fill(dist.begin(), dist.end(), 0xffffffffu);
      dist[s] = 0;
      frontier.assign(1, s);
      std::uint32_t level = 0;
      while (!frontier.empty()) {
        ++level;
        next.clear();
        for (NodeId u : frontier)
          for (const NodeId* it = g.neighbors_begin(u);
               it != g.neighbors_end(u); ++it)
            if (dist[*it] == 0xffffffffu) {
              dist[*it] = level;
              next.push_back(*it);
            }
        frontier.swap(next);
      }
      for (NodeId v = 0; v < n; ++v)
        if (v != s && dist[v] != 0xffffffffu) {
          dist_sum[worker] += dist[v];
          ++pair_cnt[worker];
        }
    }
  };

  if (workers == 1) {
    bfs_range(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(bfs_range, w);
    for (std::thread& t : pool) t.join();
  }

  std::uint64_t total = 0, pairs = 0;
  for (unsigned w = 0; w < workers; ++w) {
    total += dist_sum[w];
    pairs += pair_cnt[w];
  }
  // Ordered pairs counted twice; ratios are unaffected.
  if (pairs == 0)
    throw std::invalid_argument(
        "characteristic_path_length: graph has no connected pair");
  PathLengthStats st;
  st.characteristic_path_length =
      static_cast<double>(total) / static_cast<double>(pairs);
  const std::uint64_t all_ordered =
      static_cast<std::uint64_t>(n) * (n - 1);
  st.disconnected_pair_fraction =
      1.0 - static_cast<double>(pairs) / static_cast<double>(all_ordered);
  return st;
}

double edge_overlap(const Graph& generated, const Graph& original) {
  if (generated.num_nodes() != original.num_nodes())
    throw std::invalid_argument("edge_overlap: node universes differ");
  if (original.num_edges() == 0) return 0.0;
  std::size_t shared = 0;
  for (const Edge& e : generated.edges())
    if (original.has_edge(e.a, e.b)) ++shared;
  return static_cast<double>(shared) /
         static_cast<double>(original.num_edges());
}

LinkPredictionScores link_prediction(const ScoreMatrix& sm,
                                     const EdgeSplit& split) {
  if (!sm.symmetrized())
    throw std::invalid_argument("link_prediction: matrix must be symmetrized");
  if (split.validation_edges.empty() || split.validation_non_edges.empty())
    throw std::invalid_argument("link_prediction: empty validation split");

  struct Item {
    double score;
    NodeId i, j;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(split.validation_edges.size() +
                split.validation_non_edges.size());
  for (const Edge& e : split.validation_edges)
    items.push_back({static_cast<double>(sm.count(e.a, e.b)), e.a, e.b, true});
  for (const Edge& e : split.validation_non_edges)
    items.push_back({static_cast<double>(sm.count(e.a, e.b)), e.a, e.b, false});

  // AUC by the rank statistic with average ranks on ties.
  std::vector<std::size_t> order(items.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].score < items[b].score;
  });
  const double np = static_cast<double>(split.validation_edges.size());
  const double nn = static_cast<double>(split.validation_non_edges.size());
  double rank_sum_pos = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t j = k;
    while (j < order.size() &&
           items[order[j]].score == items[order[k]].score)
      ++j;
    const double avg_rank = (static_cast<double>(k + 1) +
                             static_cast<double>(j)) / 2.0;  // 1-based
    for (std::size_t t = k; t < j; ++t)
      if (items[order[t]].positive) rank_sum_pos += avg_rank;
    k = j;
  }
  LinkPredictionScores out;
  out.auc = (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);

  // AP: descending score, ties broken by ascending (i, j).
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  double hits = 0.0, ap_sum = 0.0;
  for (std::size_t t = 0; t < items.size(); ++t) {
    if (!items[t].positive) continue;
    hits += 1.0;
    ap_sum += hits / static_cast<double>(t + 1);
  }
  out.ap = ap_sum / np;
  return out;
}

namespace {

nlohmann::json number_or_sentinel(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "undefined";
  return v;
}

std::string csv_number_or_sentinel(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "undefined";
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

}  // namespace

std::string EvaluationReport::to_json() const {
  nlohmann::json j;
  j["max_degree"] = max_degree;
  j["assortativity"] =
      assortativity ? nlohmann::json(*assortativity) : nlohmann::json("undefined");
  j["triangle_count"] = triangle_count;
  j["power_law_exponent"] = power_law_exponent
                                ? nlohmann::json(*power_law_exponent)
                                : nlohmann::json("inf");
  j["clustering_coefficient"] = clustering_coefficient;
  j["mean_local_clustering"] = mean_local_clustering;
  j["characteristic_path_length"] = characteristic_path_length;
  j["disconnected_pair_fraction"] = disconnected_pair_fraction;
  j["edge_overlap"] = edge_overlap;
  j["auc"] = auc;
  j["ap"] = ap;
  j["isolated_nodes"] = isolated_nodes;
  j["epsilon_at_eval"] = number_or_sentinel(epsilon_at_eval);
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["label"] = label;
  j["ap_tie_break"] = "score desc, pair lex asc";
  return j.dump(2) + "\n";
}

std::string EvaluationReport::csv_header() {
  return "label,seed,config_hash,epsilon_at_eval,max_degree,assortativity,"
         "triangle_count,power_law_exponent,clustering_coefficient,"
         "mean_local_clustering,characteristic_path_length,"
         "disconnected_pair_fraction,edge_overlap,auc,ap,isolated_nodes";
}

std::string EvaluationReport::to_csv_row() const {
  std::ostringstream ss;
  ss.precision(12);
  ss << label << "," << seed << "," << config_hash << ","
     << csv_number_or_sentinel(epsilon_at_eval) << "," << max_degree << ","
     << (assortativity ? csv_number_or_sentinel(*assortativity) : "undefined")
     << "," << triangle_count << ","
     << (power_law_exponent ? csv_number_or_sentinel(*power_law_exponent)
                            : "inf")
     << "," << clustering_coefficient << "," << mean_local_clustering << ","
     << characteristic_path_length << "," << disconnected_pair_fraction << ","
     << edge_overlap << "," << auc << "," << ap << "," << isolated_nodes;
  return ss.str();
}

EvaluationReport evaluate_generated(const Graph& generated,
                                    const Graph& original,
                                    const ScoreMatrix& sm,
                                    const EdgeSplit& split,
                                    double epsilon_at_eval) {
  EvaluationReport rep;
  rep.max_degree = max_degree(generated);
  rep.assortativity =
      generated.num_edges() > 0 ? assortativity(generated) : std::nullopt;
  rep.triangle_count = triangle_count(generated);
  if (generated.num_edges() > 0) {
    const PowerLawFit fit = power_law_exponent(generated);
    rep.power_law_exponent = fit.alpha;
    rep.isolated_nodes = fit.isolated_nodes;
    const PathLengthStats pls = characteristic_path_length(generated);
    rep.characteristic_path_length = pls.characteristic_path_length;
    rep.disconnected_pair_fraction = pls.disconnected_pair_fraction;
  }
  rep.clustering_coefficient = clustering_coefficient(generated);
  rep.mean_local_clustering = mean_local_clustering(generated);
  rep.edge_overlap = edge_overlap(generated, original);
  const LinkPredictionScores lp = link_prediction(sm, split);
  rep.auc = lp.auc;
  rep.ap = lp.ap;
  rep.epsilon_at_eval = epsilon_at_eval;
  return rep;
}

}  // namespace dpgraphgen
