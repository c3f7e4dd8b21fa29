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

#include "dpgraphgen/assembler.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dpgraphgen/rng.hpp"

namespace dpgraphgen {

std::uint64_t ScoreMatrix::count(NodeId i, NodeId j) const {
  if (i >= size_ || j >= size_)
    throw std::invalid_argument("ScoreMatrix: id out of range");
  if (symmetrized_ && i > j) std::swap(i, j);
  const auto it =
      counts_.find(static_cast<std::uint64_t>(i) * size_ + j);
  return it == counts_.end() ? 0 : it->second;
}

void ScoreMatrix::add_ordered_pair(NodeId i, NodeId j, std::uint64_t times) {
  if (i >= size_ || j >= size_)
    throw std::invalid_argument("ScoreMatrix: id out of range");
  if (symmetrized_)
    throw std::logic_error("ScoreMatrix: cannot add after symmetrize");
  if (times == 0) return;
  if (i == j) {
    dropped_self_pairs_ += times;
    return;
  }
  counts_[static_cast<std::uint64_t>(i) * size_ + j] += times;
}

void ScoreMatrix::symmetrize() {
  if (symmetrized_) return;
  std::unordered_map<std::uint64_t, std::uint64_t> merged;
  merged.reserve(counts_.size());
  for (const auto& [key, c] : counts_) {
    const NodeId i = static_cast<NodeId>(key / size_);
    const NodeId j = static_cast<NodeId>(key % size_);
    const std::uint64_t canon =
        (i < j) ? key : static_cast<std::uint64_t>(j) * size_ + i;
    auto& slot = merged[canon];
    slot = std::max(slot, c);
  }
  counts_ = std::move(merged);
  symmetrized_ = true;
}

std::vector<std::tuple<NodeId, NodeId, std::uint64_t>> ScoreMatrix::entries()
    const {
  std::vector<std::tuple<NodeId, NodeId, std::uint64_t>> out;
  out.reserve(counts_.size());
  for (const auto& [key, c] : counts_)
    out.emplace_back(static_cast<NodeId>(key / size_),
                     static_cast<NodeId>(key % size_), c);
  std::sort(out.begin(), out.end());
  return out;
}

ScoreMatrix count_edges(const std::vector<std::pair<NodeId, NodeId>>& samples,
                        NodeId size) {
  ScoreMatrix sm(size);
  for (const auto& [i, j] : samples) sm.add_ordered_pair(i, j);
  return sm;
}

ScoreMatrix count_sample_sequences(
    const std::vector<std::vector<std::uint32_t>>& sequences, NodeId size) {
  ScoreMatrix sm(size);
  for (const auto& seq : sequences)
    for (std::size_t t = 0; t + 1 < seq.size(); ++t)
      sm.add_ordered_pair(seq[t], seq[t + 1]);
  return sm;
}

AssemblyResult assemble_graph(const ScoreMatrix& sm, std::size_t target_edges,
                              std::uint64_t seed) {
  if (!sm.symmetrized())
    throw std::invalid_argument("assemble_graph: matrix must be symmetrized");
  const NodeId n = sm.size();
  const auto entries = sm.entries();  // (i, j, count), i < j, sorted
  if (entries.empty())
    throw std::invalid_argument("assemble_graph: matrix has no support");
  if (target_edges > entries.size())
    throw std::invalid_argument(
        "assemble_graph: support too small for " +
        std::to_string(target_edges) + " edges; maximum achievable is " +
        std::to_string(entries.size()));

  // Row-wise view for phase 1.
  std::vector<std::vector<std::pair<NodeId, std::uint64_t>>> rows(n);
  for (const auto& [i, j, c] : entries) {
    rows[i].emplace_back(j, c);
    rows[j].emplace_back(i, c);
  }

  Rng rng(mix64(seed, 0xa55e8u));
  std::set<Edge> chosen;

  // Phase 1: every supported node draws one neighbor from its row
  // distribution, guaranteeing min degree >= 1 on supported nodes.
  std::size_t isolated = 0;
  std::vector<std::pair<NodeId, NodeId>> phase1_choices;
  for (NodeId i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (row.empty()) {
      ++isolated;
      continue;
    }
    std::uint64_t total = 0;
    for (const auto& [j, c] : row) total += c;
    std::uint64_t pick = rng.uniform_int(total);
    NodeId neighbor = row.back().first;
    for (const auto& [j, c] : row) {
      if (pick < c) {
        neighbor = j;
        break;
      }
      pick -= c;
    }
    chosen.insert(Edge(i, neighbor));
    phase1_choices.emplace_back(i, neighbor);
  }
  const std::size_t phase1 = chosen.size();
  if (phase1 > target_edges)
    throw std::invalid_argument(
        "assemble_graph: per-node pass already yields " +
        std::to_string(phase1) + " unique edges, above the target of " +
        std::to_string(target_edges));

  // Phase 2: global sampling with rejection of already-present edges. After
  // a burst of consecutive rejections the cumulative table is rebuilt over
  // the remaining support, which leaves the conditional distribution
  // unchanged.
  std::vector<std::size_t> live;  // indices into entries
  std::vector<std::uint64_t> cum;
  auto rebuild = [&]() {
    live.clear();
    cum.clear();
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& [i, j, c] = entries[k];
      if (chosen.count(Edge(i, j))) continue;
      live.push_back(k);
      acc += c;
      cum.push_back(acc);
    }
  };
  rebuild();
  constexpr int kRejectionBurst = 64;
  int rejections = 0;
  while (chosen.size() < target_edges) {
    if (rejections >= kRejectionBurst) {
      rebuild();
      rejections = 0;
    }
    const std::uint64_t pick = rng.uniform_int(cum.back());
    const std::size_t pos = static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin());
    const auto& [i, j, c] = entries[live[pos]];
    if (!chosen.insert(Edge(i, j)).second) {
      ++rejections;
      continue;
    }
    rejections = 0;
  }

  AssemblyResult res;
  res.graph = Graph(n, std::vector<Edge>(chosen.begin(), chosen.end()));
  res.isolated_nodes = isolated;
  res.phase1_edges = phase1;
  res.dropped_self_pairs = sm.dropped_self_pairs();
  res.phase1_choices = std::move(phase1_choices);
  return res;
}

}  // namespace dpgraphgen
