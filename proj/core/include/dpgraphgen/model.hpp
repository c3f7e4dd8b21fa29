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

#ifndef DPGRAPHGEN_MODEL_HPP_
#define DPGRAPHGEN_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dpgraphgen/detail/nets.hpp"
#include "dpgraphgen/rng.hpp"

namespace dpgraphgen {

struct ModelConfig {
  std::uint32_t num_nodes = 0;
  int noise_dim = 16;
  int hidden_dim = 40;
  int down_projection_dim = 64;
  int sequence_length = 2;  // 2 in edge mode, walk length in walk mode
  double temperature = 1.0;

  void validate() const;
};

struct ParamGroup {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
};

// Named parameter groups backed by one flat array.
struct NetParams {
  std::vector<ParamGroup> groups;
  std::vector<double> values;

  std::size_t total() const { return values.size(); }
  const ParamGroup& group(const std::string& name) const;
  double* group_data(const std::string& name);
  const double* group_data(const std::string& name) const;
  // Name of the first group containing a non-finite value, empty if none.
  std::string first_non_finite_group() const;
};

namespace detail {

struct GenWeights {
  const double* w_init;  // 2H x Z
  const double* b_init;  // 2H
  const double* start;   // P
  const double* emb;     // N x P (row per token)
  const double* w_lstm;  // 4H x (P+H)
  const double* b_lstm;  // 4H
  const double* w_out;   // N x H
  const double* b_out;   // N
  int num_nodes;
  int noise_dim;
  int proj_dim;
  int hidden_dim;
  int steps;
  double temperature;
};

struct GenGrads {
  double* w_init;
  double* b_init;
  double* start;
  double* emb;
  double* w_lstm;
  double* b_lstm;
  double* w_out;
  double* b_out;
};

// Full generator forward trace for one sample, kept for backward.
struct GenTrace {
  std::vector<double> z;
  std::vector<double> h0, c0;
  std::vector<int> tokens;         // T
  std::vector<double> relaxed;     // T*N
  std::vector<double> u;           // T*P
  std::vector<double> gi, gf, gg, go, c, tc, h;  // T*H
};

}  // namespace detail

// Recurrent sequence generator: noise -> affine initial state -> LSTM ->
// per-step logits over node ids -> straight-through categorical samples.
struct GeneratorState {
  ModelConfig config;
  NetParams params;
  std::uint64_t global_step = 0;

  detail::GenWeights weights() const;
};

// Recurrent critic: per-step probability vectors -> down-projection -> LSTM
// -> scalar score from the final hidden state.
struct DiscriminatorState {
  ModelConfig config;
  NetParams params;
  std::uint64_t global_step = 0;

  detail::DiscWeights weights() const;
  detail::DiscGrads<double> grads_view(std::vector<double>& flat) const;
  detail::DiscGrads<detail::Dual> grads_view(
      std::vector<detail::Dual>& flat) const;
};

// Uniform [-0.05, 0.05] weights, zero biases.
GeneratorState init_generator(const ModelConfig& cfg, std::uint64_t seed);
DiscriminatorState init_discriminator(const ModelConfig& cfg,
                                      std::uint64_t seed);

struct RelaxedSample {
  std::vector<double> relaxed;  // softmax((logits + gumbel) / temperature)
  int hard = 0;                 // argmax(logits + gumbel)
};

// Perturbed-logit categorical draw with a temperature-relaxed companion
// vector. Forward consumers use the hard index; gradients flow through the
// relaxed vector (straight-through).
RelaxedSample relaxed_sample_step(const std::vector<double>& logits,
                                  double temperature, std::uint64_t seed);
RelaxedSample relaxed_sample_step(const std::vector<double>& logits,
                                  double temperature, Rng& rng);

// Hard token sequences from the generator; every id is in [0, num_nodes).
// Deterministic given seed. Throws if sampling hits non-finite logits,
// naming the offending parameter group.
std::vector<std::vector<std::uint32_t>> generate_samples(
    const GeneratorState& gen, std::size_t count, std::uint64_t seed);

// Sharded variant: results are identical to generate_samples for the same
// (count, seed) regardless of thread count.
std::vector<std::vector<std::uint32_t>> generate_samples_parallel(
    const GeneratorState& gen, std::size_t count, std::uint64_t seed,
    int num_threads);

// Scores a batch of sequences given as per-step probability vectors
// (length num_nodes each). Scores are per-sequence: no cross-batch coupling.
// Throws on wrong vector length.
std::vector<double> discriminator_scores(
    const DiscriminatorState& disc,
    const std::vector<std::vector<std::vector<double>>>& batch);

// Checkpoint container: magic + version + JSON manifest (config, parameter
// group names/shapes, global step, RNG state) followed by the flat arrays.
struct Checkpoint {
  std::string kind;  // "generator" or "discriminator"
  ModelConfig config;
  NetParams params;
  std::uint64_t global_step = 0;
  std::string rng_state;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

GeneratorState generator_from_checkpoint(const Checkpoint& ckpt);
DiscriminatorState discriminator_from_checkpoint(const Checkpoint& ckpt);
Checkpoint to_checkpoint(const GeneratorState& gen, const std::string& rng_state);
Checkpoint to_checkpoint(const DiscriminatorState& disc,
                         const std::string& rng_state);

namespace detail {

GenGrads gen_grads_view(const GeneratorState& gen, std::vector<double>& flat);

// Samples z and gumbels from rng; fills the trace and returns hard tokens.
void gen_forward(const GenWeights& w, Rng& rng, GenTrace& tr);

// dy: T dense vectors (dL/d straight-through output). Gradients w.r.t. the
// logits are taken through the relaxed softmax; the hard feedback path into
// the next step is non-differentiable. Accumulates into grads.
void gen_backward(const GenWeights& w, const GenTrace& tr,
                  const std::vector<std::vector<double>>& dy, GenGrads& grads);

}  // namespace detail

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_MODEL_HPP_
