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

#ifndef DPGRAPHGEN_TRAINER_HPP_
#define DPGRAPHGEN_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dpgraphgen/accountant.hpp"
#include "dpgraphgen/dp_sgd.hpp"
#include "dpgraphgen/graph.hpp"
#include "dpgraphgen/model.hpp"

namespace dpgraphgen {

struct GanConfig {
  double lambda_gp = 10.0;
  int n_critic = 3;
  std::size_t batch_size = 2048;
  AdamConfig adam;                // alpha 1e-3, beta1 0.5, beta2 0.9
  int checkpoint_epochs = 5;      // epochs per checkpoint
  int patience = 5;               // checkpoints without improvement
  int max_epochs = 200;

  void validate() const;
};

enum class BudgetConvention {
  kEpsilonAtDelta,  // stop when epsilon(target_delta) > target_epsilon
  kDeltaAtEpsilon,  // stop when delta(target_epsilon) > target_delta
};

enum class SamplingScheme { kFixedSize, kPoisson };

struct DpConfig {
  bool enabled = true;
  double clip_bound = 1.0;
  double noise_scale = 1.0;
  double target_delta = 1e-5;
  double target_epsilon = std::numeric_limits<double>::infinity();
  BudgetConvention convention = BudgetConvention::kEpsilonAtDelta;
  SamplingScheme sampling = SamplingScheme::kFixedSize;

  void validate() const;
};

struct CheckpointRecord {
  int index = 0;
  int epoch = 0;
  double disc_loss = 0.0;   // mean critic loss since the last checkpoint
  double gen_loss = 0.0;    // mean generator loss since the last checkpoint
  double auc = 0.0;
  double ap = 0.0;
  double epsilon = 0.0;     // at target_delta; +inf when privacy is off
  double delta = 0.0;       // at target_epsilon when finite, else target_delta
  double wall_seconds = 0.0;
};

struct TrainHistory {
  std::vector<CheckpointRecord> records;
};

enum class StopReason {
  kMaxEpochs,
  kEarlyStopping,
  kPrivacyBudget,
  kCallback,
};

const char* to_string(StopReason reason);

// Tracks the best validation metric; stop when it has not improved in the
// last `patience` observations.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience);
  // Returns true when training should stop after this observation.
  bool observe(double metric);
  int best_index() const { return best_index_; }
  int observations() const { return count_; }

 private:
  int patience_;
  int count_ = 0;
  int best_index_ = -1;
  double best_metric_ = -std::numeric_limits<double>::infinity();
};

// One critic example: a real sequence, a generated sequence (hard tokens),
// and the interpolation coefficient for the gradient penalty.
struct CriticExample {
  std::vector<std::uint32_t> real_tokens;
  std::vector<std::uint32_t> fake_tokens;
  double rho = 0.5;
};

struct CriticLossParts {
  double d_real = 0.0;
  double d_fake = 0.0;
  double penalty = 0.0;
  double loss = 0.0;  // d_fake - d_real + penalty
};

// Gradient of the per-example critic loss
//   l = D(fake) - D(real) + lambda (||grad_xhat D(xhat)||_2 - 1)^2,
// xhat = rho real + (1-rho) fake in probability-vector space, w.r.t. the
// discriminator parameters. Exact: the penalty term is differentiated with a
// forward-over-reverse (dual number) pass.
std::vector<double> critic_example_gradient(const DiscriminatorState& disc,
                                            const CriticExample& example,
                                            double lambda_gp,
                                            CriticLossParts* parts = nullptr);

struct CriticBatchLoss {
  double total = 0.0;
  std::vector<CriticLossParts> per_example;
};

// Loss only (no parameter gradients), on batches given in relaxed-vector
// form (per-step probability vectors). rho is drawn per example from seed.
CriticBatchLoss critic_loss(
    const DiscriminatorState& disc,
    const std::vector<std::vector<std::vector<double>>>& real_batch,
    const std::vector<std::vector<std::vector<double>>>& fake_batch,
    double lambda_gp, std::uint64_t seed);

struct CriticStepRecord {
  double loss = 0.0;
  double d_real = 0.0;
  double d_fake = 0.0;
  double penalty = 0.0;
  std::size_t batch_examples = 0;
  double epsilon_after = 0.0;
};

struct TrainResult {
  GeneratorState best_generator;
  DiscriminatorState final_discriminator;
  TrainHistory history;
  PrivacyLedger ledger;
  StopReason stop_reason = StopReason::kMaxEpochs;
  int best_checkpoint_index = -1;
  int epochs_run = 0;
};

// Checkpoint hook; return false to request a stop (reason kCallback).
using CheckpointCallback = std::function<bool(
    const CheckpointRecord&, const GeneratorState&, const DiscriminatorState&,
    const PrivacyLedger&)>;

// Owns the generator/discriminator states, optimizers, and privacy ledger,
// and exposes the individual steps of the training loop.
class TrainingRun {
 public:
  TrainingRun(const Graph& train_graph, const ModelConfig& model_cfg,
              const GanConfig& gan_cfg, const DpConfig& dp_cfg,
              std::uint64_t seed, int num_threads = 0);

  // One discriminator update: per-example gradients, individual clipping,
  // noisy aggregation, Adam, one accountant step. Returns nullopt without
  // updating anything when the privacy budget is already exceeded.
  std::optional<CriticStepRecord> critic_step();

  // One generator update (no clipping or noise: the generator touches data
  // only through the discriminator's post-noise signal).
  double generator_step();

  bool budget_exceeded() const;
  double current_epsilon() const;  // at target_delta

  // Runs the full loop with checkpoint evaluation against the split.
  TrainResult run(const EdgeSplit& split, int checkpoint_sample_volume,
                  const CheckpointCallback& on_checkpoint = nullptr);

  const GeneratorState& generator() const { return gen_; }
  const DiscriminatorState& discriminator() const { return disc_; }
  GeneratorState& mutable_generator() { return gen_; }
  DiscriminatorState& mutable_discriminator() { return disc_; }
  const PrivacyLedger& ledger() const { return ledger_; }
  std::uint64_t critic_steps() const { return critic_steps_; }
  std::size_t iterations_per_epoch() const { return iters_per_epoch_; }

 private:
  CriticStepRecord critic_step_unchecked();

  const Graph& graph_;
  ModelConfig model_cfg_;
  GanConfig gan_cfg_;
  DpConfig dp_cfg_;
  std::uint64_t seed_;
  int threads_;
  std::size_t iters_per_epoch_;

  GeneratorState gen_;
  DiscriminatorState disc_;
  AdamOptimizer disc_opt_;
  AdamOptimizer gen_opt_;
  PrivacyLedger ledger_;
  std::uint64_t critic_steps_ = 0;
  std::uint64_t gen_steps_ = 0;
};

// Convenience wrapper mirroring the pipeline's training stage.
TrainResult train(const EdgeSplit& split, const ModelConfig& model_cfg,
                  const GanConfig& gan_cfg, const DpConfig& dp_cfg,
                  std::uint64_t seed, int checkpoint_sample_volume = 40000,
                  const CheckpointCallback& on_checkpoint = nullptr,
                  int num_threads = 0);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_TRAINER_HPP_
