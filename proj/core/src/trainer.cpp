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

#include "dpgraphgen/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dpgraphgen/assembler.hpp"
#include "dpgraphgen/evaluation.hpp"

namespace dpgraphgen {

namespace {

constexpr std::uint64_t kRealStream = 0x4ea1u;
constexpr std::uint64_t kFakeStream = 0xfa4eu;
constexpr std::uint64_t kRhoStream = 0x4b0au;
constexpr std::uint64_t kNoiseStream = 0x015eu;
constexpr std::uint64_t kGenZStream = 0x6e24u;
constexpr std::uint64_t kCheckpointStream = 0xc4ecu;
constexpr std::uint64_t kPoissonStream = 0xb044u;

constexpr std::size_t kGradShards = 16;

}  // namespace

void GanConfig::validate() const {
  if (n_critic < 1) throw std::invalid_argument("GanConfig: n_critic >= 1");
  if (batch_size < 1) throw std::invalid_argument("GanConfig: batch_size >= 1");
  if (lambda_gp < 0.0)
    throw std::invalid_argument("GanConfig: lambda_gp must be >= 0");
  if (checkpoint_epochs < 1 || patience < 1 || max_epochs < 1)
    throw std::invalid_argument(
        "GanConfig: checkpoint_epochs, patience, max_epochs must be >= 1");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 &&
        adam.beta2 < 1.0))
    throw std::invalid_argument("GanConfig: Adam betas must be in [0,1)");
}

void DpConfig::validate() const {
  if (!enabled) return;
  if (!(clip_bound > 0.0))
    throw std::invalid_argument("DpConfig: clip_bound must be > 0 when enabled");
  if (noise_scale < 0.0)
    throw std::invalid_argument("DpConfig: noise_scale must be >= 0");
  if (!(target_delta > 0.0 && target_delta < 1.0))
    throw std::invalid_argument("DpConfig: target_delta must be in (0,1)");
  if (!(target_epsilon > 0.0))
    throw std::invalid_argument("DpConfig: target_epsilon must be > 0");
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxEpochs: return "max epochs";
    case StopReason::kEarlyStopping: return "early stopping";
    case StopReason::kPrivacyBudget: return "privacy budget";
    case StopReason::kCallback: return "callback";
  }
  return "unknown";
}

EarlyStopper::EarlyStopper(int patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("EarlyStopper: patience >= 1");
}

bool EarlyStopper::observe(double metric) {
  if (metric > best_metric_) {
    best_metric_ = metric;
    best_index_ = count_;
  }
  ++count_;
  return count_ - 1 - best_index_ >= patience_;
}

// ---------------------------------------------------------------------------
// Per-example critic gradient

namespace {

using detail::DiscTrace;
using detail::DiscWeights;
using detail::Dual;
using detail::StepInput;

// Scratch and logic for one worker thread.
struct CriticWorker {
  const DiscriminatorState* disc;
  DiscWeights w;
  double lambda = 0.0;

  DiscTrace<double> tr;
  DiscTrace<Dual> trd;
  std::vector<std::vector<double>> dx;
  std::vector<double> grad;
  std::vector<Dual> dual_grad;
  std::vector<StepInput> x_fake, x_real, x_interp;

  void bind(const DiscriminatorState& d, double lambda_gp) {
    disc = &d;
    w = d.weights();
    lambda = lambda_gp;
  }

  // Gradient of l = D(fake) - D(real) + lambda (||grad_x D(xhat)|| - 1)^2
  // w.r.t. the discriminator parameters, written into `grad`.
  void compute(const CriticExample& ex, CriticLossParts* parts) {
    const std::size_t steps = ex.real_tokens.size();
    if (ex.fake_tokens.size() != steps)
      throw std::invalid_argument("critic example: sequence length mismatch");
    x_fake.assign(steps, StepInput{});
    x_real.assign(steps, StepInput{});
    x_interp.assign(steps, StepInput{});
    for (std::size_t t = 0; t < steps; ++t) {
      const int rt = static_cast<int>(ex.real_tokens[t]);
      const int ft = static_cast<int>(ex.fake_tokens[t]);
      x_real[t].entries = {{rt, 1.0}};
      x_fake[t].entries = {{ft, 1.0}};
      if (rt == ft)
        x_interp[t].entries = {{rt, 1.0}};
      else
        x_interp[t].entries = {{rt, ex.rho}, {ft, 1.0 - ex.rho}};
    }

    grad.assign(disc->params.total(), 0.0);
    auto gview = disc->grads_view(grad);

    const double d_fake = detail::disc_forward<double>(w, x_fake, tr);
    detail::disc_backward<double>(w, x_fake, tr, 1.0, &gview, nullptr);
    const double d_real = detail::disc_forward<double>(w, x_real, tr);
    detail::disc_backward<double>(w, x_real, tr, -1.0, &gview, nullptr);

    double penalty = 0.0;
    if (lambda > 0.0) {
      detail::disc_forward<double>(w, x_interp, tr);
      detail::disc_backward<double>(w, x_interp, tr, 1.0, nullptr, &dx);
      double norm_sq = 0.0;
      for (const auto& step : dx)
        for (double v : step) norm_sq += v * v;
      const double norm = std::sqrt(norm_sq);
      penalty = lambda * (norm - 1.0) * (norm - 1.0);
      if (norm > 1e-12) {
        // Dual pass with the input tangent seeded to grad_x D(xhat): the
        // tangents of the parameter gradients give
        // d/dw <grad_x D, u> = (d^2 D / dw dx) u.
        for (std::size_t t = 0; t < steps; ++t)
          x_interp[t].tangent = dx[t].data();
        dual_grad.assign(disc->params.total(), Dual(0.0));
        auto dview = disc->grads_view(dual_grad);
        detail::disc_forward<Dual>(w, x_interp, trd);
        detail::disc_backward<Dual>(w, x_interp, trd, Dual(1.0), &dview,
                                    nullptr);
        const double coeff = 2.0 * lambda * (norm - 1.0) / norm;
        for (std::size_t i = 0; i < grad.size(); ++i)
          grad[i] += coeff * dual_grad[i].t;
        for (std::size_t t = 0; t < steps; ++t) x_interp[t].tangent = nullptr;
      }
    }

    if (parts != nullptr) {
      parts->d_real = d_real;
      parts->d_fake = d_fake;
      parts->penalty = penalty;
      parts->loss = d_fake - d_real + penalty;
    }
  }
};

}  // namespace

std::vector<double> critic_example_gradient(const DiscriminatorState& disc,
                                            const CriticExample& example,
                                            double lambda_gp,
                                            CriticLossParts* parts) {
  CriticWorker worker;
  worker.bind(disc, lambda_gp);
  worker.compute(example, parts);
  return std::move(worker.grad);
}

CriticBatchLoss critic_loss(
    const DiscriminatorState& disc,
    const std::vector<std::vector<std::vector<double>>>& real_batch,
    const std::vector<std::vector<std::vector<double>>>& fake_batch,
    double lambda_gp, std::uint64_t seed) {
  if (real_batch.size() != fake_batch.size())
    throw std::invalid_argument("critic_loss: batch size mismatch");
  const DiscWeights w = disc.weights();
  const int N = w.num_nodes;
  Rng rho_rng(mix64(seed, kRhoStream));

  auto to_inputs = [&](const std::vector<std::vector<double>>& seq) {
    std::vector<StepInput> x(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (seq[t].size() != static_cast<std::size_t>(N))
        throw std::invalid_argument("critic_loss: step vector length");
      for (int i = 0; i < N; ++i)
        if (seq[t][i] != 0.0) x[t].entries.emplace_back(i, seq[t][i]);
    }
    return x;
  };

  CriticBatchLoss out;
  DiscTrace<double> tr;
  std::vector<std::vector<double>> dx;
  for (std::size_t b = 0; b < real_batch.size(); ++b) {
    const double rho = rho_rng.uniform();
    if (real_batch[b].size() != fake_batch[b].size())
      throw std::invalid_argument("critic_loss: sequence length mismatch");
    const auto xr = to_inputs(real_batch[b]);
    const auto xf = to_inputs(fake_batch[b]);

    CriticLossParts parts;
    parts.d_fake = detail::disc_forward<double>(w, xf, tr);
    parts.d_real = detail::disc_forward<double>(w, xr, tr);
    if (lambda_gp > 0.0) {
      std::vector<StepInput> xi(xr.size());
      for (std::size_t t = 0; t < xr.size(); ++t) {
        std::vector<double> dense(N, 0.0);
        for (const auto& [i, v] : xr[t].entries) dense[i] += rho * v;
        for (const auto& [i, v] : xf[t].entries) dense[i] += (1.0 - rho) * v;
        for (int i = 0; i < N; ++i)
          if (dense[i] != 0.0) xi[t].entries.emplace_back(i, dense[i]);
      }
      detail::disc_forward<double>(w, xi, tr);
      detail::disc_backward<double>(w, xi, tr, 1.0, nullptr, &dx);
      double norm_sq = 0.0;
      for (const auto& step : dx)
        for (double v : step) norm_sq += v * v;
      const double norm = std::sqrt(norm_sq);
      parts.penalty = lambda_gp * (norm - 1.0) * (norm - 1.0);
    }
    parts.loss = parts.d_fake - parts.d_real + parts.penalty;
    out.total += parts.loss;
    out.per_example.push_back(parts);
  }
  if (!out.per_example.empty())
    out.total /= static_cast<double>(out.per_example.size());
  return out;
}

// ---------------------------------------------------------------------------
// TrainingRun

TrainingRun::TrainingRun(const Graph& train_graph, const ModelConfig& model_cfg,
                         const GanConfig& gan_cfg, const DpConfig& dp_cfg,
                         std::uint64_t seed, int num_threads)
    : graph_(train_graph),
      model_cfg_(model_cfg),
      gan_cfg_(gan_cfg),
      dp_cfg_(dp_cfg),
      seed_(seed),
      threads_(num_threads > 0
                   ? num_threads
                   : static_cast<int>(std::max(
                         1u, std::thread::hardware_concurrency()))),
      iters_per_epoch_(std::max<std::size_t>(
          1, train_graph.num_edges() / gan_cfg.batch_size)),
      gen_(init_generator(model_cfg, mix64(seed, 0x9e6e0u))),
      disc_(init_discriminator(model_cfg, mix64(seed, 0xd15c0u))),
      disc_opt_(disc_.params.total(), gan_cfg.adam),
      gen_opt_(gen_.params.total(), gan_cfg.adam),
      ledger_(std::min(1.0, static_cast<double>(gan_cfg.batch_size) /
                                static_cast<double>(train_graph.num_edges())),
              dp_cfg.enabled ? dp_cfg.noise_scale : 0.0) {
  model_cfg_.validate();
  gan_cfg_.validate();
  dp_cfg_.validate();
  if (model_cfg_.num_nodes != train_graph.num_nodes())
    throw std::invalid_argument(
        "TrainingRun: model num_nodes != graph num_nodes");
  if (gan_cfg_.batch_size > train_graph.num_edges())
    throw std::invalid_argument(
        "TrainingRun: batch_size exceeds the training edge count");
  if (dp_cfg_.enabled && model_cfg_.sequence_length != 2)
    throw std::invalid_argument(
        "TrainingRun: private training requires edge mode "
        "(sequence_length == 2); walk mode is a non-private baseline");
  threads_ = std::min<int>(threads_, kGradShards);
}

bool TrainingRun::budget_exceeded() const {
  if (!dp_cfg_.enabled) return false;
  if (dp_cfg_.convention == BudgetConvention::kEpsilonAtDelta) {
    if (!std::isfinite(dp_cfg_.target_epsilon)) return false;
    return ledger_.epsilon_for_delta(dp_cfg_.target_delta) >
           dp_cfg_.target_epsilon;
  }
  if (!std::isfinite(dp_cfg_.target_epsilon)) return false;
  return ledger_.delta_for_epsilon(dp_cfg_.target_epsilon) >
         dp_cfg_.target_delta;
}

double TrainingRun::current_epsilon() const {
  if (!dp_cfg_.enabled) return std::numeric_limits<double>::infinity();
  return ledger_.epsilon_for_delta(dp_cfg_.target_delta);
}

std::optional<CriticStepRecord> TrainingRun::critic_step() {
  if (budget_exceeded()) return std::nullopt;
  return critic_step_unchecked();
}

CriticStepRecord TrainingRun::critic_step_unchecked() {
  const std::uint64_t step = critic_steps_;
  const std::size_t seq_len = model_cfg_.sequence_length;

  // Assemble the real side of the batch.
  std::vector<std::vector<std::uint32_t>> real_seqs;
  if (dp_cfg_.enabled && dp_cfg_.sampling == SamplingScheme::kPoisson) {
    Rng prng(mix64(seed_, step, kPoissonStream));
    const double q = std::min(
        1.0, static_cast<double>(gan_cfg_.batch_size) /
                 static_cast<double>(graph_.num_edges()));
    for (const Edge& e : graph_.edges()) {
      if (prng.uniform() >= q) continue;
      if (prng.next_u64() & 1u)
        real_seqs.push_back({e.b, e.a});
      else
        real_seqs.push_back({e.a, e.b});
    }
  } else if (seq_len == 2) {
    const auto pairs =
        sample_edge_batch(graph_, gan_cfg_.batch_size, mix64(seed_, kRealStream),
                          step);
    real_seqs.reserve(pairs.size());
    for (const auto& [a, b] : pairs) real_seqs.push_back({a, b});
  } else {
    real_seqs = sample_random_walks(graph_, seq_len, gan_cfg_.batch_size,
                                    mix64(seed_, kRealStream), step);
  }

  const std::size_t m = real_seqs.size();
  CriticStepRecord rec;
  rec.batch_examples = m;
  if (m == 0) {
    // Possible only under Poisson sampling; the step still spends budget.
    ledger_.advance(1);
    ++critic_steps_;
    rec.epsilon_after = current_epsilon();
    return rec;
  }

  std::vector<double> rhos(m);
  {
    Rng rho_rng(mix64(seed_, step, kRhoStream));
    for (std::size_t i = 0; i < m; ++i) rhos[i] = rho_rng.uniform();
  }
  std::vector<std::uint64_t> fake_seeds(m);
  for (std::size_t i = 0; i < m; ++i)
    fake_seeds[i] = mix64(mix64(seed_, step, kFakeStream) ^ i);

  // Per-example gradients, sharded with a fixed structure so the result is
  // independent of the worker count.
  const std::size_t n_param = disc_.params.total();
  std::vector<std::vector<double>> shard_sum(
      kGradShards, std::vector<double>(n_param, 0.0));
  std::vector<CriticLossParts> shard_parts(kGradShards);
  std::vector<std::exception_ptr> shard_err(kGradShards);

  const detail::GenWeights gw = gen_.weights();
  auto run_shard = [&](std::size_t s, CriticWorker& worker,
                       detail::GenTrace& gtr) {
    try {
      const std::size_t lo = s * m / kGradShards;
      const std::size_t hi = (s + 1) * m / kGradShards;
      for (std::size_t i = lo; i < hi; ++i) {
        Rng fake_rng(fake_seeds[i]);
        detail::gen_forward(gw, fake_rng, gtr);
        CriticExample ex;
        ex.real_tokens = real_seqs[i];
        ex.fake_tokens.assign(gtr.tokens.begin(), gtr.tokens.end());
        ex.rho = rhos[i];
        CriticLossParts parts;
        worker.compute(ex, &parts);
        if (dp_cfg_.enabled)
          clip_per_example_inplace(worker.grad, dp_cfg_.clip_bound);
        auto& acc = shard_sum[s];
        for (std::size_t k = 0; k < n_param; ++k) acc[k] += worker.grad[k];
        shard_parts[s].d_real += parts.d_real;
        shard_parts[s].d_fake += parts.d_fake;
        shard_parts[s].penalty += parts.penalty;
        shard_parts[s].loss += parts.loss;
      }
    } catch (...) {
      shard_err[s] = std::current_exception();
    }
  };

  if (threads_ <= 1) {
    CriticWorker worker;
    worker.bind(disc_, gan_cfg_.lambda_gp);
    detail::GenTrace gtr;
    for (std::size_t s = 0; s < kGradShards; ++s) run_shard(s, worker, gtr);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads_; ++t)
      pool.emplace_back([&, t]() {
        CriticWorker worker;
        worker.bind(disc_, gan_cfg_.lambda_gp);
        detail::GenTrace gtr;
        for (std::size_t s = t; s < kGradShards;
             s += static_cast<std::size_t>(threads_))
          run_shard(s, worker, gtr);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const auto& err : shard_err)
    if (err) std::rethrow_exception(err);

  std::vector<double> total(n_param, 0.0);
  for (const auto& shard : shard_sum)
    for (std::size_t k = 0; k < n_param; ++k) total[k] += shard[k];

  const std::size_t divisor =
      (dp_cfg_.enabled && dp_cfg_.sampling == SamplingScheme::kPoisson)
          ? gan_cfg_.batch_size
          : m;
  if (dp_cfg_.enabled) {
    Rng noise_rng(mix64(seed_, step, kNoiseStream));
    noisy_aggregate_inplace(total, divisor, dp_cfg_.noise_scale,
                            dp_cfg_.clip_bound, noise_rng);
  } else {
    const double inv = 1.0 / static_cast<double>(divisor);
    for (double& v : total) v *= inv;
  }

  double loss_sum = 0.0;
  for (const auto& p : shard_parts) {
    rec.d_real += p.d_real;
    rec.d_fake += p.d_fake;
    rec.penalty += p.penalty;
    loss_sum += p.loss;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  rec.d_real *= inv_m;
  rec.d_fake *= inv_m;
  rec.penalty *= inv_m;
  rec.loss = loss_sum * inv_m;
  if (!std::isfinite(rec.loss))
    throw std::runtime_error("critic_step: non-finite loss at step " +
                             std::to_string(step) +
                             " (d_real=" + std::to_string(rec.d_real) +
                             ", d_fake=" + std::to_string(rec.d_fake) +
                             ", penalty=" + std::to_string(rec.penalty) + ")");

  disc_opt_.step(disc_.params.values, total);
  ledger_.advance(1);
  ++critic_steps_;
  disc_.global_step = critic_steps_;
  rec.epsilon_after = current_epsilon();
  return rec;
}

double TrainingRun::generator_step() {
  const std::uint64_t step = gen_steps_;
  const std::size_t m = gan_cfg_.batch_size;
  const std::size_t n_param = gen_.params.total();
  const detail::GenWeights gw = gen_.weights();
  const detail::DiscWeights dw = disc_.weights();

  std::vector<std::uint64_t> z_seeds(m);
  for (std::size_t i = 0; i < m; ++i)
    z_seeds[i] = mix64(mix64(seed_, step, kGenZStream) ^ i);

  std::vector<std::vector<double>> shard_sum(
      kGradShards, std::vector<double>(n_param, 0.0));
  std::vector<double> shard_score(kGradShards, 0.0);
  std::vector<std::exception_ptr> shard_err(kGradShards);
  const double dscore = -1.0 / static_cast<double>(m);

  auto run_shard = [&](std::size_t s) {
    try {
      detail::GenTrace gtr;
      DiscTrace<double> dtr;
      std::vector<std::vector<double>> dx;
      std::vector<StepInput> x;
      auto gview = detail::gen_grads_view(gen_, shard_sum[s]);
      const std::size_t lo = s * m / kGradShards;
      const std::size_t hi = (s + 1) * m / kGradShards;
      for (std::size_t i = lo; i < hi; ++i) {
        Rng rng(z_seeds[i]);
        detail::gen_forward(gw, rng, gtr);
        x.assign(gtr.tokens.size(), StepInput{});
        for (std::size_t t = 0; t < gtr.tokens.size(); ++t)
          x[t].entries = {{gtr.tokens[t], 1.0}};
        const double score = detail::disc_forward<double>(dw, x, dtr);
        shard_score[s] += score;
        detail::disc_backward<double>(dw, x, dtr, dscore, nullptr, &dx);
        detail::gen_backward(gw, gtr, dx, gview);
      }
    } catch (...) {
      shard_err[s] = std::current_exception();
    }
  };

  if (threads_ <= 1) {
    for (std::size_t s = 0; s < kGradShards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads_; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t s = t; s < kGradShards;
             s += static_cast<std::size_t>(threads_))
          run_shard(s);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const auto& err : shard_err)
    if (err) std::rethrow_exception(err);

  std::vector<double> total(n_param, 0.0);
  double score_sum = 0.0;
  for (std::size_t s = 0; s < kGradShards; ++s) {
    score_sum += shard_score[s];
    for (std::size_t k = 0; k < n_param; ++k) total[k] += shard_sum[s][k];
  }
  const double loss = -score_sum / static_cast<double>(m);
  if (!std::isfinite(loss))
    throw std::runtime_error("generator_step: non-finite loss at step " +
                             std::to_string(step));
  gen_opt_.step(gen_.params.values, total);
  ++gen_steps_;
  gen_.global_step = gen_steps_;
  return loss;
}

TrainResult TrainingRun::run(const EdgeSplit& split,
                             int checkpoint_sample_volume,
                             const CheckpointCallback& on_checkpoint) {
  if (split.validation_edges.empty())
    throw std::invalid_argument("train: empty validation split");
  if (checkpoint_sample_volume < 1)
    throw std::invalid_argument("train: checkpoint_sample_volume must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  EarlyStopper stopper(gan_cfg_.patience);
  TrainResult result{gen_, disc_, {}, ledger_, StopReason::kMaxEpochs, -1, 0};
  double best_auc = -1.0;

  double closs_sum = 0.0, gloss_sum = 0.0;
  std::size_t closs_n = 0, gloss_n = 0;
  double last_epsilon = 0.0;

  auto do_checkpoint = [&](int epoch) -> CheckpointRecord {
    const auto samples = generate_samples_parallel(
        gen_, checkpoint_sample_volume,
        mix64(seed_, kCheckpointStream, result.history.records.size()),
        threads_);
    ScoreMatrix sm =
        count_sample_sequences(samples, model_cfg_.num_nodes);
    sm.symmetrize();
    const LinkPredictionScores lp = link_prediction(sm, split);

    CheckpointRecord rec;
    rec.index = static_cast<int>(result.history.records.size()) + 1;
    rec.epoch = epoch;
    rec.disc_loss = closs_n > 0 ? closs_sum / static_cast<double>(closs_n) : 0.0;
    rec.gen_loss = gloss_n > 0 ? gloss_sum / static_cast<double>(gloss_n) : 0.0;
    closs_sum = gloss_sum = 0.0;
    closs_n = gloss_n = 0;
    rec.auc = lp.auc;
    rec.ap = lp.ap;
    rec.epsilon = current_epsilon();
    if (dp_cfg_.enabled)
      rec.delta = std::isfinite(dp_cfg_.target_epsilon)
                      ? ledger_.delta_for_epsilon(dp_cfg_.target_epsilon)
                      : dp_cfg_.target_delta;
    else
      rec.delta = 0.0;
    // The epsilon sequence is non-decreasing by construction; guard anyway.
    if (rec.epsilon + 1e-12 < last_epsilon)
      throw std::logic_error("train: epsilon decreased across checkpoints");
    last_epsilon = rec.epsilon;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    result.history.records.push_back(rec);

    if (rec.auc > best_auc) {
      best_auc = rec.auc;
      result.best_generator = gen_;
      result.best_checkpoint_index = rec.index;
    }
    return rec;
  };

  bool stop = false;
  int epoch = 0;
  bool checkpointed_at_stop = false;
  while (epoch < gan_cfg_.max_epochs && !stop) {
    ++epoch;
    for (std::size_t iter = 0; iter < iters_per_epoch_ && !stop; ++iter) {
      for (int k = 0; k < gan_cfg_.n_critic; ++k) {
        auto rec = critic_step();
        if (!rec.has_value()) {
          result.stop_reason = StopReason::kPrivacyBudget;
          stop = true;
          break;
        }
        closs_sum += rec->loss;
        ++closs_n;
        if (budget_exceeded()) {
          result.stop_reason = StopReason::kPrivacyBudget;
          stop = true;
          break;
        }
      }
      if (stop) break;
      gloss_sum += generator_step();
      ++gloss_n;
    }
    if (!stop && epoch % gan_cfg_.checkpoint_epochs == 0) {
      const CheckpointRecord rec = do_checkpoint(epoch);
      bool keep_going = true;
      if (on_checkpoint)
        keep_going = on_checkpoint(rec, gen_, disc_, ledger_);
      if (!keep_going) {
        result.stop_reason = StopReason::kCallback;
        stop = true;
        checkpointed_at_stop = true;
      } else if (stopper.observe((rec.auc + rec.ap) / 2.0)) {
        result.stop_reason = StopReason::kEarlyStopping;
        stop = true;
        checkpointed_at_stop = true;
      }
    }
  }
  result.epochs_run = epoch;

  // Terminal evaluation when the loop ended away from a checkpoint boundary.
  if (!checkpointed_at_stop &&
      (result.history.records.empty() ||
       result.history.records.back().epoch != epoch)) {
    const CheckpointRecord rec = do_checkpoint(epoch);
    if (on_checkpoint) on_checkpoint(rec, gen_, disc_, ledger_);
  }

  result.final_discriminator = disc_;
  result.ledger = ledger_;
  return result;
}

TrainResult train(const EdgeSplit& split, const ModelConfig& model_cfg,
                  const GanConfig& gan_cfg, const DpConfig& dp_cfg,
                  std::uint64_t seed, int checkpoint_sample_volume,
                  const CheckpointCallback& on_checkpoint, int num_threads) {
  TrainingRun run(split.train, model_cfg, gan_cfg, dp_cfg, seed, num_threads);
  return run.run(split, checkpoint_sample_volume, on_checkpoint);
}

}  // namespace dpgraphgen
