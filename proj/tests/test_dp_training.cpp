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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpgraphgen/dp_sgd.hpp"
#include "dpgraphgen/trainer.hpp"
#include "oracles.hpp"

using namespace dpgraphgen;

namespace {

ModelConfig tiny_model(std::uint32_t n) {
  ModelConfig cfg;
  cfg.num_nodes = n;
  cfg.noise_dim = 4;
  cfg.hidden_dim = 5;
  cfg.down_projection_dim = 3;
  cfg.sequence_length = 2;
  return cfg;
}

Graph ring_graph(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(edges));
}

// Ring plus distance-2 chords: enough non-tree edges for a 15% split.
Graph chorded_ring(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    edges.emplace_back(i, (i + 1) % n);
    edges.emplace_back(i, (i + 2) % n);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(n, std::move(edges));
}

std::vector<std::vector<double>> one_hot_seq(std::initializer_list<int> toks,
                                             std::size_t n) {
  std::vector<std::vector<double>> seq;
  for (int t : toks) {
    std::vector<double> v(n, 0.0);
    v[static_cast<std::size_t>(t)] = 1.0;
    seq.push_back(std::move(v));
  }
  return seq;
}

}  // namespace

TEST_CASE("clip_per_example matches the stated examples") {
  CHECK(clip_per_example({3.0, 4.0}, 1.0) ==
        std::vector<double>{0.6, 0.8});
  CHECK(clip_per_example({0.3, 0.4}, 1.0) ==
        std::vector<double>{0.3, 0.4});
  const auto half = clip_per_example({3.0, 4.0}, 0.5);
  CHECK(half[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(half[1] == doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS_AS(
      clip_per_example({std::numeric_limits<double>::quiet_NaN()}, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(clip_per_example({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("clipping preserves direction and bounds the norm") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> g(17);
    for (double& v : g) v = rng.gaussian() * 3.0;
    const double c = 0.1 + rng.uniform();
    const auto clipped = clip_per_example(g, c);
    CHECK(l2_norm(clipped) <= c + 1e-12);
    // Direction preserved: clipped is a nonnegative multiple of g.
    const double norm_g = l2_norm(g);
    double dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * clipped[i];
    CHECK(dot / (norm_g * l2_norm(clipped)) == doctest::Approx(1.0));
  }
}

TEST_CASE("noisy_aggregate: exact mean with sigma=0, errors") {
  Rng rng(1);
  const auto out = noisy_aggregate({{1.0, 0.0}, {0.0, 1.0}}, 0.0, 1.0, rng);
  CHECK(out == std::vector<double>{0.5, 0.5});

  CHECK_THROWS_AS(noisy_aggregate({}, 1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(noisy_aggregate({{5.0, 5.0}}, 1.0, 1.0, rng),
                  std::invalid_argument);  // norm above the bound
}

TEST_CASE("noisy_aggregate: empirical variance matches (sigma C / m)^2") {
  Rng rng(77);
  const std::size_t trials = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto out = noisy_aggregate({{0.0, 0.0}}, 1.0, 1.0, rng);
    sum += out[0] + out[1];
    sum_sq += out[0] * out[0] + out[1] * out[1];
  }
  const double var = sum_sq / (2.0 * trials) -
                     (sum / (2.0 * trials)) * (sum / (2.0 * trials));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("critic_loss with lambda=0 is mean(D(fake)) - mean(D(real))") {
  const auto disc = init_discriminator(tiny_model(6), 3);
  const std::vector<std::vector<std::vector<double>>> real = {
      one_hot_seq({0, 1}, 6), one_hot_seq({2, 3}, 6)};
  const std::vector<std::vector<std::vector<double>>> fake = {
      one_hot_seq({4, 5}, 6), one_hot_seq({1, 0}, 6)};
  const CriticBatchLoss loss = critic_loss(disc, real, fake, 0.0, 11);
  const auto sr = discriminator_scores(disc, real);
  const auto sf = discriminator_scores(disc, fake);
  const double expected =
      (sf[0] + sf[1]) / 2.0 - (sr[0] + sr[1]) / 2.0;
  CHECK(loss.total == doctest::Approx(expected).epsilon(1e-12));
  for (const auto& p : loss.per_example) CHECK(p.penalty == 0.0);
}

TEST_CASE("penalty parameter gradients match finite differences") {
  const ModelConfig cfg = tiny_model(6);
  auto disc = init_discriminator(cfg, 13);
  // Scale the fresh init up so gradients clear the central-difference
  // roundoff floor (~1e-11 at h=1e-5).
  for (double& v : disc.params.values) v *= 8.0;
  const double lambda = 10.0;

  CriticExample ex;
  ex.real_tokens = {0, 3};
  ex.fake_tokens = {4, 1};
  ex.rho = 0.37;

  // Analytic gradient of the full per-example loss.
  const auto grad = critic_example_gradient(disc, ex, lambda);
  double gmax = 0.0;
  for (double v : grad) gmax = std::max(gmax, std::abs(v));
  REQUIRE(gmax > 1e-6);

  // Loss as a function of the parameters, for central differences.
  auto loss_at = [&](DiscriminatorState& d) {
    CriticLossParts parts;
    critic_example_gradient(d, ex, lambda, &parts);
    return parts.loss;
  };

  const double h = 1e-5;
  Rng pick(99);
  int checked = 0;
  while (checked < 25) {
    const std::size_t i = pick.uniform_int(disc.params.total());
    // Coordinates far below the gradient scale only measure FD noise.
    if (std::abs(grad[i]) < 1e-5 * gmax) continue;
    const double saved = disc.params.values[i];
    disc.params.values[i] = saved + h;
    const double up = loss_at(disc);
    disc.params.values[i] = saved - h;
    const double down = loss_at(disc);
    disc.params.values[i] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double denom = std::max(std::abs(fd), std::abs(grad[i]));
    INFO("coord ", i, " fd=", fd, " analytic=", grad[i]);
    CHECK(std::abs(fd - grad[i]) / denom < 1e-3);
    ++checked;
  }
}

TEST_CASE("interpolate gradient with norm 1 gives zero penalty") {
  // D is linear in the output head, so scaling (output.weight, output.bias)
  // by 1/||grad_x D(xhat)|| makes that norm exactly 1; the penalty vanishes.
  const ModelConfig cfg = tiny_model(5);
  auto disc = init_discriminator(cfg, 29);
  CriticExample ex;
  ex.real_tokens = {0, 2};
  ex.fake_tokens = {3, 4};
  ex.rho = 0.5;

  CriticLossParts parts;
  critic_example_gradient(disc, ex, 1.0, &parts);
  const double norm0 = 1.0 + std::copysign(std::sqrt(parts.penalty), -1.0);
  // penalty = (norm-1)^2 with norm < 1 at a fresh small init.
  REQUIRE(norm0 > 0.0);
  REQUIRE(norm0 < 1.0);
  const double scale = 1.0 / norm0;
  for (std::size_t k = 0; k < disc.params.group("output.weight").size; ++k)
    disc.params.group_data("output.weight")[k] *= scale;
  *disc.params.group_data("output.bias") *= scale;

  CriticLossParts rescaled;
  critic_example_gradient(disc, ex, 10.0, &rescaled);
  CHECK(rescaled.penalty < 1e-20);
}

TEST_CASE("bounded influence: swapping one example moves the sum by <= 2C") {
  const ModelConfig cfg = tiny_model(8);
  const auto disc = init_discriminator(cfg, 31);
  const double c = 0.7;
  Rng rng(8);

  auto random_example = [&]() {
    CriticExample ex;
    ex.real_tokens = {static_cast<std::uint32_t>(rng.uniform_int(8)),
                      static_cast<std::uint32_t>(rng.uniform_int(8))};
    ex.fake_tokens = {static_cast<std::uint32_t>(rng.uniform_int(8)),
                      static_cast<std::uint32_t>(rng.uniform_int(8))};
    ex.rho = rng.uniform();
    return ex;
  };

  const std::size_t m = 12;
  std::vector<std::vector<double>> clipped;
  for (std::size_t i = 0; i < m; ++i)
    clipped.push_back(
        clip_per_example(critic_example_gradient(disc, random_example(), 10.0), c));

  std::vector<double> base_sum(clipped[0].size(), 0.0);
  for (const auto& g : clipped)
    for (std::size_t k = 0; k < g.size(); ++k) base_sum[k] += g[k];

  for (int swap = 0; swap < 5; ++swap) {
    const std::size_t victim = rng.uniform_int(m);
    const auto replacement = clip_per_example(
        critic_example_gradient(disc, random_example(), 10.0), c);
    std::vector<double> moved = base_sum;
    for (std::size_t k = 0; k < moved.size(); ++k)
      moved[k] += replacement[k] - clipped[victim][k];
    std::vector<double> diff(moved.size());
    for (std::size_t k = 0; k < moved.size(); ++k)
      diff[k] = moved[k] - base_sum[k];
    CHECK(l2_norm(diff) <= 2.0 * c + 1e-9);
  }
}

TEST_CASE("critic step with the mechanism disabled equals vanilla") {
  const Graph g = ring_graph(12);
  const ModelConfig model = tiny_model(12);
  GanConfig gan;
  gan.batch_size = 6;
  gan.n_critic = 1;
  gan.lambda_gp = 10.0;

  DpConfig dp_off;
  dp_off.enabled = false;

  DpConfig dp_degenerate;
  dp_degenerate.enabled = true;
  dp_degenerate.clip_bound = 1e9;
  dp_degenerate.noise_scale = 0.0;

  TrainingRun vanilla(g, model, gan, dp_off, 555, 1);
  TrainingRun private_run(g, model, gan, dp_degenerate, 555, 1);

  for (int step = 0; step < 20; ++step) {
    vanilla.critic_step();
    private_run.critic_step();
    const auto& a = vanilla.discriminator().params.values;
    const auto& b = private_run.discriminator().params.values;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double denom = std::max(std::abs(a[i]), 1e-12);
      max_rel = std::max(max_rel, std::abs(a[i] - b[i]) / denom);
    }
    CHECK(max_rel < 1e-5);
    vanilla.generator_step();
    private_run.generator_step();
  }
  CHECK(private_run.ledger().steps() == 20);
}

TEST_CASE("accountant advances once per critic step; runs are deterministic") {
  const Graph g = ring_graph(10);
  const ModelConfig model = tiny_model(10);
  GanConfig gan;
  gan.batch_size = 4;
  DpConfig dp;
  dp.noise_scale = 1.0;
  dp.clip_bound = 0.5;

  TrainingRun run_a(g, model, gan, dp, 42, 1);
  TrainingRun run_b(g, model, gan, dp, 42, 2);  // different thread count
  for (int k = 0; k < 10; ++k) {
    const auto ra = run_a.critic_step();
    const auto rb = run_b.critic_step();
    REQUIRE(ra.has_value());
    REQUIRE(rb.has_value());
    CHECK(ra->loss == rb->loss);
  }
  CHECK(run_a.ledger().steps() == 10);
  CHECK(run_a.discriminator().params.values ==
        run_b.discriminator().params.values);
  run_a.generator_step();
  run_b.generator_step();
  CHECK(run_a.generator().params.values == run_b.generator().params.values);

  // Epsilon is monotone in steps.
  double prev = 0.0;
  TrainingRun run_c(g, model, gan, dp, 7, 1);
  for (int k = 0; k < 5; ++k) {
    run_c.critic_step();
    const double eps = run_c.current_epsilon();
    CHECK(eps >= prev);
    prev = eps;
  }
}

TEST_CASE("generator gradient vanishes against a constant discriminator") {
  const ModelConfig model = tiny_model(6);
  const Graph g = ring_graph(6);
  GanConfig gan;
  gan.batch_size = 3;
  DpConfig dp;
  dp.enabled = false;

  TrainingRun run(g, model, gan, dp, 9, 1);
  // Zero every discriminator weight: D is the constant b_out.
  auto& disc = run.mutable_discriminator();
  std::fill(disc.params.values.begin(), disc.params.values.end(), 0.0);
  *disc.params.group_data("output.bias") = 3.14;

  const auto gen_before = run.generator().params.values;
  run.generator_step();
  const auto& gen_after = run.generator().params.values;
  // Adam normalizes by sqrt(v); with zero gradients parameters must not move.
  double max_abs = 0.0;
  for (std::size_t i = 0; i < gen_before.size(); ++i)
    max_abs = std::max(max_abs, std::abs(gen_after[i] - gen_before[i]));
  CHECK(max_abs < 1e-9);
}

TEST_CASE("generator improves against a frozen pretrained discriminator") {
  // 2-node toy graph: one edge, tokens {0,1}.
  const Graph g(2, {Edge(0, 1)});
  ModelConfig model = tiny_model(2);
  GanConfig gan;
  gan.batch_size = 1;
  gan.n_critic = 2;
  DpConfig dp;
  dp.enabled = false;

  TrainingRun run(g, model, gan, dp, 31, 1);
  // Pretrain the critic a little so it prefers real edges.
  for (int k = 0; k < 30; ++k) run.critic_step();

  double first = 0.0, last = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double loss = run.generator_step();
    if (k == 0) first = loss;
    last = loss;
  }
  CHECK(last <= first + 1e-6);
}

TEST_CASE("privacy budget stop: refusal and reason") {
  const Graph g = chorded_ring(16);
  const ModelConfig model = tiny_model(16);
  GanConfig gan;
  gan.batch_size = 8;
  gan.n_critic = 1;
  gan.max_epochs = 50;
  gan.checkpoint_epochs = 1;
  DpConfig dp;
  dp.noise_scale = 0.5;
  dp.clip_bound = 1.0;
  dp.target_delta = 1e-5;
  dp.target_epsilon = 2.0;

  TrainingRun probe(g, model, gan, dp, 3, 1);
  // Epsilon for a single step at this rate exceeds the budget after a few
  // steps; keep stepping until refusal.
  int taken = 0;
  while (probe.critic_step().has_value()) {
    ++taken;
    REQUIRE(taken < 1000);
  }
  CHECK(probe.budget_exceeded());
  CHECK(taken >= 1);

  // The same configuration through the full loop stops with the reason.
  const EdgeSplit split = split_edges(g, 0.15, 5);
  TrainingRun full(split.train, tiny_model(16), gan, dp, 3, 1);
  const TrainResult res = full.run(split, 100);
  CHECK(res.stop_reason == StopReason::kPrivacyBudget);
  CHECK(std::string(to_string(res.stop_reason)) == "privacy budget");
  CHECK(res.history.records.back().epsilon > 2.0);
}

TEST_CASE("delta-at-epsilon budget convention also stops") {
  const Graph g = chorded_ring(16);
  GanConfig gan;
  gan.batch_size = 8;
  gan.n_critic = 1;
  DpConfig dp;
  dp.noise_scale = 0.5;
  dp.clip_bound = 1.0;
  dp.target_delta = 1e-5;
  dp.target_epsilon = 2.0;
  dp.convention = BudgetConvention::kDeltaAtEpsilon;

  TrainingRun probe(g, tiny_model(16), gan, dp, 3, 1);
  int taken = 0;
  while (probe.critic_step().has_value()) {
    ++taken;
    REQUIRE(taken < 1000);
  }
  CHECK(probe.ledger().delta_for_epsilon(2.0) > 1e-5);
}

TEST_CASE("early stopper follows the stated patience rule") {
  // AUC history (.60 .61 .60 .59 .58 .57 .56), patience 5: stop at the 7th
  // checkpoint with the 2nd as the best.
  EarlyStopper stopper(5);
  const double metrics[] = {0.60, 0.61, 0.60, 0.59, 0.58, 0.57, 0.56};
  int stopped_at = -1;
  for (int i = 0; i < 7; ++i)
    if (stopper.observe(metrics[i])) {
      stopped_at = i + 1;
      break;
    }
  CHECK(stopped_at == 7);
  CHECK(stopper.best_index() == 1);  // 0-based -> checkpoint 2
}

TEST_CASE("disabled DP records infinite epsilon in history") {
  const Graph g = chorded_ring(14);
  GanConfig gan;
  gan.batch_size = 6;
  gan.n_critic = 1;
  gan.max_epochs = 2;
  gan.checkpoint_epochs = 1;
  DpConfig dp;
  dp.enabled = false;

  const EdgeSplit split = split_edges(g, 0.15, 2);
  TrainingRun run(split.train, tiny_model(14), gan, dp, 12, 1);
  const TrainResult res = run.run(split, 64);
  REQUIRE(!res.history.records.empty());
  for (const auto& rec : res.history.records)
    CHECK(std::isinf(rec.epsilon));
  CHECK(res.stop_reason == StopReason::kMaxEpochs);
  CHECK(res.best_checkpoint_index >= 1);
}

TEST_CASE("walk mode with DP enabled is rejected") {
  const Graph g = ring_graph(10);
  ModelConfig model = tiny_model(10);
  model.sequence_length = 4;
  GanConfig gan;
  gan.batch_size = 4;
  DpConfig dp;  // enabled by default
  CHECK_THROWS_AS(TrainingRun(g, model, gan, dp, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("poisson sampling trains and spends budget per step") {
  const Graph g = ring_graph(20);
  GanConfig gan;
  gan.batch_size = 5;
  gan.n_critic = 1;
  DpConfig dp;
  dp.noise_scale = 1.0;
  dp.clip_bound = 0.5;
  dp.sampling = SamplingScheme::kPoisson;

  TrainingRun run(g, tiny_model(20), gan, dp, 77, 1);
  for (int k = 0; k < 8; ++k) {
    const auto rec = run.critic_step();
    REQUIRE(rec.has_value());
  }
  CHECK(run.ledger().steps() == 8);
}
