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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <vector>

#include "dpgraphgen/model.hpp"
#include "oracles.hpp"

using namespace dpgraphgen;

namespace {

ModelConfig small_config(std::uint32_t n = 6) {
  ModelConfig cfg;
  cfg.num_nodes = n;
  cfg.noise_dim = 4;
  cfg.hidden_dim = 5;
  cfg.down_projection_dim = 3;
  cfg.sequence_length = 2;
  return cfg;
}

std::vector<std::vector<double>> one_hot_seq(const std::vector<int>& tokens,
                                             std::size_t n) {
  std::vector<std::vector<double>> seq;
  for (int t : tokens) {
    std::vector<double> v(n, 0.0);
    v[static_cast<std::size_t>(t)] = 1.0;
    seq.push_back(std::move(v));
  }
  return seq;
}

}  // namespace

TEST_CASE("parameter count equals the sum over declared shapes") {
  const auto gen = init_generator(small_config(), 1);
  std::size_t total = 0;
  for (const auto& g : gen.params.groups) {
    std::size_t prod = 1;
    for (std::size_t d : g.shape) prod *= d;
    CHECK(prod == g.size);
    total += prod;
  }
  CHECK(total == gen.params.total());

  const auto disc = init_discriminator(small_config(), 1);
  total = 0;
  for (const auto& g : disc.params.groups) total += g.size;
  CHECK(total == disc.params.total());
}

TEST_CASE("generate_samples: count, range, determinism") {
  const auto gen = init_generator(small_config(), 3);
  CHECK(generate_samples(gen, 0, 1).empty());

  const auto samples = generate_samples(gen, 500, 17);
  CHECK(samples.size() == 500);
  for (const auto& seq : samples) {
    REQUIRE(seq.size() == 2);
    for (auto id : seq) CHECK(id < gen.config.num_nodes);
  }
  CHECK(generate_samples(gen, 500, 17) == samples);
  CHECK(generate_samples(gen, 500, 18) != samples);
  // Thread count does not change results.
  CHECK(generate_samples_parallel(gen, 500, 17, 3) == samples);
}

TEST_CASE("generated id range holds at volume on a random init") {
  ModelConfig cfg = small_config(23);
  const auto gen = init_generator(cfg, 5);
  const auto samples = generate_samples_parallel(gen, 100000, 99, 2);
  CHECK(samples.size() == 100000);
  for (const auto& seq : samples)
    for (auto id : seq) CHECK(id < 23u);
}

TEST_CASE("non-finite parameters are reported by group name") {
  auto gen = init_generator(small_config(), 3);
  gen.params.group_data("lstm.weight")[0] =
      std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(generate_samples(gen, 1, 1),
                       doctest::Contains("lstm.weight"), std::runtime_error);
}

TEST_CASE("discriminator scores: shape checks, independence, determinism") {
  const auto disc = init_discriminator(small_config(), 7);
  const auto seq_a = one_hot_seq({1, 4}, 6);
  const auto seq_b = one_hot_seq({2, 0}, 6);

  const auto twice = discriminator_scores(disc, {seq_a, seq_a});
  REQUIRE(twice.size() == 2);
  CHECK(twice[0] == twice[1]);  // per-example independence

  const auto ab = discriminator_scores(disc, {seq_a, seq_b});
  const auto ba = discriminator_scores(disc, {seq_b, seq_a});
  CHECK(ab[0] == ba[1]);
  CHECK(ab[1] == ba[0]);

  CHECK(std::isfinite(ab[0]));
  CHECK(discriminator_scores(disc, {seq_a})[0] == ab[0]);

  auto bad = seq_a;
  bad[1].push_back(0.0);
  CHECK_THROWS_AS(discriminator_scores(disc, {bad}), std::invalid_argument);
}

TEST_CASE("relaxed_sample_step: normalization and hard-index law") {
  // Extreme logits: hard index 0 nearly always.
  std::size_t zero_hits = 0;
  const std::vector<double> extreme = {10.0, -10.0};
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const RelaxedSample r = relaxed_sample_step(extreme, 1.0, s);
    if (r.hard == 0) ++zero_hits;
    double sum = std::accumulate(r.relaxed.begin(), r.relaxed.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
  CHECK(static_cast<double>(zero_hits) / 10000.0 > 0.999);

  // Uniform logits: empirical distribution uniform within 3 sigma.
  const std::vector<double> uniform(5, 0.7);
  std::vector<std::size_t> hits(5, 0);
  const std::size_t trials = 20000;
  for (std::uint64_t s = 0; s < trials; ++s)
    ++hits[static_cast<std::size_t>(
        relaxed_sample_step(uniform, 0.5, s + 77).hard)];
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(oracles::within_3sigma_binomial(
        static_cast<double>(hits[i]) / trials, 0.2, trials));

  // Determinism and temperature validation.
  const auto a = relaxed_sample_step({0.3, 0.1, -0.5}, 2.0, 5);
  const auto b = relaxed_sample_step({0.3, 0.1, -0.5}, 2.0, 5);
  CHECK(a.hard == b.hard);
  CHECK(a.relaxed == b.relaxed);
  CHECK_THROWS_AS(relaxed_sample_step({0.0}, 0.0, 1), std::invalid_argument);
}

TEST_CASE("discriminator input gradients match finite differences") {
  const ModelConfig cfg = small_config();
  const auto disc = init_discriminator(cfg, 11);
  const detail::DiscWeights w = disc.weights();
  const int N = w.num_nodes;

  // A dense, non-degenerate input point.
  Rng rng(123);
  std::vector<std::vector<double>> dense(2, std::vector<double>(N));
  for (auto& step : dense)
    for (double& v : step) v = rng.uniform();

  auto score_at = [&](const std::vector<std::vector<double>>& input) {
    std::vector<detail::StepInput> x(input.size());
    for (std::size_t t = 0; t < input.size(); ++t)
      for (int i = 0; i < N; ++i)
        x[t].entries.emplace_back(i, input[t][i]);
    detail::DiscTrace<double> tr;
    return detail::disc_forward<double>(w, x, tr);
  };

  // Analytic input gradients.
  std::vector<detail::StepInput> x(dense.size());
  for (std::size_t t = 0; t < dense.size(); ++t)
    for (int i = 0; i < N; ++i) x[t].entries.emplace_back(i, dense[t][i]);
  detail::DiscTrace<double> tr;
  detail::disc_forward<double>(w, x, tr);
  std::vector<std::vector<double>> dx;
  detail::disc_backward<double>(w, x, tr, 1.0, nullptr, &dx);

  const double h = 1e-4;
  for (std::size_t t = 0; t < dense.size(); ++t) {
    for (int i = 0; i < N; i += 2) {
      auto hi = dense, lo = dense;
      hi[t][i] += h;
      lo[t][i] -= h;
      const double fd = (score_at(hi) - score_at(lo)) / (2.0 * h);
      const double an = dx[t][i];
      const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
      INFO("t=", t, " i=", i, " fd=", fd, " analytic=", an);
      CHECK(std::abs(fd - an) / denom < 1e-4);
    }
  }
}

TEST_CASE("checkpoints round-trip and validate") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "dpgg_model_test";
  fs::create_directories(dir);
  const std::string path = (dir / "gen.ckpt").string();

  auto gen = init_generator(small_config(), 21);
  gen.global_step = 42;
  save_checkpoint(path, to_checkpoint(gen, "rngstate"));
  const Checkpoint loaded = load_checkpoint(path);
  CHECK(loaded.kind == "generator");
  CHECK(loaded.global_step == 42);
  CHECK(loaded.rng_state == "rngstate");
  const GeneratorState back = generator_from_checkpoint(loaded);
  CHECK(back.params.values == gen.params.values);
  CHECK(back.config.num_nodes == gen.config.num_nodes);
  CHECK(generate_samples(back, 50, 9) == generate_samples(gen, 50, 9));

  // Corruption is detected.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-9, std::ios::end);
    const char junk = 0x5a;
    f.write(&junk, 1);
  }
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);

  const auto disc = init_discriminator(small_config(), 4);
  const std::string dpath = (dir / "disc.ckpt").string();
  save_checkpoint(dpath, to_checkpoint(disc, ""));
  CHECK_THROWS_AS(generator_from_checkpoint(load_checkpoint(dpath)),
                  std::runtime_error);
  fs::remove_all(dir);
}
