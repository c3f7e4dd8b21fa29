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

#include "dpgraphgen/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace dpgraphgen {

void ModelConfig::validate() const {
  if (num_nodes < 2)
    throw std::invalid_argument("ModelConfig: num_nodes must be >= 2");
  if (noise_dim < 1 || hidden_dim < 1 || down_projection_dim < 1)
    throw std::invalid_argument("ModelConfig: all dims must be >= 1");
  if (sequence_length < 2)
    throw std::invalid_argument("ModelConfig: sequence_length must be >= 2");
  if (!(temperature > 0.0))
    throw std::invalid_argument("ModelConfig: temperature must be > 0");
}

const ParamGroup& NetParams::group(const std::string& name) const {
  for (const ParamGroup& g : groups)
    if (g.name == name) return g;
  throw std::invalid_argument("unknown parameter group: " + name);
}

double* NetParams::group_data(const std::string& name) {
  return values.data() + group(name).offset;
}

const double* NetParams::group_data(const std::string& name) const {
  return values.data() + group(name).offset;
}

std::string NetParams::first_non_finite_group() const {
  for (const ParamGroup& g : groups) {
    const double* p = values.data() + g.offset;
    for (std::size_t i = 0; i < g.size; ++i)
      if (!std::isfinite(p[i])) return g.name;
  }
  return {};
}

namespace {

NetParams build_params(const std::vector<std::pair<std::string,
                                                   std::vector<std::size_t>>>& spec) {
  NetParams params;
  std::size_t offset = 0;
  for (const auto& [name, shape] : spec) {
    std::size_t size = 1;
    for (std::size_t d : shape) size *= d;
    params.groups.push_back(ParamGroup{name, shape, offset, size});
    offset += size;
  }
  params.values.assign(offset, 0.0);
  return params;
}

// Uniform [-0.05, 0.05] for weight matrices, zeros for bias groups.
void init_values(NetParams& params, std::uint64_t seed) {
  Rng rng(mix64(seed, 0x1217u));
  for (const ParamGroup& g : params.groups) {
    if (g.name.ends_with(".bias")) continue;
    double* p = params.values.data() + g.offset;
    for (std::size_t i = 0; i < g.size; ++i)
      p[i] = (rng.uniform() - 0.5) * 0.1;
  }
}

}  // namespace

GeneratorState init_generator(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t N = cfg.num_nodes;
  const std::size_t Z = cfg.noise_dim;
  const std::size_t P = cfg.down_projection_dim;
  const std::size_t H = cfg.hidden_dim;
  GeneratorState gen;
  gen.config = cfg;
  gen.params = build_params({
      {"init_projection.weight", {2 * H, Z}},
      {"init_projection.bias", {2 * H}},
      {"start_embedding", {P}},
      {"token_embedding", {N, P}},
      {"lstm.weight", {4 * H, P + H}},
      {"lstm.bias", {4 * H}},
      {"output.weight", {N, H}},
      {"output.bias", {N}},
  });
  init_values(gen.params, mix64(seed, 0x6e6u));
  return gen;
}

DiscriminatorState init_discriminator(const ModelConfig& cfg,
                                      std::uint64_t seed) {
  cfg.validate();
  const std::size_t N = cfg.num_nodes;
  const std::size_t P = cfg.down_projection_dim;
  const std::size_t H = cfg.hidden_dim;
  DiscriminatorState disc;
  disc.config = cfg;
  disc.params = build_params({
      {"input_projection.weight", {P, N}},
      {"input_projection.bias", {P}},
      {"lstm.weight", {4 * H, P + H}},
      {"lstm.bias", {4 * H}},
      {"output.weight", {H}},
      {"output.bias", {1}},
  });
  init_values(disc.params, mix64(seed, 0xd15cu));
  return disc;
}

detail::GenWeights GeneratorState::weights() const {
  detail::GenWeights w;
  w.w_init = params.group_data("init_projection.weight");
  w.b_init = params.group_data("init_projection.bias");
  w.start = params.group_data("start_embedding");
  w.emb = params.group_data("token_embedding");
  w.w_lstm = params.group_data("lstm.weight");
  w.b_lstm = params.group_data("lstm.bias");
  w.w_out = params.group_data("output.weight");
  w.b_out = params.group_data("output.bias");
  w.num_nodes = static_cast<int>(config.num_nodes);
  w.noise_dim = config.noise_dim;
  w.proj_dim = config.down_projection_dim;
  w.hidden_dim = config.hidden_dim;
  w.steps = config.sequence_length;
  w.temperature = config.temperature;
  return w;
}

detail::DiscWeights DiscriminatorState::weights() const {
  detail::DiscWeights w;
  w.w_in = params.group_data("input_projection.weight");
  w.b_in = params.group_data("input_projection.bias");
  w.w_lstm = params.group_data("lstm.weight");
  w.b_lstm = params.group_data("lstm.bias");
  w.w_out = params.group_data("output.weight");
  w.b_out = params.group_data("output.bias");
  w.num_nodes = static_cast<int>(config.num_nodes);
  w.proj_dim = config.down_projection_dim;
  w.hidden_dim = config.hidden_dim;
  return w;
}

namespace {

template <class S>
detail::DiscView<S*> disc_grads_view_impl(const NetParams& params,
                                          const ModelConfig& cfg,
                                          std::vector<S>& flat) {
  if (flat.size() != params.total()) flat.assign(params.total(), S(0.0));
  detail::DiscView<S*> g;
  g.w_in = flat.data() + params.group("input_projection.weight").offset;
  g.b_in = flat.data() + params.group("input_projection.bias").offset;
  g.w_lstm = flat.data() + params.group("lstm.weight").offset;
  g.b_lstm = flat.data() + params.group("lstm.bias").offset;
  g.w_out = flat.data() + params.group("output.weight").offset;
  g.b_out = flat.data() + params.group("output.bias").offset;
  g.num_nodes = static_cast<int>(cfg.num_nodes);
  g.proj_dim = cfg.down_projection_dim;
  g.hidden_dim = cfg.hidden_dim;
  return g;
}

}  // namespace

detail::DiscGrads<double> DiscriminatorState::grads_view(
    std::vector<double>& flat) const {
  return disc_grads_view_impl(params, config, flat);
}

detail::DiscGrads<detail::Dual> DiscriminatorState::grads_view(
    std::vector<detail::Dual>& flat) const {
  return disc_grads_view_impl(params, config, flat);
}

detail::GenGrads detail::gen_grads_view(const GeneratorState& gen,
                                        std::vector<double>& flat) {
  const NetParams& p = gen.params;
  if (flat.size() != p.total()) flat.assign(p.total(), 0.0);
  GenGrads g;
  g.w_init = flat.data() + p.group("init_projection.weight").offset;
  g.b_init = flat.data() + p.group("init_projection.bias").offset;
  g.start = flat.data() + p.group("start_embedding").offset;
  g.emb = flat.data() + p.group("token_embedding").offset;
  g.w_lstm = flat.data() + p.group("lstm.weight").offset;
  g.b_lstm = flat.data() + p.group("lstm.bias").offset;
  g.w_out = flat.data() + p.group("output.weight").offset;
  g.b_out = flat.data() + p.group("output.bias").offset;
  return g;
}

RelaxedSample relaxed_sample_step(const std::vector<double>& logits,
                                  double temperature, Rng& rng) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("relaxed_sample_step: temperature must be > 0");
  const std::size_t n = logits.size();
  RelaxedSample out;
  out.relaxed.resize(n);
  std::vector<double>& perturbed = out.relaxed;  // reused in place
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    perturbed[i] = logits[i] + rng.gumbel();
    if (perturbed[i] > best) {
      best = perturbed[i];
      out.hard = static_cast<int>(i);
    }
  }
  // softmax((logits + gumbel) / temperature), max-shifted
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    perturbed[i] = std::exp((perturbed[i] - best) / temperature);
    sum += perturbed[i];
  }
  for (std::size_t i = 0; i < n; ++i) perturbed[i] /= sum;
  return out;
}

RelaxedSample relaxed_sample_step(const std::vector<double>& logits,
                                  double temperature, std::uint64_t seed) {
  Rng rng(mix64(seed, 0x9e1au));
  return relaxed_sample_step(logits, temperature, rng);
}

namespace detail {

void gen_forward(const GenWeights& w, Rng& rng, GenTrace& tr) {
  const int N = w.num_nodes, Z = w.noise_dim, P = w.proj_dim, H = w.hidden_dim;
  const int T = w.steps;
  tr.z.resize(Z);
  for (int i = 0; i < Z; ++i) tr.z[i] = rng.gaussian();

  tr.h0.assign(H, 0.0);
  tr.c0.assign(H, 0.0);
  for (int k = 0; k < 2 * H; ++k) {
    double a = w.b_init[k];
    const double* row = w.w_init + static_cast<std::size_t>(k) * Z;
    for (int j = 0; j < Z; ++j) a += row[j] * tr.z[j];
    if (k < H)
      tr.h0[k] = a;
    else
      tr.c0[k - H] = a;
  }

  tr.tokens.assign(T, 0);
  tr.relaxed.assign(static_cast<std::size_t>(T) * N, 0.0);
  tr.u.assign(static_cast<std::size_t>(T) * P, 0.0);
  const std::size_t th_total = static_cast<std::size_t>(T) * H;
  tr.gi.assign(th_total, 0.0);
  tr.gf.assign(th_total, 0.0);
  tr.gg.assign(th_total, 0.0);
  tr.go.assign(th_total, 0.0);
  tr.c.assign(th_total, 0.0);
  tr.tc.assign(th_total, 0.0);
  tr.h.assign(th_total, 0.0);

  std::vector<double> logits(N);
  for (int t = 0; t < T; ++t) {
    double* u = tr.u.data() + static_cast<std::size_t>(t) * P;
    if (t == 0) {
      std::memcpy(u, w.start, sizeof(double) * P);
    } else {
      const double* row =
          w.emb + static_cast<std::size_t>(tr.tokens[t - 1]) * P;
      std::memcpy(u, row, sizeof(double) * P);
    }
    const double* h_prev =
        (t == 0) ? tr.h0.data() : tr.h.data() + static_cast<std::size_t>(t - 1) * H;
    const double* c_prev =
        (t == 0) ? tr.c0.data() : tr.c.data() + static_cast<std::size_t>(t - 1) * H;
    const std::size_t th = static_cast<std::size_t>(t) * H;
    lstm_cell_forward<double>(w.w_lstm, w.b_lstm, H, P, u, h_prev, c_prev,
                              tr.gi.data() + th, tr.gf.data() + th,
                              tr.gg.data() + th, tr.go.data() + th,
                              tr.c.data() + th, tr.tc.data() + th,
                              tr.h.data() + th);
    const double* h = tr.h.data() + th;
    for (int n = 0; n < N; ++n) {
      double a = w.b_out[n];
      const double* row = w.w_out + static_cast<std::size_t>(n) * H;
      for (int j = 0; j < H; ++j) a += row[j] * h[j];
      logits[n] = a;
    }
    for (int n = 0; n < N; ++n)
      if (!std::isfinite(logits[n]))
        throw std::runtime_error(
            "generator produced non-finite logits at parameter group "
            "'output.weight'");
    RelaxedSample s = relaxed_sample_step(logits, w.temperature, rng);
    tr.tokens[t] = s.hard;
    std::copy(s.relaxed.begin(), s.relaxed.end(),
              tr.relaxed.begin() + static_cast<std::size_t>(t) * N);
  }
}

void gen_backward(const GenWeights& w, const GenTrace& tr,
                  const std::vector<std::vector<double>>& dy, GenGrads& grads) {
  const int N = w.num_nodes, Z = w.noise_dim, P = w.proj_dim, H = w.hidden_dim;
  const int T = w.steps;
  const double inv_tau = 1.0 / w.temperature;

  std::vector<double> dh(H, 0.0), dc(H, 0.0);
  std::vector<double> dh_prev(H), dc_prev(H), du(P), dlogits(N);

  for (int t = T - 1; t >= 0; --t) {
    // Straight-through: the incoming gradient is taken w.r.t. the relaxed
    // vector r = softmax((logits+gumbel)/tau), so
    // dlogits = (1/tau) * (r . (dr - <r,dr> 1)).
    const double* r = tr.relaxed.data() + static_cast<std::size_t>(t) * N;
    const std::vector<double>& dr = dy[t];
    double dot = 0.0;
    for (int n = 0; n < N; ++n) dot += r[n] * dr[n];
    for (int n = 0; n < N; ++n) dlogits[n] = inv_tau * r[n] * (dr[n] - dot);

    const double* h = tr.h.data() + static_cast<std::size_t>(t) * H;
    for (int n = 0; n < N; ++n) {
      const double dl = dlogits[n];
      if (dl == 0.0) continue;
      double* grow = grads.w_out + static_cast<std::size_t>(n) * H;
      const double* row = w.w_out + static_cast<std::size_t>(n) * H;
      for (int j = 0; j < H; ++j) {
        grow[j] += dl * h[j];
        dh[j] += dl * row[j];
      }
      grads.b_out[n] += dl;
    }

    const std::size_t th = static_cast<std::size_t>(t) * H;
    const double* u = tr.u.data() + static_cast<std::size_t>(t) * P;
    const double* h_prev =
        (t == 0) ? tr.h0.data() : tr.h.data() + static_cast<std::size_t>(t - 1) * H;
    const double* c_prev =
        (t == 0) ? tr.c0.data() : tr.c.data() + static_cast<std::size_t>(t - 1) * H;
    lstm_cell_backward<double>(w.w_lstm, H, P, u, h_prev, c_prev,
                               tr.gi.data() + th, tr.gf.data() + th,
                               tr.gg.data() + th, tr.go.data() + th,
                               tr.tc.data() + th, dh.data(), dc.data(),
                               grads.w_lstm, grads.b_lstm, du.data(),
                               dh_prev.data(), dc_prev.data());
    if (t == 0) {
      for (int j = 0; j < P; ++j) grads.start[j] += du[j];
    } else {
      double* erow = grads.emb + static_cast<std::size_t>(tr.tokens[t - 1]) * P;
      for (int j = 0; j < P; ++j) erow[j] += du[j];
      // No gradient through the hard token feedback itself.
    }
    dh = dh_prev;
    dc = dc_prev;
  }

  // Initial state: dh0 = dh, dc0 = dc after the t=0 cell backward.
  for (int k = 0; k < 2 * H; ++k) {
    const double dk = (k < H) ? dh[k] : dc[k - H];
    if (dk == 0.0) continue;
    double* grow = grads.w_init + static_cast<std::size_t>(k) * Z;
    for (int j = 0; j < Z; ++j) grow[j] += dk * tr.z[j];
    grads.b_init[k] += dk;
  }
}

}  // namespace detail

std::vector<std::vector<std::uint32_t>> generate_samples(
    const GeneratorState& gen, std::size_t count, std::uint64_t seed) {
  return generate_samples_parallel(gen, count, seed, 1);
}

std::vector<std::vector<std::uint32_t>> generate_samples_parallel(
    const GeneratorState& gen, std::size_t count, std::uint64_t seed,
    int num_threads) {
  gen.config.validate();
  {
    const std::string bad = gen.params.first_non_finite_group();
    if (!bad.empty())
      throw std::runtime_error(
          "generate_samples: non-finite values in parameter group '" + bad +
          "'");
  }
  const detail::GenWeights w = gen.weights();
  // Fixed shard structure so results do not depend on the thread count.
  constexpr std::size_t kShards = 32;
  std::vector<std::vector<std::vector<std::uint32_t>>> shard_out(kShards);
  std::vector<std::exception_ptr> shard_err(kShards);
  std::size_t base = count / kShards, rem = count % kShards;

  auto run_shard = [&](std::size_t s) {
    try {
      const std::size_t n = base + (s < rem ? 1 : 0);
      Rng rng(mix64(seed, s, 0x6e5a9u));
      detail::GenTrace tr;
      auto& out = shard_out[s];
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        detail::gen_forward(w, rng, tr);
        std::vector<std::uint32_t> seq(tr.tokens.size());
        for (std::size_t t = 0; t < seq.size(); ++t)
          seq[t] = static_cast<std::uint32_t>(tr.tokens[t]);
        out.push_back(std::move(seq));
      }
    } catch (...) {
      shard_err[s] = std::current_exception();
    }
  };

  const int threads = std::max(1, num_threads);
  if (threads == 1) {
    for (std::size_t s = 0; s < kShards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t s = t; s < kShards; s += threads) run_shard(s);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& err : shard_err)
    if (err) std::rethrow_exception(err);

  std::vector<std::vector<std::uint32_t>> all;
  all.reserve(count);
  for (auto& shard : shard_out)
    for (auto& seq : shard) all.push_back(std::move(seq));
  return all;
}

std::vector<double> discriminator_scores(
    const DiscriminatorState& disc,
    const std::vector<std::vector<std::vector<double>>>& batch) {
  const detail::DiscWeights w = disc.weights();
  std::vector<double> scores;
  scores.reserve(batch.size());
  detail::DiscTrace<double> tr;
  for (const auto& seq : batch) {
    std::vector<detail::StepInput> x(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (seq[t].size() != static_cast<std::size_t>(w.num_nodes))
        throw std::invalid_argument(
            "discriminator_scores: step vector length != num_nodes");
      for (std::size_t i = 0; i < seq[t].size(); ++i)
        if (seq[t][i] != 0.0)
          x[t].entries.emplace_back(static_cast<int>(i), seq[t][i]);
    }
    scores.push_back(detail::disc_forward<double>(w, x, tr));
  }
  return scores;
}

// ---------------------------------------------------------------------------
// Checkpoint I/O

namespace {

constexpr char kMagic[8] = {'D', 'P', 'G', 'G', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n,
                      std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return nlohmann::json{{"num_nodes", c.num_nodes},
                        {"noise_dim", c.noise_dim},
                        {"hidden_dim", c.hidden_dim},
                        {"down_projection_dim", c.down_projection_dim},
                        {"sequence_length", c.sequence_length},
                        {"temperature", c.temperature}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.num_nodes = j.at("num_nodes").get<std::uint32_t>();
  c.noise_dim = j.at("noise_dim").get<int>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.down_projection_dim = j.at("down_projection_dim").get<int>();
  c.sequence_length = j.at("sequence_length").get<int>();
  c.temperature = j.at("temperature").get<double>();
  return c;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json manifest;
  manifest["kind"] = ckpt.kind;
  manifest["config"] = config_to_json(ckpt.config);
  manifest["global_step"] = ckpt.global_step;
  manifest["rng_state"] = ckpt.rng_state;
  nlohmann::json groups = nlohmann::json::array();
  for (const ParamGroup& g : ckpt.params.groups)
    groups.push_back(nlohmann::json{
        {"name", g.name}, {"shape", g.shape}, {"offset", g.offset},
        {"size", g.size}});
  manifest["groups"] = groups;
  manifest["param_count"] = ckpt.params.total();
  manifest["values_fnv1a64"] = fnv1a64(
      reinterpret_cast<const unsigned char*>(ckpt.params.values.data()),
      ckpt.params.values.size() * sizeof(double));

  const std::string mtext = manifest.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t mlen = mtext.size();
  out.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
  out.write(mtext.data(), static_cast<std::streamsize>(mtext.size()));
  out.write(reinterpret_cast<const char*>(ckpt.params.values.data()),
            static_cast<std::streamsize>(ckpt.params.values.size() *
                                         sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kVersion)
    throw std::runtime_error("unsupported checkpoint version in " + path);
  std::uint64_t mlen = 0;
  in.read(reinterpret_cast<char*>(&mlen), sizeof(mlen));
  std::string mtext(mlen, '\0');
  in.read(mtext.data(), static_cast<std::streamsize>(mlen));
  if (!in) throw std::runtime_error("truncated checkpoint manifest: " + path);
  const nlohmann::json manifest = nlohmann::json::parse(mtext);

  Checkpoint ckpt;
  ckpt.kind = manifest.at("kind").get<std::string>();
  ckpt.config = config_from_json(manifest.at("config"));
  ckpt.global_step = manifest.at("global_step").get<std::uint64_t>();
  ckpt.rng_state = manifest.at("rng_state").get<std::string>();

  std::size_t expected_total = 0;
  for (const auto& gj : manifest.at("groups")) {
    ParamGroup g;
    g.name = gj.at("name").get<std::string>();
    g.shape = gj.at("shape").get<std::vector<std::size_t>>();
    g.offset = gj.at("offset").get<std::size_t>();
    g.size = gj.at("size").get<std::size_t>();
    std::size_t prod = 1;
    for (std::size_t d : g.shape) prod *= d;
    if (prod != g.size || g.offset != expected_total)
      throw std::runtime_error("inconsistent group manifest in " + path);
    expected_total += g.size;
    ckpt.params.groups.push_back(std::move(g));
  }
  if (expected_total != manifest.at("param_count").get<std::size_t>())
    throw std::runtime_error("param count mismatch in " + path);

  ckpt.params.values.resize(expected_total);
  in.read(reinterpret_cast<char*>(ckpt.params.values.data()),
          static_cast<std::streamsize>(expected_total * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint data: " + path);
  const std::uint64_t sum = fnv1a64(
      reinterpret_cast<const unsigned char*>(ckpt.params.values.data()),
      expected_total * sizeof(double));
  if (sum != manifest.at("values_fnv1a64").get<std::uint64_t>())
    throw std::runtime_error("checkpoint checksum mismatch in " + path);
  return ckpt;
}

GeneratorState generator_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "generator")
    throw std::runtime_error("checkpoint is not a generator");
  GeneratorState gen = init_generator(ckpt.config, 0);
  if (gen.params.groups.size() != ckpt.params.groups.size() ||
      gen.params.total() != ckpt.params.total())
    throw std::runtime_error("generator checkpoint shape mismatch");
  gen.params = ckpt.params;
  gen.global_step = ckpt.global_step;
  return gen;
}

DiscriminatorState discriminator_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "discriminator")
    throw std::runtime_error("checkpoint is not a discriminator");
  DiscriminatorState disc = init_discriminator(ckpt.config, 0);
  if (disc.params.groups.size() != ckpt.params.groups.size() ||
      disc.params.total() != ckpt.params.total())
    throw std::runtime_error("discriminator checkpoint shape mismatch");
  disc.params = ckpt.params;
  disc.global_step = ckpt.global_step;
  return disc;
}

Checkpoint to_checkpoint(const GeneratorState& gen,
                         const std::string& rng_state) {
  return Checkpoint{"generator", gen.config, gen.params, gen.global_step,
                    rng_state};
}

Checkpoint to_checkpoint(const DiscriminatorState& disc,
                         const std::string& rng_state) {
  return Checkpoint{"discriminator", disc.config, disc.params,
                    disc.global_step, rng_state};
}

}  // namespace dpgraphgen
