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

#include "dpgraphgen/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dpgraphgen {

void ExperimentConfig::validate() const {
  if (mode == SampleMode::kWalk) {
    if (walk_length < 2)
      throw ConfigError("walk.length must be >= 2");
    if (dp.enabled)
      throw ConfigError(
          "walk mode is the non-private baseline; set dp.enabled = false");
  }
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw ConfigError("split.fraction must be in (0,1)");
  if (sample_volume == 0)
    throw ConfigError("sample_volume is 0: no samples to assemble");
  if (checkpoint_sample_volume == 0)
    throw ConfigError("checkpoint_sample_volume must be >= 1");
  try {
    gan.validate();
    dp.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (model.noise_dim < 1 || model.hidden_dim < 1 ||
      model.down_projection_dim < 1)
    throw ConfigError("model dims must be >= 1");
  if (!(model.temperature > 0.0))
    throw ConfigError("model.temperature must be > 0");
}

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw ConfigError("integer out of range for " + key);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "dataset.path = " << dataset_path << "\n";
  out << "mode = " << (mode == SampleMode::kEdge ? "edge" : "walk") << "\n";
  out << "walk.length = " << walk_length << "\n";
  out << "split.fraction = " << format_double(split_fraction) << "\n";
  out << "model.noise_dim = " << model.noise_dim << "\n";
  out << "model.hidden_dim = " << model.hidden_dim << "\n";
  out << "model.down_projection_dim = " << model.down_projection_dim << "\n";
  out << "model.temperature = " << format_double(model.temperature) << "\n";
  out << "gan.lambda_gp = " << format_double(gan.lambda_gp) << "\n";
  out << "gan.n_critic = " << gan.n_critic << "\n";
  out << "gan.batch_size = " << gan.batch_size << "\n";
  out << "gan.adam_alpha = " << format_double(gan.adam.alpha) << "\n";
  out << "gan.adam_beta1 = " << format_double(gan.adam.beta1) << "\n";
  out << "gan.adam_beta2 = " << format_double(gan.adam.beta2) << "\n";
  out << "gan.checkpoint_epochs = " << gan.checkpoint_epochs << "\n";
  out << "gan.patience = " << gan.patience << "\n";
  out << "gan.max_epochs = " << gan.max_epochs << "\n";
  out << "dp.enabled = " << (dp.enabled ? "true" : "false") << "\n";
  out << "dp.clip_bound = " << format_double(dp.clip_bound) << "\n";
  out << "dp.noise_scale = " << format_double(dp.noise_scale) << "\n";
  out << "dp.target_delta = " << format_double(dp.target_delta) << "\n";
  out << "dp.target_epsilon = " << format_double(dp.target_epsilon) << "\n";
  out << "dp.budget_convention = "
      << (dp.convention == BudgetConvention::kEpsilonAtDelta
              ? "epsilon_at_delta"
              : "delta_at_epsilon")
      << "\n";
  out << "dp.sampling = "
      << (dp.sampling == SamplingScheme::kFixedSize ? "fixed" : "poisson")
      << "\n";
  out << "sample_volume = " << sample_volume << "\n";
  out << "checkpoint_sample_volume = " << checkpoint_sample_volume << "\n";
  out << "seed = " << seed << "\n";
  out << "output_dir = " << output_dir << "\n";
  return out.str();
}

std::uint64_t fnv1a64_text(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  std::ostringstream ss;
  ss << std::hex << fnv1a64_text(to_text());
  return ss.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    // trim
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    if (start >= line.size()) continue;
    const std::size_t eq = line.find('=', start);
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    std::size_t vstart = 0;
    while (vstart < value.size() && is_space(value[vstart])) ++vstart;
    value.erase(0, vstart);

    if (key == "dataset.path") cfg.dataset_path = value;
    else if (key == "mode") {
      if (value == "edge") cfg.mode = SampleMode::kEdge;
      else if (value == "walk") cfg.mode = SampleMode::kWalk;
      else throw ConfigError("mode must be 'edge' or 'walk'");
    }
    else if (key == "walk.length") cfg.walk_length = parse_int(key, value);
    else if (key == "split.fraction") cfg.split_fraction = parse_double(key, value);
    else if (key == "model.noise_dim") cfg.model.noise_dim = parse_int(key, value);
    else if (key == "model.hidden_dim") cfg.model.hidden_dim = parse_int(key, value);
    else if (key == "model.down_projection_dim")
      cfg.model.down_projection_dim = parse_int(key, value);
    else if (key == "model.temperature")
      cfg.model.temperature = parse_double(key, value);
    else if (key == "gan.lambda_gp") cfg.gan.lambda_gp = parse_double(key, value);
    else if (key == "gan.n_critic") cfg.gan.n_critic = parse_int(key, value);
    else if (key == "gan.batch_size")
      cfg.gan.batch_size = parse_u64(key, value);
    else if (key == "gan.adam_alpha") cfg.gan.adam.alpha = parse_double(key, value);
    else if (key == "gan.adam_beta1") cfg.gan.adam.beta1 = parse_double(key, value);
    else if (key == "gan.adam_beta2") cfg.gan.adam.beta2 = parse_double(key, value);
    else if (key == "gan.checkpoint_epochs")
      cfg.gan.checkpoint_epochs = parse_int(key, value);
    else if (key == "gan.patience") cfg.gan.patience = parse_int(key, value);
    else if (key == "gan.max_epochs") cfg.gan.max_epochs = parse_int(key, value);
    else if (key == "dp.enabled") cfg.dp.enabled = parse_bool(key, value);
    else if (key == "dp.clip_bound") cfg.dp.clip_bound = parse_double(key, value);
    else if (key == "dp.noise_scale")
      cfg.dp.noise_scale = parse_double(key, value);
    else if (key == "dp.target_delta")
      cfg.dp.target_delta = parse_double(key, value);
    else if (key == "dp.target_epsilon")
      cfg.dp.target_epsilon = parse_double(key, value);
    else if (key == "dp.budget_convention") {
      if (value == "epsilon_at_delta")
        cfg.dp.convention = BudgetConvention::kEpsilonAtDelta;
      else if (value == "delta_at_epsilon")
        cfg.dp.convention = BudgetConvention::kDeltaAtEpsilon;
      else throw ConfigError("dp.budget_convention must be epsilon_at_delta or delta_at_epsilon");
    }
    else if (key == "dp.sampling") {
      if (value == "fixed") cfg.dp.sampling = SamplingScheme::kFixedSize;
      else if (value == "poisson") cfg.dp.sampling = SamplingScheme::kPoisson;
      else throw ConfigError("dp.sampling must be 'fixed' or 'poisson'");
    }
    else if (key == "sample_volume") cfg.sample_volume = parse_u64(key, value);
    else if (key == "checkpoint_sample_volume")
      cfg.checkpoint_sample_volume = parse_u64(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace dpgraphgen
