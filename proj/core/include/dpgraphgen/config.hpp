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

#ifndef DPGRAPHGEN_CONFIG_HPP_
#define DPGRAPHGEN_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dpgraphgen/model.hpp"
#include "dpgraphgen/trainer.hpp"

namespace dpgraphgen {

// Invalid flags or configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stage of the pipeline failed; the CLI maps this to exit code 3.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& message)
      : std::runtime_error("stage '" + stage + "' failed: " + message),
        stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class SampleMode { kEdge, kWalk };

struct ExperimentConfig {
  std::string dataset_path;
  SampleMode mode = SampleMode::kEdge;
  int walk_length = 16;          // used in walk mode
  double split_fraction = 0.15;
  ModelConfig model;             // num_nodes is filled from the LCC
  GanConfig gan;
  DpConfig dp;
  std::size_t sample_volume = 400000;
  std::size_t checkpoint_sample_volume = 40000;
  std::uint64_t seed = 1;
  std::string output_dir;

  int sequence_length() const {
    return mode == SampleMode::kEdge ? 2 : walk_length;
  }

  // Throws ConfigError on inconsistencies (e.g. walk mode with DP enabled,
  // zero sample volume).
  void validate() const;

  // Canonical flat "key = value" text with every default resolved.
  std::string to_text() const;
  // FNV-1a of the canonical text, hex-encoded.
  std::string hash() const;
};

// Parses the flat "key = value" format ('#' comments, dotted sections).
// Unknown keys raise ConfigError with the line number.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64_text(const std::string& text);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_CONFIG_HPP_
