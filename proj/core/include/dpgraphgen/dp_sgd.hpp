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

#ifndef DPGRAPHGEN_DP_SGD_HPP_
#define DPGRAPHGEN_DP_SGD_HPP_

#include <cstddef>
#include <vector>

#include "dpgraphgen/rng.hpp"

namespace dpgraphgen {

// g / max(1, ||g||_2 / C): the L2 norm of the result is at most C and the
// direction is preserved; vectors already within the bound pass unchanged.
// Throws on non-finite input or C <= 0.
std::vector<double> clip_per_example(const std::vector<double>& grad, double c);

// In-place variant; returns the pre-clip norm.
double clip_per_example_inplace(std::vector<double>& grad, double c);

// (1/m) * (sum_i g_i + xi) with a single Gaussian draw xi ~ N(0, (sigma C)^2 I).
// Each input must satisfy ||g_i|| <= C + 1e-9 (the clipping contract); the
// aggregate is deterministic given the rng state.
std::vector<double> noisy_aggregate(
    const std::vector<std::vector<double>>& clipped_grads, double sigma,
    double c, Rng& rng);

// Streaming form used by the trainer: `sum` already holds sum_i g_i for
// `count` clipped examples; adds noise and divides by `count` in place.
void noisy_aggregate_inplace(std::vector<double>& sum, std::size_t count,
                             double sigma, double c, Rng& rng);

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

// Adam with bias correction; one instance per parameter vector.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::size_t dim, AdamConfig cfg = {});

  void step(std::vector<double>& params, const std::vector<double>& grad);
  std::uint64_t steps_taken() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::uint64_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

double l2_norm(const std::vector<double>& v);

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_DP_SGD_HPP_
