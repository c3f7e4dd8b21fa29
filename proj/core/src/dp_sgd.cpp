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

#include "dpgraphgen/dp_sgd.hpp"

#include <cmath>
#include <stdexcept>

namespace dpgraphgen {

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double clip_per_example_inplace(std::vector<double>& grad, double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("clip_per_example: bound must be > 0");
  double s = 0.0;
  for (double x : grad) {
    if (!std::isfinite(x))
      throw std::invalid_argument("clip_per_example: non-finite gradient");
    s += x * x;
  }
  const double norm = std::sqrt(s);
  const double denom = std::max(1.0, norm / c);
  if (denom > 1.0)
    for (double& x : grad) x /= denom;
  return norm;
}

std::vector<double> clip_per_example(const std::vector<double>& grad,
                                     double c) {
  std::vector<double> out = grad;
  clip_per_example_inplace(out, c);
  return out;
}

void noisy_aggregate_inplace(std::vector<double>& sum, std::size_t count,
                             double sigma, double c, Rng& rng) {
  if (count == 0)
    throw std::invalid_argument("noisy_aggregate: empty gradient list");
  const double scale = sigma * c;
  const double inv_m = 1.0 / static_cast<double>(count);
  if (scale > 0.0) {
    for (double& x : sum) x = (x + scale * rng.gaussian()) * inv_m;
  } else {
    for (double& x : sum) x *= inv_m;
  }
}

std::vector<double> noisy_aggregate(
    const std::vector<std::vector<double>>& clipped_grads, double sigma,
    double c, Rng& rng) {
  if (clipped_grads.empty())
    throw std::invalid_argument("noisy_aggregate: empty gradient list");
  const std::size_t dim = clipped_grads.front().size();
  std::vector<double> sum(dim, 0.0);
  for (const auto& g : clipped_grads) {
    if (g.size() != dim)
      throw std::invalid_argument("noisy_aggregate: mismatched lengths");
    if (l2_norm(g) > c + 1e-9)
      throw std::invalid_argument(
          "noisy_aggregate: gradient norm exceeds the clipping bound");
    for (std::size_t i = 0; i < dim; ++i) sum[i] += g[i];
  }
  noisy_aggregate_inplace(sum, clipped_grads.size(), sigma, c, rng);
  return sum;
}

AdamOptimizer::AdamOptimizer(std::size_t dim, AdamConfig cfg)
    : cfg_(cfg), m_(dim, 0.0), v_(dim, 0.0) {
  if (!(cfg_.beta1 >= 0.0 && cfg_.beta1 < 1.0) ||
      !(cfg_.beta2 >= 0.0 && cfg_.beta2 < 1.0))
    throw std::invalid_argument("AdamOptimizer: betas must be in [0,1)");
}

void AdamOptimizer::step(std::vector<double>& params,
                         const std::vector<double>& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("AdamOptimizer: dimension mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    params[i] -= cfg_.alpha * mhat / (std::sqrt(vhat) + cfg_.epsilon);
  }
}

}  // namespace dpgraphgen
