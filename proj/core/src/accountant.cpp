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

#include "dpgraphgen/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dpgraphgen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double single_step_log_moment(double q, double sigma, int order) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("single_step_log_moment: q must be in [0,1]");
  if (sigma < 0.0)
    throw std::invalid_argument("single_step_log_moment: sigma must be >= 0");
  if (order < 1)
    throw std::invalid_argument("single_step_log_moment: order must be >= 1");
  if (q == 0.0) return 0.0;
  if (sigma == 0.0) return kInf;

  const double inv_2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_q = std::log(q);
  const double log_1mq = (q < 1.0) ? std::log1p(-q) : -kInf;

  // E_{z~mu}[(mu/mu0)^order]
  //   = sum_j C(order,j) (1-q)^{order-j} q^j
  //       * [ (1-q) e^{j(j-1)/(2s^2)} + q e^{j(j+1)/(2s^2)} ]
  double acc = -kInf;
  for (int j = 0; j <= order; ++j) {
    const double coeff = log_binomial(order, j) + j * log_q +
                         (order - j) * ((q < 1.0) ? log_1mq : 0.0);
    if (q == 1.0 && j != order) continue;
    const double a = static_cast<double>(j) * (j - 1.0) * inv_2s2;
    const double b = static_cast<double>(j) * (j + 1.0) * inv_2s2;
    double inner;
    if (q < 1.0)
      inner = log_add(log_1mq + a, log_q + b);
    else
      inner = b;
    acc = log_add(acc, coeff + inner);
  }
  return acc;
}

std::vector<int> PrivacyLedger::default_orders() {
  std::vector<int> orders(64);
  std::iota(orders.begin(), orders.end(), 1);
  return orders;
}

PrivacyLedger::PrivacyLedger(double sampling_rate, double noise_scale,
                             std::vector<int> orders)
    : q_(sampling_rate), sigma_(noise_scale), orders_(std::move(orders)) {
  if (q_ < 0.0 || q_ > 1.0)
    throw std::invalid_argument("PrivacyLedger: sampling rate must be in [0,1]");
  if (sigma_ < 0.0)
    throw std::invalid_argument("PrivacyLedger: noise scale must be >= 0");
  if (orders_.empty())
    throw std::invalid_argument("PrivacyLedger: order set must be non-empty");
  step_log_moments_.reserve(orders_.size());
  for (int lambda : orders_)
    step_log_moments_.push_back(single_step_log_moment(q_, sigma_, lambda));
  log_moments_.assign(orders_.size(), 0.0);
}

void PrivacyLedger::advance(std::uint64_t num_steps) {
  steps_ += num_steps;
  for (std::size_t i = 0; i < orders_.size(); ++i)
    log_moments_[i] = static_cast<double>(steps_) * step_log_moments_[i];
}

double PrivacyLedger::epsilon_for_delta(double delta) const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("epsilon_for_delta: delta must be in (0,1)");
  if (steps_ == 0 || q_ == 0.0) return 0.0;
  if (sigma_ == 0.0) return kInf;
  double eps = kInf;
  const double log_inv_delta = std::log(1.0 / delta);
  for (std::size_t i = 0; i < orders_.size(); ++i)
    eps = std::min(eps, (log_moments_[i] + log_inv_delta) / orders_[i]);
  return eps;
}

int PrivacyLedger::minimizing_order(double delta) const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("minimizing_order: delta must be in (0,1)");
  const double log_inv_delta = std::log(1.0 / delta);
  int best = orders_.front();
  double best_eps = kInf;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const double eps = (log_moments_[i] + log_inv_delta) / orders_[i];
    if (eps < best_eps) {
      best_eps = eps;
      best = orders_[i];
    }
  }
  return best;
}

int PrivacyLedger::minimizing_order_for_epsilon(double epsilon) const {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("minimizing_order_for_epsilon: epsilon > 0");
  int best = orders_.front();
  double best_log_delta = kInf;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const double log_delta = log_moments_[i] - orders_[i] * epsilon;
    if (log_delta < best_log_delta) {
      best_log_delta = log_delta;
      best = orders_[i];
    }
  }
  return best;
}

double PrivacyLedger::delta_for_epsilon(double epsilon) const {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("delta_for_epsilon: epsilon must be > 0");
  if (steps_ == 0 || q_ == 0.0) return 0.0;
  if (sigma_ == 0.0) return 1.0;
  double log_delta = kInf;
  for (std::size_t i = 0; i < orders_.size(); ++i)
    log_delta = std::min(log_delta, log_moments_[i] - orders_[i] * epsilon);
  return std::min(1.0, std::exp(log_delta));
}

}  // namespace dpgraphgen
