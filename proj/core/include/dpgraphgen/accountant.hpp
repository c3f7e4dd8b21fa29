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

#ifndef DPGRAPHGEN_ACCOUNTANT_HPP_
#define DPGRAPHGEN_ACCOUNTANT_HPP_

#include <cstdint>
#include <vector>

namespace dpgraphgen {

// Log moment-generating function of the privacy loss of a single
// subsampled-Gaussian step at integer order `order`:
//
//   log E_{z~mu}[ (mu(z)/mu0(z))^order ]
//
// with mu0 = N(0, sigma^2) and mu = (1-q) N(0, sigma^2) + q N(1, sigma^2),
// evaluated via the binomial expansion of the mixture moment with
// log-sum-exp accumulation. For q = 1 this reduces to the analytic Gaussian
// value order*(order+1)/(2 sigma^2); for q = 0 it is 0.
// Returns +infinity when sigma == 0 (and q > 0).
double single_step_log_moment(double q, double sigma, int order);

// Moments accountant: log moments compose additively across steps, so the
// ledger is fully described by (q, sigma, T) and the order set.
class PrivacyLedger {
 public:
  // orders must be positive integers; defaults to {1..64}.
  PrivacyLedger(double sampling_rate, double noise_scale,
                std::vector<int> orders = default_orders());

  static std::vector<int> default_orders();

  void advance(std::uint64_t num_steps);

  double sampling_rate() const { return q_; }
  double noise_scale() const { return sigma_; }
  std::uint64_t steps() const { return steps_; }
  const std::vector<int>& orders() const { return orders_; }
  const std::vector<double>& log_moments() const { return log_moments_; }

  // epsilon = min over orders of (log_moment + ln(1/delta)) / order.
  // Returns 0 when no data has been touched (T == 0 or q == 0) and
  // +infinity when sigma == 0 with T > 0.
  double epsilon_for_delta(double delta) const;
  // delta = min over orders of exp(log_moment - order * epsilon), in [0,1].
  double delta_for_epsilon(double epsilon) const;

  // Order achieving the minimum in epsilon_for_delta.
  int minimizing_order(double delta) const;
  // Order achieving the minimum in delta_for_epsilon.
  int minimizing_order_for_epsilon(double epsilon) const;

 private:
  double q_;
  double sigma_;
  std::uint64_t steps_ = 0;
  std::vector<int> orders_;
  std::vector<double> step_log_moments_;  // per-order single-step values
  std::vector<double> log_moments_;       // accumulated: steps_ * per-step
};

}  // namespace dpgraphgen

#endif  // DPGRAPHGEN_ACCOUNTANT_HPP_
