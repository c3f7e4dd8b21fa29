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
#include <limits>

#include "dpgraphgen/accountant.hpp"
#include "oracles.hpp"

using namespace dpgraphgen;

TEST_CASE("q=1 log moments equal the analytic Gaussian value") {
  for (double sigma : {0.5, 1.0, 2.0, 4.0})
    for (int lambda = 1; lambda <= 32; ++lambda) {
      const double expected = lambda * (lambda + 1.0) / (2.0 * sigma * sigma);
      CHECK(single_step_log_moment(1.0, sigma, lambda) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("q=0 touches no data; sigma=0 is the infinite sentinel") {
  CHECK(single_step_log_moment(0.0, 1.0, 5) == 0.0);
  CHECK(single_step_log_moment(0.0, 0.0, 1) == 0.0);
  CHECK(std::isinf(single_step_log_moment(0.5, 0.0, 3)));
}

TEST_CASE("subsampled log moment matches the integration oracle") {
  // The named [DERIVED] point first.
  const double fast = single_step_log_moment(0.01, 1.0, 2);
  const double slow = oracles::log_moment_by_integration(0.01, 1.0, 2);
  CHECK(std::abs(fast - slow) < 1e-6);

  for (double q : {0.01, 0.1, 0.5})
    for (double sigma : {0.5, 1.0, 2.0})
      for (int lambda : {2, 4, 8}) {
        const double a = single_step_log_moment(q, sigma, lambda);
        const double b = oracles::log_moment_by_integration(q, sigma, lambda);
        INFO("q=", q, " sigma=", sigma, " lambda=", lambda, " fast=", a,
             " oracle=", b);
        CHECK(std::abs(a - b) < 1e-6);
      }
}

TEST_CASE("advance is additive and strictly increasing") {
  PrivacyLedger ledger(0.1, 1.0);
  ledger.advance(0);
  CHECK(ledger.steps() == 0);
  for (double lm : ledger.log_moments()) CHECK(lm == 0.0);

  PrivacyLedger three(0.1, 1.0);
  three.advance(3);
  PrivacyLedger ones(0.1, 1.0);
  ones.advance(1);
  ones.advance(1);
  ones.advance(1);
  CHECK(three.steps() == ones.steps());
  for (std::size_t i = 0; i < three.log_moments().size(); ++i) {
    CHECK(three.log_moments()[i] == doctest::Approx(ones.log_moments()[i]));
    CHECK(three.log_moments()[i] > 0.0);
  }
}

TEST_CASE("composition additivity is exact") {
  PrivacyLedger a(0.2, 1.5);
  a.advance(7);
  PrivacyLedger b(0.2, 1.5);
  b.advance(5);
  PrivacyLedger ab(0.2, 1.5);
  ab.advance(12);
  for (std::size_t i = 0; i < ab.log_moments().size(); ++i)
    CHECK(ab.log_moments()[i] ==
          doctest::Approx(a.log_moments()[i] + b.log_moments()[i])
              .epsilon(1e-15));
}

TEST_CASE("epsilon at q=1, sigma=1, T=1, delta=1e-5") {
  std::vector<int> orders(32);
  for (int i = 0; i < 32; ++i) orders[i] = i + 1;
  PrivacyLedger ledger(1.0, 1.0, orders);
  ledger.advance(1);
  const double eps = ledger.epsilon_for_delta(1e-5);
  // min over integer orders of (l(l+1)/2 + ln(1e5)) / l, attained at l = 5.
  CHECK(eps == doctest::Approx(5.3026).epsilon(1e-3 / 5.3026));
  CHECK(ledger.minimizing_order(1e-5) == 5);

  // Inverse: delta at that epsilon is within the tail bound.
  CHECK(ledger.delta_for_epsilon(5.3026) <= 1e-5 + 1e-9);
}

TEST_CASE("edge cases of the (epsilon, delta) conversions") {
  PrivacyLedger fresh(0.3, 1.0);
  CHECK(fresh.epsilon_for_delta(1e-5) == 0.0);
  CHECK(fresh.delta_for_epsilon(1.0) == 0.0);

  PrivacyLedger none(0.0, 1.0);
  none.advance(100);
  CHECK(none.epsilon_for_delta(1e-5) == 0.0);
  CHECK(none.delta_for_epsilon(1.0) == 0.0);

  PrivacyLedger noiseless(0.3, 0.0);
  noiseless.advance(1);
  CHECK(std::isinf(noiseless.epsilon_for_delta(1e-5)));
}

TEST_CASE("round-trip duality at integer orders") {
  PrivacyLedger ledger(0.05, 1.2);
  ledger.advance(250);
  for (double eps : {0.5, 1.0, 2.0, 5.0}) {
    const double delta = ledger.delta_for_epsilon(eps);
    if (delta <= 0.0 || delta >= 1.0) continue;
    CHECK(ledger.epsilon_for_delta(delta) <= eps + 1e-9);
  }
}

TEST_CASE("monotonicity sweep over (T, q, sigma, delta)") {
  const std::vector<std::uint64_t> steps = {1, 10, 100, 1000};
  const std::vector<double> qs = {0.01, 0.05, 0.2, 1.0};
  const std::vector<double> sigmas = {0.5, 1.0, 2.0, 4.0};
  const std::vector<double> deltas = {1e-7, 1e-5, 1e-3, 1e-2};

  // epsilon non-decreasing in T and q.
  for (double q : qs)
    for (double sigma : sigmas) {
      double prev = -1.0;
      for (std::uint64_t t : steps) {
        PrivacyLedger l(q, sigma);
        l.advance(t);
        const double eps = l.epsilon_for_delta(1e-5);
        CHECK(eps >= prev - 1e-12);
        prev = eps;
      }
    }
  for (std::uint64_t t : steps)
    for (double sigma : sigmas) {
      double prev = -1.0;
      for (double q : qs) {
        PrivacyLedger l(q, sigma);
        l.advance(t);
        const double eps = l.epsilon_for_delta(1e-5);
        CHECK(eps >= prev - 1e-12);
        prev = eps;
      }
    }
  // epsilon non-increasing in sigma and delta.
  for (std::uint64_t t : steps)
    for (double q : qs) {
      double prev = std::numeric_limits<double>::infinity();
      for (double sigma : sigmas) {
        PrivacyLedger l(q, sigma);
        l.advance(t);
        const double eps = l.epsilon_for_delta(1e-5);
        CHECK(eps <= prev + 1e-12);
        prev = eps;
      }
      PrivacyLedger l(q, 1.0);
      l.advance(t);
      double prev_d = std::numeric_limits<double>::infinity();
      for (double delta : deltas) {
        const double eps = l.epsilon_for_delta(delta);
        CHECK(eps <= prev_d + 1e-12);
        prev_d = eps;
      }
    }
}
