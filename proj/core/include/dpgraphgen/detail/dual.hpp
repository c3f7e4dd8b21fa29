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

#ifndef DPGRAPHGEN_DETAIL_DUAL_HPP_
#define DPGRAPHGEN_DETAIL_DUAL_HPP_

#include <cmath>

namespace dpgraphgen::detail {

// First-order dual number: value plus a single tangent. Running the network
// forward and backward passes on Dual scalars yields, in the tangent slots of
// the parameter gradients, the directional derivative of those gradients
// along the tangent seeded on the inputs. That is exactly the
// gradient-of-gradient contraction the gradient penalty needs.
struct Dual {
  double v = 0.0;
  double t = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design
  Dual(double value, double tangent) : v(value), t(tangent) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.t + b.t}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.t - b.t}; }
inline Dual operator-(Dual a) { return {-a.v, -a.t}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.v * b.v, a.t * b.v + a.v * b.t};
}
inline Dual operator/(Dual a, Dual b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.t - a.v * inv * b.t) * inv};
}
inline Dual& operator+=(Dual& a, Dual b) { a = a + b; return a; }
inline Dual& operator-=(Dual& a, Dual b) { a = a - b; return a; }
inline Dual& operator*=(Dual& a, Dual b) { a = a * b; return a; }

inline Dual tanh(Dual a) {
  const double th = std::tanh(a.v);
  return {th, (1.0 - th * th) * a.t};
}

inline Dual sigmoid(Dual a) {
  const double s = 1.0 / (1.0 + std::exp(-a.v));
  return {s, s * (1.0 - s) * a.t};
}

inline double value(double x) { return x; }
inline double value(Dual x) { return x.v; }
inline double tangent(double) { return 0.0; }
inline double tangent(Dual x) { return x.t; }

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

using std::tanh;

}  // namespace dpgraphgen::detail

#endif  // DPGRAPHGEN_DETAIL_DUAL_HPP_
