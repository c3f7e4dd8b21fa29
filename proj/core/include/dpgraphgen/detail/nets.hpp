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

#ifndef DPGRAPHGEN_DETAIL_NETS_HPP_
#define DPGRAPHGEN_DETAIL_NETS_HPP_

#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "dpgraphgen/detail/dual.hpp"

namespace dpgraphgen::detail {

// One discriminator input step: sparse value entries over [0, N), plus an
// optional dense tangent of length N (seeded by the dual pass).
struct StepInput {
  std::vector<std::pair<int, double>> entries;
  const double* tangent = nullptr;
};

// Raw views into the discriminator's flat parameter vector.
// Group layout (row-major):
//   w_in  P x N, b_in  P
//   w_lstm 4H x (P+H) with gate rows blocked [input, forget, cell, output]
//   b_lstm 4H
//   w_out H, b_out 1
template <class Ptr>
struct DiscView {
  Ptr w_in;
  Ptr b_in;
  Ptr w_lstm;
  Ptr b_lstm;
  Ptr w_out;
  Ptr b_out;
  int num_nodes;
  int proj_dim;
  int hidden_dim;
};

using DiscWeights = DiscView<const double*>;
template <class S>
using DiscGrads = DiscView<S*>;

template <class S>
struct DiscTrace {
  int steps = 0;
  std::vector<S> u;                    // T*P
  std::vector<S> gi, gf, gg, go;       // T*H
  std::vector<S> c, tc, h;             // T*H
  void resize(int T, int P, int H) {
    steps = T;
    u.assign(static_cast<std::size_t>(T) * P, S(0.0));
    const std::size_t th = static_cast<std::size_t>(T) * H;
    gi.assign(th, S(0.0));
    gf.assign(th, S(0.0));
    gg.assign(th, S(0.0));
    go.assign(th, S(0.0));
    c.assign(th, S(0.0));
    tc.assign(th, S(0.0));
    h.assign(th, S(0.0));
  }
};

// in = [input ; h_prev], both S-typed; weights are plain doubles.
template <class S>
inline void lstm_cell_forward(const double* w, const double* b, int H,
                              int in_dim, const S* input, const S* h_prev,
                              const S* c_prev, S* gi, S* gf, S* gg, S* go,
                              S* c, S* tc, S* h) {
  const int D = in_dim + H;
  for (int k = 0; k < 4 * H; ++k) {
    S a = S(b[k]);
    const double* row = w + static_cast<std::size_t>(k) * D;
    for (int j = 0; j < in_dim; ++j) a += row[j] * input[j];
    for (int j = 0; j < H; ++j) a += row[in_dim + j] * h_prev[j];
    const int u = k % H;
    switch (k / H) {
      case 0: gi[u] = sigmoid(a); break;
      case 1: gf[u] = sigmoid(a); break;
      case 2: gg[u] = tanh(a); break;
      default: go[u] = sigmoid(a); break;
    }
  }
  for (int u = 0; u < H; ++u) {
    c[u] = gf[u] * c_prev[u] + gi[u] * gg[u];
    tc[u] = tanh(c[u]);
    h[u] = go[u] * tc[u];
  }
}

// Backward through one cell. dh/dc are the gradients flowing into h_t/c_t;
// dc_prev/dh_prev/dinput receive the upstream gradients (overwritten, not
// accumulated). dw/db accumulate.
template <class S>
inline void lstm_cell_backward(const double* w, int H, int in_dim,
                               const S* input, const S* h_prev, const S* c_prev,
                               const S* gi, const S* gf, const S* gg,
                               const S* go, const S* tc, const S* dh,
                               const S* dc, S* dw, S* db, S* dinput,
                               S* dh_prev, S* dc_prev) {
  const int D = in_dim + H;
  std::vector<S> da(static_cast<std::size_t>(4) * H);
  for (int u = 0; u < H; ++u) {
    const S dout = dh[u] * tc[u];
    const S dct = dc[u] + dh[u] * go[u] * (S(1.0) - tc[u] * tc[u]);
    const S di = dct * gg[u];
    const S df = dct * c_prev[u];
    const S dg = dct * gi[u];
    dc_prev[u] = dct * gf[u];
    da[0 * H + u] = di * gi[u] * (S(1.0) - gi[u]);
    da[1 * H + u] = df * gf[u] * (S(1.0) - gf[u]);
    da[2 * H + u] = dg * (S(1.0) - gg[u] * gg[u]);
    da[3 * H + u] = dout * go[u] * (S(1.0) - go[u]);
  }
  for (int j = 0; j < in_dim; ++j) dinput[j] = S(0.0);
  for (int j = 0; j < H; ++j) dh_prev[j] = S(0.0);
  for (int k = 0; k < 4 * H; ++k) {
    const S dak = da[k];
    const double* row = w + static_cast<std::size_t>(k) * D;
    S* drow = dw + static_cast<std::size_t>(k) * D;
    for (int j = 0; j < in_dim; ++j) {
      drow[j] += dak * input[j];
      dinput[j] += row[j] * dak;
    }
    for (int j = 0; j < H; ++j) {
      drow[in_dim + j] += dak * h_prev[j];
      dh_prev[j] += row[in_dim + j] * dak;
    }
    db[k] += dak;
  }
}

// Forward pass of the discriminator on a sequence of step inputs.
// Initial recurrent state is zero. Returns the scalar score.
template <class S>
S disc_forward(const DiscWeights& w, const std::vector<StepInput>& x,
               DiscTrace<S>& tr) {
  const int N = w.num_nodes, P = w.proj_dim, H = w.hidden_dim;
  const int T = static_cast<int>(x.size());
  tr.resize(T, P, H);
  std::vector<S> zero(H, S(0.0));
  for (int t = 0; t < T; ++t) {
    S* u = tr.u.data() + static_cast<std::size_t>(t) * P;
    for (int p = 0; p < P; ++p) {
      double val = w.b_in[p];
      const double* row = w.w_in + static_cast<std::size_t>(p) * N;
      for (const auto& [idx, xv] : x[t].entries) val += xv * row[idx];
      if constexpr (std::is_same_v<S, Dual>) {
        double tg = 0.0;
        if (x[t].tangent != nullptr)
          for (int i = 0; i < N; ++i) tg += row[i] * x[t].tangent[i];
        u[p] = Dual(val, tg);
      } else {
        u[p] = val;
      }
    }
    const S* h_prev = (t == 0) ? zero.data()
                               : tr.h.data() + static_cast<std::size_t>(t - 1) * H;
    const S* c_prev = (t == 0) ? zero.data()
                               : tr.c.data() + static_cast<std::size_t>(t - 1) * H;
    const std::size_t th = static_cast<std::size_t>(t) * H;
    lstm_cell_forward(w.w_lstm, w.b_lstm, H, P, u, h_prev, c_prev,
                      tr.gi.data() + th, tr.gf.data() + th, tr.gg.data() + th,
                      tr.go.data() + th, tr.c.data() + th, tr.tc.data() + th,
                      tr.h.data() + th);
  }
  S score = S(w.b_out[0]);
  const S* h_last = tr.h.data() + static_cast<std::size_t>(T - 1) * H;
  for (int j = 0; j < H; ++j) score += w.w_out[j] * h_last[j];
  return score;
}

// Backward pass. Accumulates parameter gradients scaled by dscore into
// `grads` when non-null; a per-cell scratch buffer absorbs the LSTM
// accumulation otherwise. If dx is non-null it receives the dense input
// gradients (T vectors of length N, overwritten).
template <class S>
void disc_backward(const DiscWeights& w, const std::vector<StepInput>& x,
                   const DiscTrace<S>& tr, S dscore, DiscGrads<S>* grads,
                   std::vector<std::vector<S>>* dx) {
  const int N = w.num_nodes, P = w.proj_dim, H = w.hidden_dim;
  const int T = tr.steps;
  if (dx != nullptr) dx->assign(T, std::vector<S>(N, S(0.0)));

  std::vector<S> zero(H, S(0.0));
  std::vector<S> dh(H, S(0.0)), dc(H, S(0.0));
  std::vector<S> dh_prev(H), dc_prev(H), du(P);
  std::vector<S> scratch_w, scratch_b;
  S* dw_lstm;
  S* db_lstm;
  if (grads != nullptr) {
    dw_lstm = grads->w_lstm;
    db_lstm = grads->b_lstm;
  } else {
    scratch_w.assign(static_cast<std::size_t>(4) * H * (P + H), S(0.0));
    scratch_b.assign(static_cast<std::size_t>(4) * H, S(0.0));
    dw_lstm = scratch_w.data();
    db_lstm = scratch_b.data();
  }

  const S* h_last = tr.h.data() + static_cast<std::size_t>(T - 1) * H;
  if (grads != nullptr) grads->b_out[0] += dscore;
  for (int j = 0; j < H; ++j) {
    if (grads != nullptr) grads->w_out[j] += dscore * h_last[j];
    dh[j] = dscore * w.w_out[j];
  }

  for (int t = T - 1; t >= 0; --t) {
    const std::size_t th = static_cast<std::size_t>(t) * H;
    const S* u = tr.u.data() + static_cast<std::size_t>(t) * P;
    const S* h_prev =
        (t == 0) ? zero.data() : tr.h.data() + static_cast<std::size_t>(t - 1) * H;
    const S* c_prev =
        (t == 0) ? zero.data() : tr.c.data() + static_cast<std::size_t>(t - 1) * H;
    lstm_cell_backward(w.w_lstm, H, P, u, h_prev, c_prev, tr.gi.data() + th,
                       tr.gf.data() + th, tr.gg.data() + th, tr.go.data() + th,
                       tr.tc.data() + th, dh.data(), dc.data(), dw_lstm,
                       db_lstm, du.data(), dh_prev.data(), dc_prev.data());
    // Input projection: dW_in += du x^T (sparse columns, dense tangent),
    // db_in += du, dx = W_in^T du.
    for (int p = 0; p < P; ++p) {
      const S dup = du[p];
      if (grads != nullptr) {
        S* grow = grads->w_in + static_cast<std::size_t>(p) * N;
        for (const auto& [idx, xv] : x[t].entries) grow[idx] += dup * xv;
        if constexpr (std::is_same_v<S, Dual>) {
          if (x[t].tangent != nullptr) {
            const double dv = value(dup);
            for (int i = 0; i < N; ++i) grow[i].t += dv * x[t].tangent[i];
          }
        }
        grads->b_in[p] += dup;
      }
      if (dx != nullptr) {
        const double* row = w.w_in + static_cast<std::size_t>(p) * N;
        S* dxt = (*dx)[t].data();
        for (int i = 0; i < N; ++i) dxt[i] += row[i] * dup;
      }
    }
    dh = dh_prev;
    dc = dc_prev;
  }
}

}  // namespace dpgraphgen::detail

#endif  // DPGRAPHGEN_DETAIL_NETS_HPP_
