// Copyright 2025 The dusc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUSC_CIRCUITS_HPP
#define DUSC_CIRCUITS_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dusc/common.hpp"
#include "dusc/rng.hpp"

namespace dusc {

/**
 * Parameters of w = e^{i phi} (u+ (x) u-) U[J] (v+ (x) v-).
 * u+ / v+ act on the left site of the bond.
 */
struct DUGateParams {
  double J = 0.0;
  double phi = 0.0;
  Mat2 u_plus = Mat2::Identity();
  Mat2 u_minus = Mat2::Identity();
  Mat2 v_plus = Mat2::Identity();
  Mat2 v_minus = Mat2::Identity();
};

// row = (out a, out b), column = (in a, in b), index 2*a + b
using TwoQubitGate = Mat4;

/**
 * U[J] = exp[-i (pi/4)(XX + YY) - i J ZZ].
 *
 * The two generators commute, so the exponential factorises: e^{-iJ} on
 * |00>, |11> and -i e^{iJ} times a swap on the {|01>, |10>} block.
 */
inline Mat4 build_core_gate(double J) {
  Mat4 g = Mat4::Zero();
  const cplx diag = std::exp(-I_ * J);
  const cplx off = -I_ * std::exp(I_ * J);
  g(0, 0) = diag;
  g(3, 3) = diag;
  g(1, 2) = off;
  g(2, 1) = off;
  return g;
}

inline double check_unitarity(const Mat4 &g) { return unitarity_defect(g); }

inline Mat4 kron2(const Mat2 &a, const Mat2 &b) {
  Mat4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k2 = 0; k2 < 2; ++k2)
        for (int l = 0; l < 2; ++l) k(2 * i + k2, 2 * j + l) = a(i, j) * b(k2, l);
  return k;
}

inline Mat4 compose_gate(const DUGateParams &p) {
  for (const Mat2 *u : {&p.u_plus, &p.u_minus, &p.v_plus, &p.v_minus}) {
    if (unitarity_defect(*u) > 1e-10)
      throw std::invalid_argument("compose_gate: single-qubit dressing is not unitary");
  }
  if (!std::isfinite(p.J) || !std::isfinite(p.phi))
    throw std::invalid_argument("compose_gate: J and phi must be finite");
  return std::exp(I_ * p.phi) * kron2(p.u_plus, p.u_minus) * build_core_gate(p.J) *
         kron2(p.v_plus, p.v_minus);
}

/** Space-time swap: w~[(i j),(k l)] = w[(i k),(j l)]. */
inline Mat4 dual_transpose(const Mat4 &g) {
  Mat4 d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) d(2 * i + j, 2 * k + l) = g(2 * i + k, 2 * j + l);
  return d;
}

inline double dual_unitarity_defect(const Mat4 &g) { return unitarity_defect(dual_transpose(g)); }

/** Haar unitary of dimension 2: Gram-Schmidt on a complex Ginibre matrix. */
inline Mat2 haar_u2(Rng &rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  Mat2 z;
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r) z(r, c) = cplx(nd(rng), nd(rng));
  Eigen::Vector2cd q0 = z.col(0) / z.col(0).norm();
  Eigen::Vector2cd q1 = z.col(1) - q0.dot(z.col(1)) * q0;
  q1 /= q1.norm();
  Mat2 q;
  q << q0, q1;
  return q;
}

inline DUGateParams sample_du_gate(double J, Rng &rng) {
  DUGateParams p;
  p.J = J;
  p.u_plus = haar_u2(rng);
  p.u_minus = haar_u2(rng);
  p.v_plus = haar_u2(rng);
  p.v_minus = haar_u2(rng);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * PI);
  p.phi = ud(rng);
  return p;
}

/** Bond s couples sites s and s % L + 1 (1-based, periodic). */
inline int bond_right(int s, int L) { return s % L + 1; }

struct GateSlot {
  int bond;   // 1..L
  int layer;  // 1..2t, in application order
};

/**
 * Gate occurrences of t Floquet periods in application order. Odd layers
 * (first within a period) hold the bonds (s, s+1) with s even, including
 * (L, 1); even layers hold (1,2), (3,4), ... With this order an even site
 * is first paired with its right neighbour, so the light ray from an even
 * site runs to i + 2t.
 */
inline std::vector<GateSlot> brickwork_schedule(int L, int t) {
  std::vector<GateSlot> out;
  out.reserve(static_cast<size_t>(L) * t);
  for (int tau = 1; tau <= 2 * t; ++tau)
    for (int s = 1; s <= L; ++s)
      if ((s % 2 == 0) == (tau % 2 == 1)) out.push_back({s, tau});
  return out;
}

/** Apply g on bits (ba, bb) of a state vector of nq qubits; ba is the gate's first index. */
inline void apply_gate(cplx *psi, int nq, const Mat4 &g, int ba, int bb) {
  const std::size_t ma = std::size_t(1) << ba, mb = std::size_t(1) << bb;
  const int lo = std::min(ba, bb), hi = std::max(ba, bb);
  const std::size_t lo_mask = (std::size_t(1) << lo) - 1, hi_mask = (std::size_t(1) << hi) - 1;
  // plain real arithmetic: std::complex operator* keeps a NaN-recovery path without -ffast-math
  double gr[16], gi[16];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      gr[4 * r + c] = g(r, c).real();
      gi[4 * r + c] = g(r, c).imag();
    }
  auto *d = reinterpret_cast<double *>(psi);
  const std::size_t groups = std::size_t(1) << (nq - 2);
  for (std::size_t k = 0; k < groups; ++k) {
    // k with zero bits inserted at lo, then hi
    std::size_t i = ((k & ~lo_mask) << 1) | (k & lo_mask);
    i = ((i & ~hi_mask) << 1) | (i & hi_mask);
    const std::size_t idx[4] = {i, i | mb, i | ma, i | ma | mb};
    double xr[4], xi[4];
    for (int m = 0; m < 4; ++m) {
      xr[m] = d[2 * idx[m]];
      xi[m] = d[2 * idx[m] + 1];
    }
    for (int r = 0; r < 4; ++r) {
      double yr = 0.0, yi = 0.0;
      for (int m = 0; m < 4; ++m) {
        yr += gr[4 * r + m] * xr[m] - gi[4 * r + m] * xi[m];
        yi += gr[4 * r + m] * xi[m] + gi[4 * r + m] * xr[m];
      }
      d[2 * idx[r]] = yr;
      d[2 * idx[r] + 1] = yi;
    }
  }
}

/** Left-multiply every column of M by g acting on bits (ba, bb). */
inline void apply_gate_columns(MatX &m, int nq, const Mat4 &g, int ba, int bb) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) apply_gate(m.col(c).data(), nq, g, ba, bb);
}

struct PlacedGate {
  const Mat4 *gate;
  int ba, bb;
};

/** Left-multiply M by a gate sequence, column by column so each column stays in cache. */
inline void apply_sequence_columns(MatX &m, int nq, const std::vector<PlacedGate> &seq) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (const PlacedGate &p : seq) apply_gate(m.col(c).data(), nq, *p.gate, p.ba, p.bb);
}

struct FloquetOperator {
  int L = 0;
  std::vector<Mat4> gates;  // gates[s-1] sits on bond s
  MatX matrix;              // U_F, 2^L x 2^L
};

inline void check_ring_size(int L) {
  if (L < 4 || L % 2 != 0)
    throw ConfigError("L must be even and >= 4, got " + std::to_string(L));
}

inline std::vector<Mat4> sample_circuit_gates(double J, int L, Rng &rng) {
  check_ring_size(L);
  std::vector<Mat4> gates;
  gates.reserve(L);
  for (int s = 1; s <= L; ++s) gates.push_back(compose_gate(sample_du_gate(J, rng)));
  return gates;
}

/** Dense U_F from per-bond gates; first layer is the even-s bonds. */
inline FloquetOperator floquet_from_gates(int L, std::vector<Mat4> gates, int max_dense_L = 12) {
  check_ring_size(L);
  if (static_cast<int>(gates.size()) != L) throw ConfigError("need one gate per bond");
  if (L > max_dense_L)
    throw BudgetError("dense U_F needs 2^" + std::to_string(2 * L) + " amplitudes; cap is L=" +
                      std::to_string(max_dense_L));
  FloquetOperator U;
  U.L = L;
  U.gates = std::move(gates);
  const Eigen::Index dim = Eigen::Index(1) << L;
  U.matrix = MatX::Identity(dim, dim);
  std::vector<PlacedGate> seq;
  for (const GateSlot &g : brickwork_schedule(L, 1))
    seq.push_back({&U.gates[g.bond - 1], site_bit(g.bond), site_bit(bond_right(g.bond, L))});
  apply_sequence_columns(U.matrix, L, seq);
  return U;
}

inline FloquetOperator build_floquet(double J, int L, Rng &rng, int max_dense_L = 12) {
  check_ring_size(L);
  if (L > max_dense_L)
    throw BudgetError("dense U_F capped at L=" + std::to_string(max_dense_L));
  return floquet_from_gates(L, sample_circuit_gates(J, L, rng), max_dense_L);
}

inline MatX floquet_power(const FloquetOperator &U, int t) {
  const Eigen::Index dim = U.matrix.rows();
  MatX r = MatX::Identity(dim, dim);
  for (int k = 0; k < t; ++k) r = U.matrix * r;
  return r;
}

}  // namespace dusc

#endif  // DUSC_CIRCUITS_HPP
