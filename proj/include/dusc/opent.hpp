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

#ifndef DUSC_OPENT_HPP
#define DUSC_OPENT_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "dusc/circuits.hpp"
#include "dusc/common.hpp"

namespace dusc {

enum class Layer { Input, Output };

/** Sites (1-based) on one layer of the doubled lattice. */
struct SubsystemSpec {
  std::vector<int> sites;
  Layer layer = Layer::Input;
};

inline SubsystemSpec input_sites(std::vector<int> s) { return {std::move(s), Layer::Input}; }
inline SubsystemSpec output_sites(std::vector<int> s) { return {std::move(s), Layer::Output}; }

inline std::vector<int> complement_sites(const std::vector<int> &sites, int L) {
  std::vector<char> in(L + 1, 0);
  for (int s : sites) in[s] = 1;
  std::vector<int> out;
  for (int s = 1; s <= L; ++s)
    if (!in[s]) out.push_back(s);
  return out;
}

/**
 * |U_t> = U_t / 2^{L/2}, amplitude index (i_t << L) | i_0. On the doubled
 * lattice input site i is bit i-1 and output site i is bit L+i-1.
 */
struct DoubledState {
  int L = 0;
  int t = 0;
  VecX amplitudes;
};

inline DoubledState doubled_state_from_matrix(const MatX &Ut, int L, int t = 0) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  if (Ut.rows() != dim || Ut.cols() != dim) throw ConfigError("doubled_state: size mismatch");
  if (2 * L > 26) throw BudgetError("doubled state beyond 2^26 amplitudes");
  DoubledState s;
  s.L = L;
  s.t = t;
  s.amplitudes.resize(dim * dim);
  const double norm = std::pow(2.0, -0.5 * L);
  for (Eigen::Index i0 = 0; i0 < dim; ++i0)
    for (Eigen::Index it = 0; it < dim; ++it) s.amplitudes(it * dim + i0) = Ut(it, i0) * norm;
  return s;
}

inline DoubledState doubled_state(const FloquetOperator &U, int t) {
  if (t < 0) throw ConfigError("t must be >= 0");
  return doubled_state_from_matrix(floquet_power(U, t), U.L, t);
}

namespace detail {

// Bits of `k` selected by `mask`, packed to the low end. Two 13-bit tables
// cover up to 26 bits.
struct BitGather {
  std::vector<std::uint32_t> lo, hi;
  BitGather(std::uint64_t mask, int nbits) : lo(1u << 13), hi(1u << 13) {
    for (std::uint32_t v = 0; v < (1u << 13); ++v) {
      lo[v] = gather(v, mask, 0, nbits);
      hi[v] = gather(v, mask, 13, nbits);
    }
  }
  static std::uint32_t gather(std::uint32_t v, std::uint64_t mask, int offset, int nbits) {
    std::uint32_t out = 0;
    int pos = std::popcount(mask & ((std::uint64_t(1) << offset) - 1));
    for (int b = 0; b < 13 && offset + b < nbits; ++b) {
      if (!((mask >> (offset + b)) & 1)) continue;
      if ((v >> b) & 1) out |= (1u << pos);
      ++pos;
    }
    return out;
  }
  std::uint32_t operator()(std::uint64_t k) const {
    return lo[k & 0x1fff] | hi[(k >> 13) & 0x1fff];
  }
};

}  // namespace detail

/** Tr rho_A^2 of a pure state on nbits qubits; A given as a bit mask. */
inline double purity_bits(const VecX &amp, int nbits, std::uint64_t maskA) {
  if (nbits > 26) throw BudgetError("purity: more than 26 qubits");
  const std::uint64_t full = (nbits == 64) ? ~0ULL : ((std::uint64_t(1) << nbits) - 1);
  maskA &= full;
  const int a = std::popcount(maskA);
  if (a == 0 || a == nbits) return amp.squaredNorm() * amp.squaredNorm();
  // rows on the smaller side keep the Gram matrix small
  const std::uint64_t rmask = (2 * a <= nbits) ? maskA : (full & ~maskA);
  const std::uint64_t cmask = full & ~rmask;
  const int nr = std::popcount(rmask), nc = nbits - nr;
  const detail::BitGather gr(rmask, nbits), gc(cmask, nbits);
  MatX M(Eigen::Index(1) << nr, Eigen::Index(1) << nc);
  const std::uint64_t n = std::uint64_t(1) << nbits;
  for (std::uint64_t k = 0; k < n; ++k) M(gr(k), gc(k)) = amp(static_cast<Eigen::Index>(k));
  MatX G = M * M.adjoint();
  return G.squaredNorm();
}

inline std::uint64_t doubled_mask(const std::vector<SubsystemSpec> &A, int L) {
  std::uint64_t m = 0;
  for (const auto &spec : A)
    for (int s : spec.sites) {
      if (s < 1 || s > L) throw ConfigError("site index out of range");
      m |= std::uint64_t(1) << (site_bit(s) + (spec.layer == Layer::Output ? L : 0));
    }
  return m;
}

inline double purity(const DoubledState &s, const std::vector<SubsystemSpec> &A) {
  return purity_bits(s.amplitudes, 2 * s.L, doubled_mask(A, s.L));
}

inline double renyi2(const DoubledState &s, const std::vector<SubsystemSpec> &A) {
  return -std::log(purity(s, A));
}

/** I2 with S2^X, S2^Y replaced by their exact values |X| ln 2, |Y| ln 2. */
inline double opmi(const DoubledState &s, const SubsystemSpec &X, const SubsystemSpec &Y) {
  const double ln2 = std::log(2.0);
  return (X.sites.size() + Y.sites.size()) * ln2 + std::log(purity(s, {X, Y}));
}

/** F = 2^{2L-|X|-|Y|} exp(I2); equals 4^L Tr rho^2 of X u Y. */
inline double f_from_purity(const DoubledState &s, const SubsystemSpec &X, const SubsystemSpec &Y) {
  const double e =
      2.0 * s.L - static_cast<double>(X.sites.size()) - static_cast<double>(Y.sites.size());
  return std::pow(2.0, e) * std::exp(opmi(s, X, Y));
}

/** I2^{X Ybar}(U_t) - I2^{X Ybar}(U_0); X on the input layer, Y on the output layer. */
inline double delta_opmi_xybar(const FloquetOperator &U, int t, const std::vector<int> &X,
                               const std::vector<int> &Y) {
  const SubsystemSpec xs = input_sites(X), ybar = output_sites(complement_sites(Y, U.L));
  const DoubledState st = doubled_state(U, t);
  const DoubledState s0 = doubled_state(U, 0);
  return opmi(st, xs, ybar) - opmi(s0, xs, ybar);
}

// ---------------------------------------------------------------------------
// Production route. F(in, out) = 4^L Tr rho_A^2 where A collects the input
// sites marked in `in_sw` and the output sites marked in `out_sw`. In the
// four-copy picture these are swap caps, the rest identity caps. A gate fed
// equal caps on both legs is the identity on them (unitarity), which peels
// gates off from below and from above. What is left splits into connected
// clusters, each evaluated as a small Choi purity.
// ---------------------------------------------------------------------------

struct ReducedNetwork {
  std::vector<GateSlot> kept;                 // application order
  std::vector<std::vector<int>> components;   // sites of each cluster
  std::vector<std::vector<GateSlot>> comp_gates;
  double scalar = 1.0;                        // sites touched by no kept gate
};

inline ReducedNetwork reduce_network(int L, int t, const std::vector<char> &in_sw,
                                     const std::vector<char> &out_sw) {
  const auto sched = brickwork_schedule(L, t);
  std::vector<char> status(sched.size(), 0);  // 0 kept, 1 below, 2 above
  std::vector<int> val(L + 1);
  for (int s = 1; s <= L; ++s) val[s] = in_sw[s - 1];
  for (std::size_t k = 0; k < sched.size(); ++k) {
    const int a = sched[k].bond, b = bond_right(a, L);
    if (val[a] >= 0 && val[a] == val[b])
      status[k] = 1;
    else
      val[a] = val[b] = -1;
  }
  for (int s = 1; s <= L; ++s) val[s] = out_sw[s - 1];
  for (std::size_t k = sched.size(); k-- > 0;) {
    if (status[k]) continue;
    const int a = sched[k].bond, b = bond_right(a, L);
    if (val[a] >= 0 && val[a] == val[b])
      status[k] = 2;
    else
      val[a] = val[b] = -1;
  }
  ReducedNetwork net;
  std::vector<int> parent(L + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> touched(L + 1, 0);
  for (std::size_t k = 0; k < sched.size(); ++k) {
    if (status[k]) continue;
    net.kept.push_back(sched[k]);
    const int a = sched[k].bond, b = bond_right(a, L);
    touched[a] = touched[b] = 1;
    parent[find(a)] = find(b);
  }
  std::vector<int> root_index(L + 1, -1);
  for (int s = 1; s <= L; ++s) {
    if (!touched[s]) {
      net.scalar *= (in_sw[s - 1] == out_sw[s - 1]) ? 4.0 : 2.0;
      continue;
    }
    const int r = find(s);
    if (root_index[r] < 0) {
      root_index[r] = static_cast<int>(net.components.size());
      net.components.emplace_back();
      net.comp_gates.emplace_back();
    }
    net.components[root_index[r]].push_back(s);
  }
  for (const GateSlot &g : net.kept) net.comp_gates[root_index[find(g.bond)]].push_back(g);
  return net;
}

struct PatternRouteOptions {
  int max_component_sites = 12;
};

/** 4^L Tr rho_A^2 for one circuit instance, evaluated on the reduced network. */
inline double pattern_F(const std::vector<Mat4> &gates, int L, int t,
                        const std::vector<char> &in_sw, const std::vector<char> &out_sw,
                        const PatternRouteOptions &opt = {}) {
  const ReducedNetwork net = reduce_network(L, t, in_sw, out_sw);
  double F = net.scalar;
  for (std::size_t c = 0; c < net.components.size(); ++c) {
    const auto &sites = net.components[c];
    const int n = static_cast<int>(sites.size());
    if (n > opt.max_component_sites)
      throw BudgetError("reduced cluster of " + std::to_string(n) + " sites exceeds cap " +
                        std::to_string(opt.max_component_sites));
    std::vector<int> local(L + 1, -1);
    for (int i = 0; i < n; ++i) local[sites[i]] = i;
    const Eigen::Index dim = Eigen::Index(1) << n;
    MatX Uc = MatX::Identity(dim, dim);
    std::vector<PlacedGate> seq;
    for (const GateSlot &g : net.comp_gates[c])
      seq.push_back({&gates[g.bond - 1], local[g.bond], local[bond_right(g.bond, L)]});
    apply_sequence_columns(Uc, n, seq);
    std::uint64_t mask = 0;
    for (int i = 0; i < n; ++i) {
      if (in_sw[sites[i] - 1]) mask |= std::uint64_t(1) << i;
      if (out_sw[sites[i] - 1]) mask |= std::uint64_t(1) << (n + i);
    }
    const DoubledState st = doubled_state_from_matrix(Uc, n);
    F *= std::pow(4.0, n) * purity_bits(st.amplitudes, 2 * n, mask);
  }
  return F;
}

inline std::vector<char> site_mask(const std::vector<int> &sites, int L, char on = 1) {
  std::vector<char> m(L, static_cast<char>(!on));
  for (int s : sites) m[s - 1] = on;
  return m;
}

/** F^{XY}(t): X on the input layer, Y on the output layer. */
inline double fxy_fast(const std::vector<Mat4> &gates, int L, int t, const std::vector<int> &X,
                       const std::vector<int> &Y, const PatternRouteOptions &opt = {}) {
  return pattern_F(gates, L, t, site_mask(X, L), site_mask(Y, L), opt);
}

/** F^{X Ybar}(t). */
inline double fxybar_fast(const std::vector<Mat4> &gates, int L, int t, const std::vector<int> &X,
                          const std::vector<int> &Y, const PatternRouteOptions &opt = {}) {
  return pattern_F(gates, L, t, site_mask(X, L), site_mask(Y, L, 0), opt);
}

}  // namespace dusc

#endif  // DUSC_OPENT_HPP
