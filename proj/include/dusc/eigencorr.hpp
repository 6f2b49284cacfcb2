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

#ifndef DUSC_EIGENCORR_HPP
#define DUSC_EIGENCORR_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dusc/circuits.hpp"
#include "dusc/common.hpp"
#include "dusc/opent.hpp"

namespace dusc {

/** U_F |alpha> = e^{-i theta_alpha} |alpha>, phases ascending in (-pi, pi]. */
struct EigenData {
  int L = 0;
  RVecX phases;
  MatX vectors;  // column alpha
  double residual = 0.0;
  double orthonormality = 0.0;
};

inline EigenData diagonalize_matrix(const MatX &U, int L, double tol = 1e-8) {
  // Schur vectors of a normal matrix are an orthonormal eigenbasis, which
  // also settles degenerate blocks.
  Eigen::ComplexSchur<MatX> cs(U);
  const MatX &T = cs.matrixT();
  const MatX &Q = cs.matrixU();
  const Eigen::Index n = U.rows();
  std::vector<double> th(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double x = -std::arg(T(a, a));
    if (x <= -PI) x += 2.0 * PI;
    th[a] = x;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return th[a] < th[b]; });
  EigenData e;
  e.L = L;
  e.phases.resize(n);
  e.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    e.phases(k) = th[order[k]];
    e.vectors.col(k) = Q.col(order[k]);
  }
  double res = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    VecX r = U * e.vectors.col(k) - std::exp(-I_ * e.phases(k)) * e.vectors.col(k);
    res = std::max(res, r.norm());
  }
  e.residual = res;
  e.orthonormality = unitarity_defect(e.vectors.adjoint());
  if (res > tol || e.orthonormality > tol)
    throw std::runtime_error("diagonalize: residual " + std::to_string(res) +
                             ", orthonormality defect " + std::to_string(e.orthonormality));
  return e;
}

inline EigenData diagonalize(const FloquetOperator &U, double tol = 1e-8) {
  return diagonalize_matrix(U.matrix, U.L, tol);
}

namespace detail {

/** Eigenvector alpha as a d_X x d_Xbar matrix. */
inline MatX split_vector(const VecX &v, int L, std::uint64_t maskX) {
  const int nx = std::popcount(maskX);
  const std::uint64_t full = (std::uint64_t(1) << L) - 1;
  const BitGather gx(maskX, L), gy(full & ~maskX, L);
  MatX A(Eigen::Index(1) << nx, Eigen::Index(1) << (L - nx));
  for (std::uint64_t k = 0; k <= full; ++k) A(gx(k), gy(k)) = v(static_cast<Eigen::Index>(k));
  return A;
}

inline std::uint64_t sites_to_mask(const std::vector<int> &sites, int L) {
  std::uint64_t m = 0;
  for (int s : sites) {
    if (s < 1 || s > L) throw ConfigError("site index out of range");
    m |= std::uint64_t(1) << site_bit(s);
  }
  return m;
}

}  // namespace detail

/** V^X_{abcl} = Tr(A B^dag D C^dag) with A..D the split eigenvectors a, b, c, l. */
inline cplx quartet_v(const EigenData &e, int a, int b, int c, int l, const std::vector<int> &X) {
  const Eigen::Index n = e.vectors.cols();
  for (int k : {a, b, c, l})
    if (k < 0 || k >= n) throw std::out_of_range("quartet_v: eigenvector index");
  const std::uint64_t m = detail::sites_to_mask(X, e.L);
  const MatX A = detail::split_vector(e.vectors.col(a), e.L, m);
  const MatX B = detail::split_vector(e.vectors.col(b), e.L, m);
  const MatX C = detail::split_vector(e.vectors.col(c), e.L, m);
  const MatX D = detail::split_vector(e.vectors.col(l), e.L, m);
  return (A * B.adjoint() * D * C.adjoint()).trace();
}

inline double quartet_phase(const EigenData &e, int a, int b, int c, int l) {
  return e.phases(a) - e.phases(b) - e.phases(c) + e.phases(l);
}

/**
 * V^X in factored form, V(p, q) = sum_k A(p, k) B(q, k). When X is the
 * smaller side the pairs are p = (a, b), q = (l, c) with P_ab = A_a A_b^dag;
 * otherwise they are p = (b, l), q = (c, a) with R_bl = A_b^dag A_l, and
 * V_abcl = Tr(R_bl R_ca). Rank is min(d_X, d_Xbar)^2.
 */
struct QuartetFactor {
  bool ab_pairs = true;
  MatX A, B;
};

inline QuartetFactor quartet_factor(const EigenData &e, const std::vector<int> &X) {
  const int L = e.L;
  const Eigen::Index N = e.vectors.cols();
  const std::uint64_t m = detail::sites_to_mask(X, L);
  std::vector<MatX> S(N);
  for (Eigen::Index a = 0; a < N; ++a) S[a] = detail::split_vector(e.vectors.col(a), L, m);
  QuartetFactor f;
  f.ab_pairs = S[0].rows() <= S[0].cols();
  const Eigen::Index d = f.ab_pairs ? S[0].rows() : S[0].cols();
  f.A.resize(N * N, d * d);
  f.B.resize(N * N, d * d);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) {
      const MatX P = f.ab_pairs ? MatX(S[a] * S[b].adjoint()) : MatX(S[a].adjoint() * S[b]);
      const Eigen::Index p = a * N + b;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          f.A(p, i * d + j) = P(i, j);
          f.B(p, i * d + j) = P(j, i);
        }
    }
  return f;
}

/** All V^X as an N^2 x N^2 matrix, row (a, b) = a*N + b, column (l, c) = l*N + c. */
inline MatX quartet_tensor(const EigenData &e, const std::vector<int> &X) {
  const Eigen::Index N = e.vectors.cols();
  const QuartetFactor f = quartet_factor(e, X);
  MatX G = f.A * f.B.transpose();
  if (f.ab_pairs) return G;
  MatX V(N * N, N * N);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b)
      for (Eigen::Index l = 0; l < N; ++l)
        for (Eigen::Index c = 0; c < N; ++c) V(a * N + b, l * N + c) = G(b * N + l, c * N + a);
  return V;
}

struct QuartetOptions {
  int max_L = 6;
};

/**
 * F^{XY}(t) = sum e^{i t theta_{abcl}} V^X_{abcl} conj(V^Y_{abcl}), for each t
 * in `ts`. Complex so callers can check reality.
 *
 * Both factors in the same pairing: the phase splits over the two pair
 * indices, e^{it(theta_x - theta_y)} for (a, b) and (l, c) pairs and
 * e^{it(theta_y - theta_x)} for (b, l) and (c, a), so the sum is
 * sum_{k,m} (A_X^T W conj A_Y)_{km} (B_X^T W conj B_Y)_{km}.
 */
inline std::vector<cplx> f_xy_quartet_series(const EigenData &e, const std::vector<int> &X,
                                             const std::vector<int> &Y, const std::vector<int> &ts,
                                             const QuartetOptions &opt = {}) {
  if (e.L > opt.max_L)
    throw BudgetError("quartet sum over 2^" + std::to_string(4 * e.L) + " terms; cap is L=" +
                      std::to_string(opt.max_L));
  const Eigen::Index N = e.vectors.cols();
  const QuartetFactor fx = quartet_factor(e, X);
  QuartetFactor fy = quartet_factor(e, Y);
  std::vector<cplx> out;
  if (fx.ab_pairs == fy.ab_pairs) {
    const MatX Ay = fy.A.conjugate(), By = fy.B.conjugate();
    const double sgn = fx.ab_pairs ? 1.0 : -1.0;
    for (int t : ts) {
      VecX w(N * N);
      for (Eigen::Index a = 0; a < N; ++a)
        for (Eigen::Index b = 0; b < N; ++b)
          w(a * N + b) = std::exp(sgn * I_ * double(t) * (e.phases(a) - e.phases(b)));
      const MatX M1 = fx.A.transpose() * w.asDiagonal() * Ay;
      const MatX M2 = fx.B.transpose() * w.asDiagonal() * By;
      out.push_back(M1.cwiseProduct(M2).sum());
    }
    return out;
  }
  // mixed pairings: expand both to (a, b) x (l, c)
  const MatX VX = quartet_tensor(e, X);
  const MatX VY = quartet_tensor(e, Y);
  for (int t : ts) {
    VecX w(N * N);
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = 0; b < N; ++b)
        w(a * N + b) = std::exp(I_ * double(t) * (e.phases(a) - e.phases(b)));
    cplx acc = 0.0;
    for (Eigen::Index q = 0; q < N * N; ++q) {
      cplx col = 0.0;
      for (Eigen::Index p = 0; p < N * N; ++p) col += w(p) * VX(p, q) * std::conj(VY(p, q));
      acc += w(q) * col;  // q = (l, c)
    }
    out.push_back(acc);
  }
  return out;
}

inline double f_xy_quartet(const EigenData &e, const std::vector<int> &X, const std::vector<int> &Y,
                           int t, const QuartetOptions &opt = {}) {
  return f_xy_quartet_series(e, X, Y, {t}, opt).front().real();
}

enum class Taper { None, Hann };

/**
 * Finite-T regularisation of the frequency-domain correlation: unitary DFT
 * c_k = T^{-1/2} sum_t w_t F(t) e^{+i omega_k t}, omega_k = 2 pi k / T folded
 * into (-pi, pi]. The density estimate is sqrt(T)/(2 pi) c_k; the delta(omega)
 * part of a constant offset collapses into the k = 0 bin.
 */
struct Spectrum {
  std::vector<double> omega;
  std::vector<cplx> coeff;
  std::string normalization = "unitary DFT, c_k = T^-1/2 sum_t F(t) exp(+i w_k t); density = sqrt(T)/(2 pi) c_k";

  std::vector<double> magnitude() const {
    std::vector<double> m;
    for (const cplx &c : coeff) m.push_back(std::abs(c));
    return m;
  }
  cplx density(std::size_t k) const {
    return std::sqrt(double(coeff.size())) / (2.0 * PI) * coeff[k];
  }
};

inline Spectrum f_spectral(const std::vector<double> &series, Taper taper = Taper::None) {
  const std::size_t T = series.size();
  if (T == 0) throw ConfigError("f_spectral: empty series");
  if (T < 4) throw ConfigError("f_spectral: need at least 4 time points");
  Spectrum s;
  for (std::size_t k = 0; k < T; ++k) {
    double w = 2.0 * PI * double(k) / double(T);
    if (w > PI) w -= 2.0 * PI;
    cplx acc = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      double win = 1.0;
      if (taper == Taper::Hann) win = 0.5 - 0.5 * std::cos(2.0 * PI * double(t) / double(T));
      acc += win * series[t] * std::exp(I_ * w * double(t));
    }
    s.omega.push_back(w);
    s.coeff.push_back(acc / std::sqrt(double(T)));
  }
  return s;
}

}  // namespace dusc

#endif  // DUSC_EIGENCORR_HPP
