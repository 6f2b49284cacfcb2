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

#ifndef DUSC_REPLICA_HPP
#define DUSC_REPLICA_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dusc/common.hpp"

namespace dusc {

// ---------------------------------------------------------------------------
// Folded legs. One leg carries four copies ordered (U, U*, U, U*); the
// composite index is ((s1*2 + s2)*2 + s3)*2 + s4. A group of n stacked legs
// is indexed leg-major: leg 0 in the most significant nibble.
// ---------------------------------------------------------------------------

inline int copy_bit(int leg_index, int copy) { return (leg_index >> (3 - copy)) & 1; }

/** delta_{s1 s2} delta_{s3 s4}: the "identity" end cap, loop value 4 with itself. */
inline RVecX pattern_id() {
  RVecX v = RVecX::Zero(16);
  for (int k = 0; k < 16; ++k)
    v(k) = (copy_bit(k, 0) == copy_bit(k, 1) && copy_bit(k, 2) == copy_bit(k, 3)) ? 1.0 : 0.0;
  return v;
}

/** delta_{s1 s4} delta_{s2 s3}: the "swap" end cap; overlaps id with value 2. */
inline RVecX pattern_sw() {
  RVecX v = RVecX::Zero(16);
  for (int k = 0; k < 16; ++k)
    v(k) = (copy_bit(k, 0) == copy_bit(k, 3) && copy_bit(k, 1) == copy_bit(k, 2)) ? 1.0 : 0.0;
  return v;
}

/**
 * E[u (x) u* (x) u (x) u*] for Haar u in U(2): sum over pattern pairs with
 * second-moment Weingarten weights 1/3 (equal) and -1/6 (different).
 */
inline RMatX haar_twirl_single() {
  RMatX P(16, 2);
  P.col(0) = pattern_id();
  P.col(1) = pattern_sw();
  RMatX W(2, 2);
  W << 1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0;
  return P * W * P.transpose();
}

/**
 * Orthonormal basis of the pairing vectors on n stacked legs (the range of
 * the n-fold moment projector). (2n)! pairings, linearly dependent for
 * n >= 2; rank 2 for n = 1 and 14 for n = 2.
 */
inline RMatX moment_basis(int n) {
  if (n < 1 || n > 2) throw BudgetError("moment basis implemented for 1 or 2 stacked legs");
  const int slots = 2 * n;  // u slots per group; as many u* slots
  const int bits = 4 * n;
  std::vector<int> perm(slots);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RVecX> vecs;
  do {
    RVecX v = RVecX::Zero(Eigen::Index(1) << bits);
    for (int a = 0; a < (1 << slots); ++a) {
      // u slot i is (leg i/2, copy 2*(i%2)); u* slot is copy 2*(i%2)+1
      int idx[8] = {0};
      for (int i = 0; i < slots; ++i) {
        const int b = (a >> i) & 1;
        idx[(i / 2) * 4 + 2 * (i % 2)] = b;
        const int j = perm[i];
        idx[(j / 2) * 4 + 2 * (j % 2) + 1] = b;
      }
      int k = 0;
      for (int s = 0; s < bits; ++s) k = 2 * k + idx[s];
      v(k) = 1.0;
    }
    vecs.push_back(v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  RMatX V(Eigen::Index(1) << bits, Eigen::Index(vecs.size()));
  for (std::size_t c = 0; c < vecs.size(); ++c) V.col(Eigen::Index(c)) = vecs[c];
  Eigen::SelfAdjointEigenSolver<RMatX> es(V.transpose() * V);
  const RVecX &ev = es.eigenvalues();
  const double cut = 1e-9 * ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cut) keep.push_back(k);
  RMatX Q(V.rows(), Eigen::Index(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    Q.col(Eigen::Index(c)) = V * es.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
  return Q;
}

inline RMatX moment_projector(int n) {
  const RMatX Q = moment_basis(n);
  return Q * Q.transpose();
}

/**
 * The folded core gate is a phased swap: (Lin, Rin) = (C, D) goes to
 * (Lout, Rout) = (D, C) with weight phi(C, D). Per copy the amplitude is
 * e^{-iJ} when the two input bits agree and -i e^{iJ} otherwise,
 * conjugated on the u* copies.
 */
inline cplx folded_core_phase(int C, int D, double J) {
  const cplx eq = std::exp(-I_ * J), ne = -I_ * std::exp(I_ * J);
  cplx ph = 1.0;
  for (int c = 0; c < 4; ++c) {
    const cplx f = copy_bit(C, c) == copy_bit(D, c) ? eq : ne;
    ph *= (c % 2 == 0) ? f : std::conj(f);
  }
  return ph;
}

/** Folded core gate as a dense 256 x 256 map, rows (Lout, Rout), columns (Lin, Rin). */
inline MatX fold_core(double J) {
  MatX g = MatX::Zero(256, 256);
  for (int C = 0; C < 16; ++C)
    for (int D = 0; D < 16; ++D) g(D * 16 + C, C * 16 + D) = folded_core_phase(C, D, J);
  return g;
}

// ---------------------------------------------------------------------------
// Transfer matrices
// ---------------------------------------------------------------------------

enum class TMKind { T1, T2, T3 };

inline std::string to_string(TMKind k) {
  switch (k) {
    case TMKind::T1:
      return "T1";
    case TMKind::T2:
      return "T2";
    case TMKind::T3:
      return "T3";
  }
  return "?";
}

struct TransferMatrix {
  TMKind kind = TMKind::T1;
  double J = 0.0;
  int d = 0;
  RMatX matrix;       // rows: outgoing legs, columns: incoming legs
  RMatX range_basis;  // orthonormal columns spanning a superset of range(T)
  RVecX left, right;  // boundary vectors
  int power_offset = 0;  // value(t) uses T^{2t + power_offset}
  double discarded_imag = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
  int legs() const { return 2 * std::abs(d) + 1; }

  /** Boundary prefactor in value(t) = prefactor(t) * r . T^{2t+offset} . l. */
  double prefactor(int t) const {
    if (d == 0) return std::pow(4.0, -2.0 * t);
    if (kind == TMKind::T2) return std::pow(2.0, -2.0 * t - 1.0);
    return std::pow(2.0, -4.0 * t + 2.0 * std::abs(d));
  }

  /**
   * T1 and T3 at d = 0: F^{XY}/4^{L-1} (local) or <exp I2^{XY}> (macro).
   * T2: F^{X Ybar}/2^L. T3, d < 0: <exp I2^{XY}> for macroscopic X, Y.
   */
  double value(int t) const {
    const int m = 2 * t + power_offset;
    if (m < 0) throw ConfigError("transfer value needs t >= " + std::to_string(-power_offset / 2));
    RVecX v = left;
    for (int k = 0; k < m; ++k) v = matrix * v;
    return prefactor(t) * right.dot(v);
  }
};

/** Closed-form T1: Lin -> Rout with Lout and Rin capped by the identity pattern. */
inline RMatX t1_closed_form(double J) {
  const RVecX id = pattern_id(), sw = pattern_sw();
  const double s = std::pow(std::sin(2.0 * J), 2);
  return (10.0 + 2.0 * s) / 9.0 * id * id.transpose() -
         2.0 * (1.0 + 2.0 * s) / 9.0 * (id * sw.transpose() + sw * id.transpose()) +
         4.0 * (1.0 + 2.0 * s) / 9.0 * sw * sw.transpose();
}

namespace detail {

/** Averaged single gate with Lin/Lout caps: (Rout, Rin) matrix. */
inline RMatX left_end_gate(double J, const RVecX &cap_lin, const RVecX &cap_lout, double &imag) {
  const RMatX P1 = moment_projector(1);
  MatX core(16, 16);  // core(C, D)
  for (int C = 0; C < 16; ++C)
    for (int D = 0; D < 16; ++D) core(C, D) = folded_core_phase(C, D, J) * cap_lin(C) * cap_lout(D);
  const MatX g = P1.cast<cplx>() * core * P1.cast<cplx>().transpose();
  imag = std::max(imag, g.imag().cwiseAbs().maxCoeff());
  return g.real();
}

/** Averaged single gate with Rout/Rin caps: (Lin, Lout) matrix. */
inline RMatX right_end_gate(double J, const RVecX &cap_rout, const RVecX &cap_rin, double &imag) {
  return left_end_gate(J, cap_rout, cap_rin, imag);
}

/**
 * Stack of n identical averaged gates on one bond with Lout_n and Rin_1
 * capped. Legs: rows (Rout_1..n, Rin_2..n), columns (Lin_1..n, Lout_1..n-1).
 */
inline RMatX stacked_transfer(double J, int n, const RVecX &cap_lout, const RVecX &cap_rin,
                              double &imag) {
  const RMatX Q = moment_basis(n);
  const RMatX P = Q * Q.transpose();
  const Eigen::Index D = Q.rows();  // 16^n
  const int free = (n == 1) ? 1 : 16;
  // Capped groups: Pl(a, y) = sum_b P((a, b), y) cap(b), Pr(h, y) = sum_g P((g, h), y) cap(g)
  RMatX Pl(free, D), Pr(free, D);
  if (n == 1) {
    Pl.row(0) = cap_lout.transpose();
    Pr.row(0) = cap_rin.transpose();
  } else {
    Pl.setZero();
    Pr.setZero();
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) {
        Pl.row(a) += cap_lout(b) * P.row(a * 16 + b);
        Pr.row(a) += cap_rin(b) * P.row(b * 16 + a);
      }
  }
  // Phi(x, y): x = inner Lin (= Rout) group, y = inner Rin (= Lout) group
  MatX Phi(D, D);
  for (Eigen::Index x = 0; x < D; ++x)
    for (Eigen::Index y = 0; y < D; ++y) {
      cplx ph = 1.0;
      for (int k = 0; k < n; ++k) {
        const int sh = 4 * (n - 1 - k);
        ph *= folded_core_phase(int((x >> sh) & 15), int((y >> sh) & 15), J);
      }
      Phi(x, y) = ph;
    }
  const Eigen::Index dim = D * free;
  RMatX T(dim, dim);
  const MatX Qc = Q.cast<cplx>();
  for (int h = 0; h < free; ++h)
    for (int a = 0; a < free; ++a) {
      const RVecX pa = Pr.row(h).cwiseProduct(Pl.row(a)).transpose();
      const VecX w = Phi * pa.cast<cplx>();
      const MatX M = Qc.transpose() * w.asDiagonal() * Qc;
      const MatX blk = Qc * M * Qc.transpose();  // rows (Rout group), cols (Lin group)
      imag = std::max(imag, blk.imag().cwiseAbs().maxCoeff());
      for (Eigen::Index r = 0; r < D; ++r)
        for (Eigen::Index c = 0; c < D; ++c) T(r * free + h, c * free + a) = blk(r, c).real();
    }
  return T;
}

inline RMatX kron_basis(const RMatX &a, const RMatX &b) {
  RMatX k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

inline void check_ribbon(int d) {
  if (d > 0) throw ConfigError("transfer matrices are built for d <= 0");
  if (-d >= 2)
    throw BudgetError("ribbon width |d|+1 = " + std::to_string(1 - d) +
                      " is beyond the dense budget (|d| <= 1)");
}

}  // namespace detail

/** Lin -> Rout, Lout and Rin capped by the identity pattern, via the Haar twirl. */
inline TransferMatrix build_t1(double J) {
  TransferMatrix T;
  T.kind = TMKind::T1;
  T.J = J;
  T.d = 0;
  T.matrix = detail::stacked_transfer(J, 1, pattern_id(), pattern_id(), T.discarded_imag);
  T.range_basis = moment_basis(1);
  T.left = pattern_sw();
  T.right = pattern_sw();
  return T;
}

/** Local F^{X Ybar} ribbon, d = -1. Lout_n capped by swap, Rin_1 by identity. */
inline TransferMatrix build_t2(double J, int d) {
  if (d == 0) throw ConfigError("T2 at d = 0 is trivial: F^{X Ybar} = 2^L");
  detail::check_ribbon(d);
  const int n = 1 - d;
  const RVecX id = pattern_id(), sw = pattern_sw();
  TransferMatrix T;
  T.kind = TMKind::T2;
  T.J = J;
  T.d = d;
  T.matrix = detail::stacked_transfer(J, n, sw, id, T.discarded_imag);
  T.range_basis = detail::kron_basis(moment_basis(n), moment_basis(1));
  const RMatX g = detail::left_end_gate(J, id, sw, T.discarded_imag);   // (Rout, Rin)
  const RMatX h = detail::right_end_gate(J, sw, id, T.discarded_imag);  // (Lin, Lout)
  T.left.resize(4096);
  T.right.resize(4096);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) {
        T.left(i * 256 + j * 16 + k) = sw(i) * g(j, k);
        T.right(i * 256 + j * 16 + k) = h(i, k) * id(j);
      }
  T.power_offset = -2;
  return T;
}

/** Macroscopic F^{XY} ribbon: identity caps inside, swap caps at both closed ends. */
inline TransferMatrix build_t3(double J, int d) {
  detail::check_ribbon(d);
  if (d == 0) {
    TransferMatrix T = build_t1(J);
    T.kind = TMKind::T3;
    return T;
  }
  const int n = 1 - d;
  const RVecX id = pattern_id(), sw = pattern_sw();
  TransferMatrix T;
  T.kind = TMKind::T3;
  T.J = J;
  T.d = d;
  T.matrix = detail::stacked_transfer(J, n, id, id, T.discarded_imag);
  T.range_basis = detail::kron_basis(moment_basis(n), moment_basis(1));
  const RMatX g = detail::left_end_gate(J, sw, id, T.discarded_imag);
  const RMatX h = detail::right_end_gate(J, sw, id, T.discarded_imag);
  T.left.resize(4096);
  T.right.resize(4096);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) {
        T.left(i * 256 + j * 16 + k) = sw(i) * g(j, k);
        T.right(i * 256 + j * 16 + k) = h(i, k) * sw(j);
      }
  T.power_offset = -2;
  return T;
}

inline TransferMatrix build_transfer(TMKind kind, double J, int d) {
  switch (kind) {
    case TMKind::T1:
      if (d != 0) throw ConfigError("T1 has no ribbon width");
      return build_t1(J);
    case TMKind::T2:
      return build_t2(J, d);
    case TMKind::T3:
      return build_t3(J, d);
  }
  throw ConfigError("unknown transfer matrix kind");
}

/** max |T - T^T|. */
inline double transpose_defect(const TransferMatrix &T) {
  return (T.matrix - T.matrix.transpose()).cwiseAbs().maxCoeff();
}

/**
 * Mirror permutation: exchange of the two stacked legs on both sides of the
 * ribbon. For T2 the interior swap cap breaks the copy symmetry, and the
 * mirror also exchanges the two u* copies. T1 is plainly symmetric.
 */
inline std::vector<Eigen::Index> mirror_permutation(const TransferMatrix &T) {
  std::vector<Eigen::Index> p(T.dim());
  std::iota(p.begin(), p.end(), 0);
  if (T.dim() == 16) return p;
  const bool swap_copies = T.kind == TMKind::T2;
  auto cs = [&](int k) {
    if (!swap_copies) return k;
    const int s1 = copy_bit(k, 0), s2 = copy_bit(k, 1), s3 = copy_bit(k, 2), s4 = copy_bit(k, 3);
    return ((s1 * 2 + s4) * 2 + s3) * 2 + s2;
  };
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) p[i * 256 + j * 16 + k] = cs(j) * 256 + cs(i) * 16 + cs(k);
  return p;
}

/** max |T^T - M T M| with M the mirror permutation. */
inline double hermiticity_defect(const TransferMatrix &T) {
  const auto p = mirror_permutation(T);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < T.dim(); ++r)
    for (Eigen::Index c = 0; c < T.dim(); ++c)
      worst = std::max(worst, std::abs(T.matrix(c, r) - T.matrix(p[r], p[c])));
  return worst;
}

struct SpectralLine {
  double eigenvalue = 0.0;
  double weight = 0.0;  // r . Pi_lambda . l summed over the degenerate block
  int multiplicity = 0;
  double imag = 0.0;    // largest imaginary part seen in the block (eigenvalue or weight)
};

/**
 * Nonzero spectrum with boundary weights, via compression onto the range
 * basis B: T = B B^T T, so for m >= 1, r T^m l = (r B) Tc^{m-1} (B^T T l)
 * with Tc = B^T T B. Weight of lambda is its coefficient of lambda^m.
 * Groups of |lambda| within `tol` are merged. Sorted by |lambda| descending.
 */
inline std::vector<SpectralLine> leading_spectrum(const TransferMatrix &T, int k,
                                                  double tol = 1e-7) {
  if (k < 1) throw ConfigError("leading_spectrum: k >= 1");
  const RMatX &B = T.range_basis;
  const RMatX Tc = B.transpose() * T.matrix * B;
  Eigen::EigenSolver<RMatX> es(Tc);
  if (es.info() != Eigen::Success) throw std::runtime_error("leading_spectrum: eigensolver failed");
  const MatX V = es.eigenvectors();
  const VecX lam = es.eigenvalues();
  const MatX Vi = V.inverse();
  const VecX rb = (T.right.transpose() * B).transpose().cast<cplx>();
  const VecX lb = (B.transpose() * (T.matrix * T.left)).cast<cplx>();
  const VecX rv = V.transpose() * rb;
  const VecX lv = Vi * lb;
  std::vector<Eigen::Index> order(lam.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return std::abs(lam(a)) > std::abs(lam(b)); });
  std::vector<SpectralLine> out;
  const double scale = std::abs(lam(order[0]));
  for (Eigen::Index i : order) {
    if (std::abs(lam(i)) < 1e-10 * scale) continue;
    const cplx w = rv(i) * lv(i) / lam(i);
    if (!out.empty() && std::abs(std::abs(lam(i)) - out.back().eigenvalue) < tol * scale) {
      out.back().weight += w.real();
      out.back().multiplicity += 1;
      out.back().imag = std::max({out.back().imag, std::abs(lam(i).imag()), std::abs(w.imag())});
      continue;
    }
    if (static_cast<int>(out.size()) == k) break;
    out.push_back({lam(i).real(), w.real(), 1, std::max(std::abs(lam(i).imag()), std::abs(w.imag()))});
  }
  return out;
}

/** Ribbon parameters read off a spectrum; 0 where not applicable. */
struct RibbonSummary {
  double lambda_max = 0.0;
  double weight_max = 0.0;
  double lambda_sub = 0.0;
  double weight_sub = 0.0;
  double Lambda = 0.0;  // T1, T3: lambda_sub / 4
  double Gamma = 0.0;   // T2: lambda_sub / 2
  double c = 0.0;       // T2 correction amplitude
  double e = 0.0;       // T3 correction amplitude
};

inline RibbonSummary summarize(const TransferMatrix &T, double weight_floor = 1e-8) {
  const auto lines = leading_spectrum(T, 32);
  RibbonSummary s;
  s.lambda_max = lines.at(0).eigenvalue;
  s.weight_max = lines.at(0).weight;
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (std::abs(lines[i].weight) > weight_floor) {
      s.lambda_sub = lines[i].eigenvalue;
      s.weight_sub = lines[i].weight;
      break;
    }
  if (T.kind == TMKind::T2) {
    s.Gamma = s.lambda_sub / 2.0;
    s.c = s.weight_sub / (s.weight_max * s.Gamma * s.Gamma);
  } else {
    s.Lambda = s.lambda_sub / 4.0;
    // d = 0: the weight is already the coefficient of Lambda^{2t}
    s.e = (T.d == 0) ? s.weight_sub : s.weight_sub / (4.0 * s.Lambda * s.Lambda);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace analytic {

inline double lambda(double J) { return (2.0 - std::cos(4.0 * J)) / 3.0; }

/** <F^{XY}(t)> for single sites, i_Y = i_X + 2t + 2d. */
inline double f_local(int L, int t, double d, double J) {
  return std::pow(4.0, L - 1) * (1.0 + (d == 0.0 ? 3.0 * std::pow(lambda(J), 2 * t) : 0.0));
}

/**
 * <F^{X Ybar}(t)> for single sites. The d < 0 branch needs the ribbon
 * parameters and is valid for t >= |d|. d = -1/2 (odd X, even Y) has the
 * closed form 2^L (3 - cos 4J) from the single-gate average.
 */
inline double f_xybar_local(int L, int t, double d, double J, double Gamma, double c) {
  const double base = std::ldexp(1.0, L);
  if (d > 0) return 4.0 * base;
  if (d == 0) return base;
  if (d == -0.5) return base * (3.0 - std::cos(4.0 * J));
  if (t < -d) throw ConfigError("f_xybar_local: d < 0 branch needs t >= |d|");
  return base * 1.75 * (1.0 + c * std::pow(Gamma, 2 * t));
}

/** <exp I2^{XY}> for macroscopic X, Y (leading correction only). */
inline double opmi_macro(int t, int d, double J) {
  if (d > 0) return 1.0;
  const double ad = std::abs(d);
  return 1.0 + 3.0 * (ad + 1.0) * std::pow(lambda(J), 2.0 * t - ad);
}

/** exp(Delta I2^{X Ybar}). */
inline double delta_opmi_macro(int d) { return d > 0 ? 1.0 : std::pow(2.0, 2.0 * d - 2.0); }

/** Oscillating part of <F~^{XY}_local(r, omega)>; the delta(omega) term is left out. */
inline double ftilde_local(int L, int r, double omega, double J) {
  return std::pow(4.0, L - 1) * 3.0 * std::pow(lambda(J), r) / (2.0 * PI) *
         std::cos(omega * r / 2.0);
}

inline double ftilde_macro(int L, int r, double omega) {
  const double ln4 = std::log(4.0), ln2 = std::log(2.0);
  const double s = std::sin(omega * r / 2.0), c = std::cos(omega * r / 2.0);
  const double first = (omega == 0.0) ? r / 2.0 : s / omega;
  return std::pow(2.0, 2 * L - r) / PI *
         (first + (c * ln4 - omega * s) / (4.0 * (omega * omega + 4.0 * ln2 * ln2)));
}

/** Decay rate of I2^{XY} along the ray i_Y = i_X + v t. */
inline double gamma_v(double v, double J) {
  if (v > 2.0) return std::numeric_limits<double>::infinity();
  return std::abs(std::log(lambda(J))) * (1.0 + v / 2.0);
}

/** S2^{X u Ybar}(U_t) - S2^{X u Ybar}(U_0) along the ray v. */
inline double opee_ray(int t, double v) {
  if (v > 2.0) return 0.0;
  return 2.0 * std::log(2.0) + t * (2.0 - v) * std::log(2.0);
}

}  // namespace analytic

/** Dispatcher over the closed forms by name; argument order as in `analytic`. */
inline double analytic_prediction(const std::string &kind, const std::vector<double> &a) {
  auto need = [&](std::size_t n) {
    if (a.size() != n)
      throw ConfigError(kind + ": expected " + std::to_string(n) + " arguments, got " +
                        std::to_string(a.size()));
  };
  auto as_int = [&](double x) {
    if (x != std::floor(x)) throw ConfigError(kind + ": integer argument expected");
    return static_cast<int>(x);
  };
  if (kind == "lambda") return need(1), analytic::lambda(a[0]);
  if (kind == "f_local") return need(4), analytic::f_local(as_int(a[0]), as_int(a[1]), a[2], a[3]);
  if (kind == "f_xybar_local")
    return need(6), analytic::f_xybar_local(as_int(a[0]), as_int(a[1]), a[2], a[3], a[4], a[5]);
  if (kind == "opmi_macro") return need(3), analytic::opmi_macro(as_int(a[0]), as_int(a[1]), a[2]);
  if (kind == "delta_opmi_macro") return need(1), analytic::delta_opmi_macro(as_int(a[0]));
  if (kind == "ftilde_local")
    return need(4), analytic::ftilde_local(as_int(a[0]), as_int(a[1]), a[2], a[3]);
  if (kind == "ftilde_macro") return need(3), analytic::ftilde_macro(as_int(a[0]), as_int(a[1]), a[2]);
  if (kind == "gamma_v") return need(2), analytic::gamma_v(a[0], a[1]);
  if (kind == "opee_ray") return need(2), analytic::opee_ray(as_int(a[0]), a[1]);
  throw ConfigError("unknown prediction kind '" + kind + "'");
}

}  // namespace dusc

#endif  // DUSC_REPLICA_HPP
