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

// Reference implementations used only by the tests. Deliberately naive:
// full Kronecker products, explicit reshapes, Taylor exponentials. None of
// them call into the code paths they check.

#ifndef DUSC_TESTS_ORACLES_HPP
#define DUSC_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using MatX = Eigen::MatrixXcd;

inline MatX pauli(int k) {
  MatX p(2, 2);
  const cplx i(0.0, 1.0);
  switch (k) {
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: p = MatX::Identity(2, 2);
  }
  return p;
}

inline MatX kron(const MatX &a, const MatX &b) {
  MatX k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// exp(A) by scaling and squaring of a 30-term Taylor series
inline MatX expm(const MatX &A) {
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(nrm, -s) > 0.5) ++s;
  const MatX B = A * std::ldexp(1.0, -s);
  MatX term = MatX::Identity(A.rows(), A.cols()), sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * B / double(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

// Embed a two-qubit gate g (index 2a + b, a on site sa) into L qubits; site i is bit i-1.
inline MatX embed2(const MatX &g, int L, int sa, int sb) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  MatX out = MatX::Zero(dim, dim);
  const int ba = sa - 1, bb = sb - 1;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int ia = (col >> ba) & 1, ib = (col >> bb) & 1;
    for (int oa = 0; oa < 2; ++oa)
      for (int ob = 0; ob < 2; ++ob) {
        Eigen::Index row = col & ~((Eigen::Index(1) << ba) | (Eigen::Index(1) << bb));
        row |= Eigen::Index(oa) << ba;
        row |= Eigen::Index(ob) << bb;
        out(row, col) += g(2 * oa + ob, 2 * ia + ib);
      }
  }
  return out;
}

// Single-site operator on site s of L.
inline MatX embed1(const MatX &o, int L, int s) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  MatX out = MatX::Zero(dim, dim);
  const int b = s - 1;
  for (Eigen::Index col = 0; col < dim; ++col)
    for (int r = 0; r < 2; ++r) {
      const Eigen::Index row = (col & ~(Eigen::Index(1) << b)) | (Eigen::Index(r) << b);
      out(row, col) += o(r, (col >> b) & 1);
    }
  return out;
}

// U_F = (odd-s layer)(even-s layer); gates[s-1] on bond (s, s % L + 1).
template <typename Gate>
MatX floquet(const std::vector<Gate> &gates, int L) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  MatX first = MatX::Identity(dim, dim), second = first;
  for (int s = 1; s <= L; ++s) {
    const MatX e = embed2(MatX(gates[s - 1]), L, s, s % L + 1);
    if (s % 2 == 0)
      first = e * first;
    else
      second = e * second;
  }
  return second * first;
}

/**
 * 4^L Tr rho_A^2 for |U> = 2^{-L/2} sum U[o, i] |o>|i>, A given as masks on
 * the input and output sites. Explicit reduced density matrix.
 */
inline double choi_F(const MatX &U, int L, std::uint64_t in_mask, std::uint64_t out_mask) {
  const int n = 2 * L;
  const std::uint64_t maskA = in_mask | (out_mask << L);
  std::vector<int> a_bits, b_bits;
  for (int b = 0; b < n; ++b) ((maskA >> b) & 1 ? a_bits : b_bits).push_back(b);
  const Eigen::Index dA = Eigen::Index(1) << a_bits.size(), dB = Eigen::Index(1) << b_bits.size();
  MatX M(dA, dB);
  const double norm = std::pow(2.0, -0.5 * L);
  for (Eigen::Index ia = 0; ia < dA; ++ia)
    for (Eigen::Index ib = 0; ib < dB; ++ib) {
      std::uint64_t full = 0;
      for (std::size_t k = 0; k < a_bits.size(); ++k) full |= std::uint64_t((ia >> k) & 1) << a_bits[k];
      for (std::size_t k = 0; k < b_bits.size(); ++k) full |= std::uint64_t((ib >> k) & 1) << b_bits[k];
      const std::uint64_t i_in = full & ((std::uint64_t(1) << L) - 1), i_out = full >> L;
      M(ia, ib) = norm * U(Eigen::Index(i_out), Eigen::Index(i_in));
    }
  const MatX rho = M * M.adjoint();
  return std::pow(4.0, L) * (rho * rho).trace().real();
}

inline std::uint64_t mask(const std::vector<int> &sites) {
  std::uint64_t m = 0;
  for (int s : sites) m |= std::uint64_t(1) << (s - 1);
  return m;
}

}  // namespace oracle

#endif  // DUSC_TESTS_ORACLES_HPP
