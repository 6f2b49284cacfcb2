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

#ifndef DUSC_SCRAMBLING_HPP
#define DUSC_SCRAMBLING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dusc/circuits.hpp"
#include "dusc/common.hpp"

namespace dusc {

enum class Pauli : char { I = 0, X = 1, Y = 2, Z = 3 };

/** Pauli string on a set of sites; identity elsewhere. */
struct PauliString {
  std::vector<int> support;   // 1-based sites
  std::vector<Pauli> letters;  // letters[k] acts on support[k]

  /** k-th string of the 4^n basis on `sites`, base-4 digits little-endian. */
  static PauliString from_index(const std::vector<int> &sites, std::uint64_t k) {
    PauliString p;
    p.support = sites;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      p.letters.push_back(static_cast<Pauli>(k & 3));
      k >>= 2;
    }
    return p;
  }

  std::string label() const {
    static const char names[] = "IXYZ";
    std::string s;
    for (Pauli c : letters) s += names[static_cast<int>(c)];
    return s;
  }

  // P|k> = phase(k) |k ^ flip()>
  std::uint64_t flip() const {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
      if (letters[i] == Pauli::X || letters[i] == Pauli::Y) f |= std::uint64_t(1) << site_bit(support[i]);
    return f;
  }

  cplx phase(std::uint64_t k) const {
    cplx ph = 1.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const bool b = (k >> site_bit(support[i])) & 1;
      switch (letters[i]) {
        case Pauli::I:
        case Pauli::X:
          break;
        case Pauli::Y:
          ph *= b ? -I_ : I_;
          break;
        case Pauli::Z:
          if (b) ph = -ph;
          break;
      }
    }
    return ph;
  }

  MatX matrix(int L) const {
    const Eigen::Index n = Eigen::Index(1) << L;
    MatX m = MatX::Zero(n, n);
    const std::uint64_t f = flip();
    for (std::uint64_t k = 0; k < std::uint64_t(n); ++k) m(Eigen::Index(k ^ f), Eigen::Index(k)) = phase(k);
    return m;
  }
};

/** P * M via the signed permutation. */
inline MatX pauli_left(const PauliString &p, const MatX &m) {
  MatX r(m.rows(), m.cols());
  const std::uint64_t f = p.flip();
  for (Eigen::Index k = 0; k < m.rows(); ++k) r.row(Eigen::Index(k ^ f)) = p.phase(k) * m.row(k);
  return r;
}

/** M * P. */
inline MatX pauli_right(const MatX &m, const PauliString &p) {
  MatX r(m.rows(), m.cols());
  const std::uint64_t f = p.flip();
  for (Eigen::Index j = 0; j < m.cols(); ++j) r.col(j) = p.phase(j) * m.col(Eigen::Index(j ^ f));
  return r;
}

/** Tr(A P) in O(2^L). */
inline cplx trace_with_pauli(const MatX &a, const PauliString &p) {
  const std::uint64_t f = p.flip();
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) acc += p.phase(k) * a(k, Eigen::Index(k ^ f));
  return acc;
}

/** U_t^dag O U_t. */
inline MatX heisenberg(const FloquetOperator &U, int t, const MatX &O) {
  if (t < 0) throw ConfigError("t must be >= 0");
  const MatX Ut = floquet_power(U, t);
  return Ut.adjoint() * O * Ut;
}

struct PauliBudget {
  int max_pairs_log4 = 6;  // 4^{|X|+|Y|}
  int max_L = 10;
};

namespace detail {
inline void check_pauli_budget(int L, std::size_t nx, std::size_t ny, const PauliBudget &b) {
  if (L > b.max_L) throw BudgetError("dense Pauli averages capped at L=" + std::to_string(b.max_L));
  if (static_cast<int>(nx + ny) > b.max_pairs_log4)
    throw BudgetError("Pauli enumeration 4^" + std::to_string(nx + ny) + " over cap");
  if (nx == 0 || ny == 0) throw ConfigError("empty support");
}
}  // namespace detail

/** 4^{-(|X|+|Y|)} sum over Pauli pairs of |<O_Y(t) O_X>|^2, <.> = Tr/2^L. */
inline double two_point_avg(const FloquetOperator &U, int t, const std::vector<int> &X,
                            const std::vector<int> &Y, const PauliBudget &b = {}) {
  detail::check_pauli_budget(U.L, X.size(), Y.size(), b);
  const MatX Ut = floquet_power(U, t);
  const double dim = std::ldexp(1.0, U.L);
  const std::uint64_t nX = std::uint64_t(1) << (2 * X.size());
  const std::uint64_t nY = std::uint64_t(1) << (2 * Y.size());
  double acc = 0.0;
  for (std::uint64_t ky = 0; ky < nY; ++ky) {
    const PauliString py = PauliString::from_index(Y, ky);
    const MatX B = Ut.adjoint() * pauli_left(py, Ut);
    for (std::uint64_t kx = 0; kx < nX; ++kx)
      acc += std::norm(trace_with_pauli(B, PauliString::from_index(X, kx)) / dim);
  }
  return acc / double(nX * nY);
}

/** 4^{-(|X|+|Y|)} sum over Pauli pairs of <(O_Y(t) O_X)^2>. */
inline double otoc_avg(const FloquetOperator &U, int t, const std::vector<int> &X,
                       const std::vector<int> &Y, const PauliBudget &b = {}) {
  detail::check_pauli_budget(U.L, X.size(), Y.size(), b);
  const MatX Ut = floquet_power(U, t);
  const double dim = std::ldexp(1.0, U.L);
  const std::uint64_t nX = std::uint64_t(1) << (2 * X.size());
  const std::uint64_t nY = std::uint64_t(1) << (2 * Y.size());
  double acc = 0.0;
  for (std::uint64_t ky = 0; ky < nY; ++ky) {
    const PauliString py = PauliString::from_index(Y, ky);
    const MatX B = Ut.adjoint() * pauli_left(py, Ut);
    for (std::uint64_t kx = 0; kx < nX; ++kx) {
      const MatX C = pauli_right(B, PauliString::from_index(X, kx));
      // Tr(C C), real for Hermitian factors
      acc += (C.transpose().cwiseProduct(C)).sum().real() / dim;
    }
  }
  return acc / double(nX * nY);
}

}  // namespace dusc

#endif  // DUSC_SCRAMBLING_HPP
