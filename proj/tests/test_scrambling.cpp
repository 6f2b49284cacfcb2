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

#include "catch_amalgamated.hpp"
#include "dusc/circuits.hpp"
#include "dusc/opent.hpp"
#include "dusc/rng.hpp"
#include "dusc/scrambling.hpp"
#include "oracles.hpp"

namespace dusc {
namespace test_scrambling {

static MatX string_matrix(const PauliString &p, int L) {
  const Eigen::Index n = Eigen::Index(1) << L;
  MatX m = MatX::Identity(n, n);
  for (std::size_t i = 0; i < p.support.size(); ++i)
    m = oracle::embed1(oracle::pauli(static_cast<int>(p.letters[i])), L, p.support[i]) * m;
  return m;
}

// Definition-level averages with full matrices.
static std::pair<double, double> dense_averages(const MatX &Ut, int L, const std::vector<int> &X,
                                                const std::vector<int> &Y) {
  const double dim = std::ldexp(1.0, L);
  const std::uint64_t nX = 1u << (2 * X.size()), nY = 1u << (2 * Y.size());
  double tp = 0.0, ot = 0.0;
  for (std::uint64_t ky = 0; ky < nY; ++ky) {
    const MatX OY = Ut.adjoint() * string_matrix(PauliString::from_index(Y, ky), L) * Ut;
    for (std::uint64_t kx = 0; kx < nX; ++kx) {
      const MatX OX = string_matrix(PauliString::from_index(X, kx), L);
      tp += std::norm((OY * OX).trace() / dim);
      const MatX P = OY * OX;
      ot += (P * P).trace().real() / dim;
    }
  }
  return {tp / double(nX * nY), ot / double(nX * nY)};
}

SCENARIO("Pauli strings") {
  const int L = 4;
  Rng rng(41);
  std::uniform_int_distribution<std::uint64_t> pick(0, 63);
  const MatX M = MatX::Random(16, 16);
  for (int k = 0; k < 20; ++k) {
    const PauliString p = PauliString::from_index({1, 3, 4}, pick(rng));
    const MatX ref = string_matrix(p, L);
    CHECK((p.matrix(L) - ref).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pauli_left(p, M) - ref * M).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((pauli_right(M, p) - M * ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(trace_with_pauli(M, p) - (M * ref).trace()) < 1e-12);
  }
  CHECK(PauliString::from_index({1, 2}, 1 + 4 * 3).label() == "XZ");
}

SCENARIO("Pauli averages at t = 0") {
  Rng rng(42);
  const FloquetOperator U = build_floquet(0.5, 6, rng);
  CHECK(two_point_avg(U, 0, {2}, {2}) == Catch::Approx(0.25));
  CHECK(two_point_avg(U, 0, {2}, {4}) == Catch::Approx(1.0 / 16));
  CHECK(otoc_avg(U, 0, {2}, {2}) == Catch::Approx(0.25));
  CHECK(otoc_avg(U, 0, {2}, {4}) == Catch::Approx(1.0));
}

SCENARIO("Averages against full-matrix definitions") {
  Rng rng(43);
  const int L = 4;
  const FloquetOperator U = build_floquet(1.0, L, rng);
  for (int t = 1; t <= 2; ++t) {
    const MatX Ut = floquet_power(U, t);
    for (const auto &[X, Y] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
             {{2}, {3}}, {{1, 2}, {4}}, {{2}, {1, 4}}}) {
      const auto [tp, ot] = dense_averages(Ut, L, X, Y);
      CHECK(two_point_avg(U, t, X, Y) == Catch::Approx(tp).epsilon(1e-12));
      CHECK(otoc_avg(U, t, X, Y) == Catch::Approx(ot).epsilon(1e-12));
    }
  }
}

SCENARIO("Exact relations to the operator entanglement") {
  Rng rng(44);
  const int L = 6;
  const auto gates = sample_circuit_gates(0.3, L, rng);
  const FloquetOperator U = floquet_from_gates(L, gates);
  for (int t = 0; t <= 2; ++t)
    for (const auto &[X, Y] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
             {{2}, {2}}, {{2}, {4}}, {{2}, {5}}, {{1, 2}, {3}}, {{3}, {5, 6}}}) {
      const double nx = double(X.size()), ny = double(Y.size());
      const double F = fxy_fast(gates, L, t, X, Y);
      const double Fbar = fxybar_fast(gates, L, t, X, Y);
      CHECK(two_point_avg(U, t, X, Y) ==
            Catch::Approx(F * std::pow(2.0, -2.0 * L - nx - ny)).epsilon(1e-9));
      CHECK(otoc_avg(U, t, X, Y) ==
            Catch::Approx(Fbar * std::pow(2.0, nx + L - ny - 2.0 * L) / std::pow(4.0, nx))
                .epsilon(1e-9));
    }
}

SCENARIO("Pauli budget") {
  Rng rng(45);
  const FloquetOperator U = build_floquet(0.5, 4, rng);
  PauliBudget b;
  b.max_pairs_log4 = 2;
  CHECK_THROWS_AS(two_point_avg(U, 1, {1, 2}, {3}, b), BudgetError);
  b.max_L = 2;
  CHECK_THROWS_AS(otoc_avg(U, 1, {1}, {3}, b), BudgetError);
  CHECK_THROWS_AS(two_point_avg(U, 1, {}, {3}), ConfigError);
}

}  // namespace test_scrambling
}  // namespace dusc
