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
#include "dusc/replica.hpp"
#include "dusc/rng.hpp"
#include "oracles.hpp"

namespace dusc {
namespace test_replica {

static MatX four_copies(const Mat2 &u) {
  const MatX a(u), b(u.conjugate());
  return oracle::kron(oracle::kron(oracle::kron(a, b), a), b);
}

SCENARIO("Haar twirl: Monte-Carlo average and idempotence") {
  const RMatX W = haar_twirl_single();
  CHECK((W * W - W).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((W - W.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  // range is spanned by the two patterns
  CHECK((W * pattern_id() - pattern_id()).norm() < 1e-12);
  CHECK((W * pattern_sw() - pattern_sw()).norm() < 1e-12);

  Rng rng(51);
  const int n = 20000;
  MatX mean = MatX::Zero(16, 16);
  RMatX sq = RMatX::Zero(16, 16);
  for (int k = 0; k < n; ++k) {
    const MatX m = four_copies(haar_u2(rng));
    mean += m;
    sq += m.cwiseAbs2();
  }
  mean /= double(n);
  sq /= double(n);
  int bad = 0;
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      const double sd = std::sqrt(std::max(sq(r, c) - std::norm(mean(r, c)), 0.0) / n);
      if (std::abs(mean(r, c) - W(r, c)) > 4.0 * sd + 1e-12) ++bad;
    }
  CHECK(bad == 0);
}

SCENARIO("Moment bases") {
  const RMatX Q1 = moment_basis(1), Q2 = moment_basis(2);
  CHECK(Q1.cols() == 2);
  CHECK(Q2.cols() == 14);
  CHECK((Q2.transpose() * Q2 - RMatX::Identity(14, 14)).cwiseAbs().maxCoeff() < 1e-12);
  const RMatX P1 = moment_projector(1);
  CHECK((P1 * pattern_id() - pattern_id()).norm() < 1e-12);
  CHECK_THROWS_AS(moment_basis(3), BudgetError);
}

SCENARIO("Folded core gate is the four-fold copy of U[J]") {
  for (double J : {0.2, 0.9}) {
    const Mat4 g = build_core_gate(J);
    const MatX gg = fold_core(J);
    // (Lin, Rin) = (C, D): per copy the two-qubit input is (bit of C, bit of D)
    for (int C = 0; C < 16; ++C)
      for (int D = 0; D < 16; ++D) {
        cplx ref = 1.0;
        for (int c = 0; c < 4; ++c) {
          const int a = copy_bit(C, c), b = copy_bit(D, c);
          const cplx amp = g(2 * b + a, 2 * a + b);  // swap block or diagonal
          ref *= (c % 2 == 0) ? amp : std::conj(amp);
        }
        CHECK(std::abs(gg(D * 16 + C, C * 16 + D) - ref) < 1e-14);
      }
  }
}

SCENARIO("T1: twirl construction against the closed form") {
  Rng rng(52);
  std::uniform_real_distribution<double> ud(-PI, PI);
  for (int k = 0; k < 20; ++k) {
    const double J = ud(rng);
    const TransferMatrix T = build_t1(J);
    CHECK((T.matrix - t1_closed_form(J)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(T.discarded_imag < 1e-12);
  }
}

SCENARIO("T1 spectrum and values") {
  for (double J : {0.1, 0.5, 1.2}) {
    const TransferMatrix T = build_t1(J);
    const auto lines = leading_spectrum(T, 4);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].eigenvalue == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(lines[1].eigenvalue == Catch::Approx(4.0 * analytic::lambda(J)).epsilon(1e-12));
    for (int t = 1; t <= 4; ++t)
      CHECK(T.value(t) == Catch::Approx(1.0 + 3.0 * std::pow(analytic::lambda(J), 2 * t)));
    CHECK(hermiticity_defect(T) < 1e-14);
  }
}

SCENARIO("Ribbons at d = -1") {
  const double J = 0.5;
  GIVEN("T2") {
    const TransferMatrix T = build_t2(J, -1);
    const auto lines = leading_spectrum(T, 3);
    CHECK(lines[0].eigenvalue == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(lines[0].weight == Catch::Approx(14.0).epsilon(1e-8));
    CHECK(hermiticity_defect(T) < 1e-12);
    const RibbonSummary s = summarize(T);
    CHECK(s.Gamma > 0.0);
    CHECK(s.Gamma < 1.0);
    // value(t) from the spectral decomposition
    const double vt = T.value(3);
    double spec = 0.0;
    for (const auto &l : leading_spectrum(T, 64)) spec += l.weight * std::pow(l.eigenvalue, 4);
    CHECK(vt == Catch::Approx(T.prefactor(3) * spec).epsilon(1e-9));
  }
  GIVEN("T3") {
    const TransferMatrix T = build_t3(J, -1);
    const auto lines = leading_spectrum(T, 2);
    CHECK(lines[0].eigenvalue == Catch::Approx(4.0).epsilon(1e-10));
    CHECK(lines[1].eigenvalue == Catch::Approx(4.0 * analytic::lambda(J)).epsilon(1e-9));
    CHECK(hermiticity_defect(T) < 1e-12);
  }
  GIVEN("T3 at d = 0") {
    const TransferMatrix T3 = build_t3(J, 0), T1 = build_t1(J);
    CHECK((T3.matrix - T1.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  WHEN("the ribbon is out of range") {
    CHECK_THROWS_AS(build_t2(J, 0), ConfigError);
    CHECK_THROWS_AS(build_t2(J, 1), ConfigError);
    CHECK_THROWS_AS(build_t3(J, -2), BudgetError);
    CHECK_THROWS_AS(build_transfer(TMKind::T1, J, -1), ConfigError);
  }
}

SCENARIO("Closed forms") {
  CHECK(analytic::lambda(0.0) == Catch::Approx(1.0 / 3));
  CHECK(analytic::lambda(PI / 4) == Catch::Approx(1.0));
  CHECK(analytic::delta_opmi_macro(0) == 0.25);
  CHECK(analytic::delta_opmi_macro(-1) == 0.0625);
  CHECK(analytic::delta_opmi_macro(1) == 1.0);
  CHECK(analytic::f_local(4, 1, 1.0, 0.5) == 64.0);
  CHECK(analytic::f_xybar_local(4, 1, 0.0, 0.5, 0, 0) == 16.0);
  CHECK(analytic::f_xybar_local(4, 1, -0.5, 0.0, 0, 0) == 32.0);
  CHECK(analytic::opmi_macro(2, 1, 0.5) == 1.0);
  CHECK(analytic::opmi_macro(2, 0, 0.5) ==
        Catch::Approx(1.0 + 3.0 * std::pow(analytic::lambda(0.5), 4)));
  CHECK(analytic::gamma_v(3.0, 0.5) == std::numeric_limits<double>::infinity());
  CHECK(analytic::opee_ray(3, 2.5) == 0.0);
  CHECK(analytic::opee_ray(1, 0.0) == Catch::Approx(4.0 * std::log(2.0)));
  CHECK(analytic_prediction("lambda", {0.5}) == analytic::lambda(0.5));
  CHECK_THROWS_AS(analytic_prediction("lambda", {}), ConfigError);
  CHECK_THROWS_AS(analytic_prediction("f_local", {4.5, 1, 0, 0.5}), ConfigError);
  CHECK_THROWS_AS(analytic_prediction("nope", {}), ConfigError);
}

}  // namespace test_replica
}  // namespace dusc
