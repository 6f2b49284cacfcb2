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

#ifndef DUSC_COMMON_HPP
#define DUSC_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dusc {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;
using RMatX = Eigen::MatrixXd;
using RVecX = Eigen::VectorXd;

constexpr cplx I_{0.0, 1.0};
constexpr double PI = 3.14159265358979323846;

/** Bad user input: odd L, unknown keys, invalid geometry. Maps to exit code 2. */
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Requested size exceeds a memory/compute cap. Maps to exit code 3. */
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Max-norm of M M^dag - 1. */
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived> &m) {
  const auto n = m.rows();
  MatX p = m * m.adjoint();
  p -= MatX::Identity(n, n);
  return p.cwiseAbs().maxCoeff();
}

// site i (1-based) of a ring of L sites lives on bit i-1
inline int site_bit(int site) { return site - 1; }

inline int ring_site(int i, int L) { return ((i - 1) % L + L) % L + 1; }

}  // namespace dusc

#endif  // DUSC_COMMON_HPP
