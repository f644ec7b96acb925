// Copyright 2026 The mmkernel Authors
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

#pragma once

// Dense kernel-matrix algebra. Everything here is templated on the Eigen
// expression type so float and long double Gram matrices work as well.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace mmk::linalg {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Double centering: K - 1K/N - K1/N + 1K1/N^2.
template <typename Derived>
Matrix<typename Derived::Scalar> center(const Eigen::MatrixBase<Derived>& K) {
  using Scalar = typename Derived::Scalar;
  const auto n = K.rows();
  if (n == 0) return Matrix<Scalar>(0, 0);
  const Vector<Scalar> row_mean = K.rowwise().mean();
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_mean = K.colwise().mean();
  const Scalar grand = K.mean();
  Matrix<Scalar> out = K;
  out.rowwise() -= col_mean;
  out.colwise() -= row_mean;
  out.array() += grand;
  return out;
}

/// Eigenvalues in non-increasing order with matching eigenvector columns.
/// Each eigenvector is normalized so its first non-negligible entry is
/// positive.
template <typename Scalar>
struct EigenPairs {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;
};

template <typename Derived>
EigenPairs<typename Derived::Scalar> sorted_eigenpairs(
    const Eigen::MatrixBase<Derived>& K) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> sym = (K + K.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  const auto n = sym.rows();
  EigenPairs<Scalar> out{Vector<Scalar>(n), Matrix<Scalar>(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = out.vectors.col(j);
    const Scalar tol = col.cwiseAbs().maxCoeff() * Scalar(1e-8);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > tol) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
  return out;
}

template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& K) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> sym = (K + K.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym,
                                                       Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

template <typename Derived>
typename Derived::Scalar max_abs_eigenvalue(
    const Eigen::MatrixBase<Derived>& K) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> sym = (K + K.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym,
                                                       Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// ||E E^T - K||_F / ||K||_F, or the absolute error when K is zero.
template <typename DerivedE, typename DerivedK>
typename DerivedK::Scalar relative_reconstruction_error(
    const Eigen::MatrixBase<DerivedE>& embedding,
    const Eigen::MatrixBase<DerivedK>& K) {
  const auto err = (embedding * embedding.transpose() - K).norm();
  const auto scale = K.norm();
  return scale > 0 ? err / scale : err;
}

}  // namespace mmk::linalg
