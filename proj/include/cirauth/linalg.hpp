// Copyright 2026 The cirauth Authors
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

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "cirauth/errors.hpp"

namespace cirauth {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// True when A is square and ||A - A^H||_F <= tol * ||A||_F.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= tol * (scale > 0.0 ? scale : 1.0);
}

/**
 * Lower-triangular L with L L^H = A for Hermitian positive semi-definite A.
 *
 * A pivot that falls within round-off of zero is clamped to exactly zero and
 * its column below the diagonal is zeroed, which handles rank-deficient
 * inputs such as the all-ones correlation matrix. A pivot below
 * -1e-10 ||A||_F, or a clamped column whose below-diagonal remainder does
 * not vanish, means A is indefinite and raises DecompositionError.
 */
template <typename Derived>
Mat<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) {
    throw DecompositionError("cholesky: matrix is not square");
  }
  if (!is_hermitian(a)) {
    throw DecompositionError("cholesky: matrix is not Hermitian");
  }
  const Eigen::Index n = a.rows();
  const double scale = a.norm();
  const double negative_tol = 1e-10 * scale;
  const double clamp_tol = 64.0 * n * 2.220446049250313e-16 * scale;
  const double remainder_tol = 1e-8 * (scale > 0.0 ? scale : 1.0);

  Mat<Scalar> l = Mat<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = std::real(a(j, j)) - l.row(j).head(j).squaredNorm();
    if (pivot < -negative_tol) {
      throw DecompositionError("cholesky: matrix is indefinite (pivot " +
                               std::to_string(pivot) + " at column " +
                               std::to_string(j) + ")");
    }
    if (pivot <= clamp_tol) {
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const Scalar rest =
            a(i, j) - l.row(j).head(j).dot(l.row(i).head(j));
        if (std::abs(rest) > remainder_tol) {
          throw DecompositionError(
              "cholesky: zero pivot with nonzero remainder, matrix is "
              "indefinite");
        }
      }
      continue;
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      // Eigen's dot conjugates its first argument: sum conj(L_jk) L_ik.
      l(i, j) = (a(i, j) - l.row(j).head(j).dot(l.row(i).head(j))) / d;
    }
  }
  return l;
}

/// x with A x = b for Hermitian positive-definite A, by Cholesky and two
/// triangular solves. A clamped (zero) pivot means A is singular.
template <typename DerivedA, typename DerivedB>
Vec<typename DerivedA::Scalar> solve_hpd(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("solve_hpd: A is " + std::to_string(a.rows()) +
                            " rows, b has " + std::to_string(b.rows()));
  }
  const auto l = cholesky(a);
  if ((l.diagonal().array() == typename DerivedA::Scalar(0)).any()) {
    throw DecompositionError("solve_hpd: matrix is singular");
  }
  Vec<typename DerivedA::Scalar> x =
      l.template triangularView<Eigen::Lower>().solve(b);
  l.adjoint().template triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

}  // namespace cirauth
