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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cirauth/detect.hpp"
#include "cirauth/linalg.hpp"
#include "cirauth/rng.hpp"

namespace cirauth {

/// M x n matrix of iid N(0, 1/M) entries. Requires 0 < M < n.
Eigen::MatrixXd gaussian_phi(Rng& rng, int m, int n);

/// Orthonormal DCT-II: row k, column j is c_k cos(pi (2j + 1) k / (2n)).
Eigen::MatrixXd dct_basis(int n);

/// Unitary DFT: row k, column j is exp(-2 pi i k j / n) / sqrt(n).
Eigen::MatrixXcd dft_basis(int n);

enum class Basis { Dct, Identity, Dft };

std::string_view to_string(Basis basis);

/// Greedy loop terminates at whichever comes first.
struct OmpStop {
  int max_atoms = 1;
  double residual_tol = 1e-6;  ///< relative to ||y||
};

struct OmpResult {
  Eigen::VectorXcd coefficients;
  std::vector<Eigen::Index> support;  ///< selection order
  std::vector<double> residual_norms;  ///< ||r|| before the first and after each selection
};

/// The residual grew during an iteration. Carries everything recovered
/// up to the failing step.
class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(const std::string& what, OmpResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const OmpResult& partial() const { return partial_; }

 private:
  OmpResult partial_;
};

/**
 * Orthogonal matching pursuit against a fixed dictionary.
 *
 * The Gram matrix A^H A and the atom norms are computed once, so each solve
 * costs one A^H y product plus O(n k) work per selected atom. The least
 * squares refit over the support uses an incrementally grown Cholesky
 * factor of the support's Gram block.
 *
 * With a real dictionary a complex signal is carried as two real columns;
 * both share one support, selected by the joint magnitude of the complex
 * correlation.
 */
template <typename Scalar>
class OmpSolver {
 public:
  explicit OmpSolver(Mat<Scalar> dictionary);

  const Mat<Scalar>& dictionary() const { return dictionary_; }
  Eigen::Index rows() const { return dictionary_.rows(); }
  Eigen::Index atoms() const { return dictionary_.cols(); }

  OmpResult solve(const Eigen::VectorXcd& y, const OmpStop& stop) const;

 private:
  Mat<Scalar> dictionary_;
  Mat<Scalar> gram_;
  Eigen::VectorXd inv_norms2_;  // 1 / ||A_j||^2, for squared selection scores
};

extern template class OmpSolver<double>;
extern template class OmpSolver<std::complex<double>>;

/// One-shot OMP; prefer OmpSolver when the dictionary is reused.
OmpResult omp(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& dictionary,
              const OmpStop& stop);
OmpResult omp(const Eigen::VectorXcd& y, const Eigen::MatrixXd& dictionary,
              const OmpStop& stop);

struct CompressedReport {
  Eigen::VectorXcd y;
  std::uint64_t codec_id = 0;
};

/**
 * Measurement matrix, sparsifying basis and OMP stopping policy shared by
 * the relay and the fusion center. Immutable once built.
 *
 * Phi is M x n with M < n, except that M == n is accepted as a degenerate
 * uncompressed mode.
 */
class CsCodec {
 public:
  CsCodec(Eigen::MatrixXd phi, Basis basis, OmpStop stop);

  /// Phi from gaussian_phi(rng, m, n).
  static CsCodec gaussian(Rng& rng, int m, int n, Basis basis, OmpStop stop);

  int measurements() const { return static_cast<int>(phi_.rows()); }
  int length() const { return static_cast<int>(phi_.cols()); }
  Basis basis() const { return basis_; }
  const OmpStop& stop() const { return stop_; }
  const Eigen::MatrixXd& phi() const { return phi_; }
  /// Psi as a complex matrix regardless of basis.
  Eigen::MatrixXcd psi() const;
  std::uint64_t id() const { return id_; }

  CompressedReport compress(const Eigen::VectorXcd& x) const;
  CompressedReport compress(const Eigen::VectorXd& x) const;

  /// OMP over Phi Psi^H; coefficients live in the transform domain.
  OmpResult recover(const CompressedReport& report) const;

  /// Psi^H x0, touching only the support columns.
  Eigen::VectorXcd synthesize(const OmpResult& coefficients) const;

 private:
  void check_report(const CompressedReport& report) const;

  Eigen::MatrixXd phi_;
  Basis basis_;
  OmpStop stop_;
  Eigen::MatrixXd psi_real_;     // Dct, Identity
  Eigen::MatrixXcd psi_complex_;  // Dft
  std::optional<OmpSolver<double>> real_solver_;
  std::optional<OmpSolver<std::complex<double>>> complex_solver_;
  std::uint64_t id_ = 0;
};

inline CompressedReport compress(const Eigen::VectorXcd& x, const CsCodec& codec) {
  return codec.compress(x);
}
inline CompressedReport compress(const Eigen::VectorXd& x, const CsCodec& codec) {
  return codec.compress(x);
}

/// Estimate of the uncompressed vector: Psi^H applied to the OMP solution.
Eigen::VectorXcd reconstruct_raw(const CompressedReport& report,
                                 const CsCodec& codec);

/// ||estimate - truth||^2 for a single reconstruction.
double reconstruction_error(const CompressedReport& report, const CsCodec& codec,
                            const Eigen::VectorXcd& truth);

/// OMP then round at 0.5. Both u and its complement 1 - u are decoded
/// (the latter from Phi 1 - y); the fit that meets the residual tolerance
/// with fewer atoms wins, else the smaller relative residual. Ties favour u.
/// Requires an Identity-basis codec.
DecisionVector reconstruct_decisions(const CompressedReport& report,
                                     const CsCodec& codec);

}  // namespace cirauth
