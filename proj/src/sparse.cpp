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

#include "cirauth/sparse.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "cirauth/errors.hpp"

namespace cirauth {

Eigen::MatrixXd gaussian_phi(Rng& rng, int m, int n) {
  if (m < 1 || m >= n) {
    throw InvalidParameter("gaussian_phi: need 0 < M < n, got M = " +
                           std::to_string(m) + ", n = " + std::to_string(n));
  }
  const double sd = 1.0 / std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd phi(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) phi(i, j) = sd * rng.normal();
  }
  return phi;
}

Eigen::MatrixXd dct_basis(int n) {
  if (n < 1) throw InvalidParameter("dct_basis: n must be >= 1");
  Eigen::MatrixXd psi(n, n);
  const double c0 = std::sqrt(1.0 / n);
  const double ck = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      // cos has period 4n in units of pi / 2n; reducing first keeps the angle exact.
      const long m = ((2L * j + 1) * k) % (4L * n);
      psi(k, j) = (k == 0 ? c0 : ck) * std::cos(std::numbers::pi * m / (2.0 * n));
    }
  }
  return psi;
}

Eigen::MatrixXcd dft_basis(int n) {
  if (n < 1) throw InvalidParameter("dft_basis: n must be >= 1");
  Eigen::MatrixXcd psi(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays exact for large n.
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * j) % n) / n;
      psi(k, j) = std::polar(scale, angle);
    }
  }
  return psi;
}

std::string_view to_string(Basis basis) {
  switch (basis) {
    case Basis::Dct: return "dct";
    case Basis::Identity: return "identity";
    case Basis::Dft: return "dft";
  }
  return "?";
}

namespace {

// Complex signal as solver columns: two real columns, or one complex.
template <typename Scalar>
Mat<Scalar> to_columns(const Eigen::VectorXcd& y);

template <>
Mat<double> to_columns<double>(const Eigen::VectorXcd& y) {
  Mat<double> out(y.size(), 2);
  out.col(0) = y.real();
  out.col(1) = y.imag();
  return out;
}

template <>
Mat<std::complex<double>> to_columns<std::complex<double>>(const Eigen::VectorXcd& y) {
  return y;
}

template <typename Scalar>
Eigen::VectorXcd from_columns(const Mat<Scalar>& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    Eigen::VectorXcd out(x.rows());
    out.real() = x.col(0);
    out.imag() = x.col(1);
    return out;
  } else {
    return x.col(0);
  }
}

template <typename Scalar>
OmpResult dense_result(Eigen::Index atoms, const std::vector<Eigen::Index>& support,
                       const Mat<Scalar>& support_coeffs,
                       std::vector<double> residual_norms) {
  OmpResult out;
  out.coefficients = Eigen::VectorXcd::Zero(atoms);
  if (!support.empty()) {
    const Eigen::VectorXcd c = from_columns<Scalar>(support_coeffs);
    for (std::size_t i = 0; i < support.size(); ++i) {
      out.coefficients[support[i]] = c[static_cast<Eigen::Index>(i)];
    }
  }
  out.support = support;
  out.residual_norms = std::move(residual_norms);
  return out;
}

}  // namespace

template <typename Scalar>
OmpSolver<Scalar>::OmpSolver(Mat<Scalar> dictionary)
    : dictionary_(std::move(dictionary)) {
  if (dictionary_.rows() < 1 || dictionary_.cols() < 1) {
    throw InvalidParameter("OmpSolver: empty dictionary");
  }
  gram_ = dictionary_.adjoint() * dictionary_;
  inv_norms2_ = gram_.diagonal().real().cwiseInverse();
  for (Eigen::Index j = 0; j < inv_norms2_.size(); ++j) {
    if (!std::isfinite(inv_norms2_[j]) || !(inv_norms2_[j] > 0.0)) {
      throw InvalidParameter("OmpSolver: dictionary column " + std::to_string(j) +
                             " is zero");
    }
  }
}

template <typename Scalar>
OmpResult OmpSolver<Scalar>::solve(const Eigen::VectorXcd& y,
                                   const OmpStop& stop) const {
  if (y.size() != dictionary_.rows()) {
    throw DimensionMismatch("omp: y has length " + std::to_string(y.size()) +
                            ", dictionary has " +
                            std::to_string(dictionary_.rows()) + " rows");
  }
  if (stop.max_atoms < 0 || !(stop.residual_tol >= 0.0)) {
    throw InvalidParameter("omp: max_atoms and residual_tol must be >= 0");
  }
  const Eigen::Index n = atoms();
  const Eigen::Index budget =
      std::min<Eigen::Index>({stop.max_atoms, n, dictionary_.rows()});

  const Mat<Scalar> signal = to_columns<Scalar>(y);
  const Eigen::Index q = signal.cols();
  const Mat<Scalar> projections = dictionary_.adjoint() * signal;  // n x q
  const double y_norm2 = signal.squaredNorm();
  const double y_norm = std::sqrt(y_norm2);
  const double target = stop.residual_tol * y_norm;

  // With G_S = L L^H the Cholesky factor of the support's Gram block:
  //   z = L^{-1} A_S^H y, the signal in an orthonormal basis of span(A_S);
  //   B = G_{:,S} L^{-H}, the Gram of every atom against that basis.
  // Then A^H r = A^H y - B z and ||r||^2 = ||y||^2 - ||z||^2, and both grow
  // by one column / row per selected atom.
  std::vector<Eigen::Index> support;
  std::vector<double> residual_norms{y_norm};
  std::vector<bool> selected(static_cast<std::size_t>(n), false);
  Mat<Scalar> chol = Mat<Scalar>::Zero(budget, budget);
  Mat<Scalar> basis_gram(n, budget);
  Mat<Scalar> z(budget, q);
  Mat<Scalar> correlation = projections;
  double residual2 = y_norm2;

  auto support_coeffs = [&]() {
    const auto size = static_cast<Eigen::Index>(support.size());
    Mat<Scalar> coeffs = z.topRows(size);
    chol.topLeftCorner(size, size)
        .template triangularView<Eigen::Lower>()
        .adjoint()
        .solveInPlace(coeffs);
    return coeffs;
  };
  auto finish = [&]() {
    return dense_result<Scalar>(n, support, support_coeffs(), residual_norms);
  };
  // ||y||^2 - ||z||^2 carries an absolute error near eps ||y||^2, so below
  // this level the residual is recomputed from the refit coefficients.
  const double cancellation_floor = 1e-6 * y_norm2;
  auto explicit_residual2 = [&]() {
    const Mat<Scalar> coeffs = support_coeffs();
    Mat<Scalar> r = signal;
    for (std::size_t i = 0; i < support.size(); ++i) {
      r.noalias() -= dictionary_.col(support[i]) * coeffs.row(static_cast<Eigen::Index>(i));
    }
    return r.squaredNorm();
  };

  if (y_norm <= target || y_norm == 0.0) return finish();

  while (static_cast<Eigen::Index>(support.size()) < budget) {
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (selected[static_cast<std::size_t>(j)]) continue;
      const double score = correlation.row(j).squaredNorm() * inv_norms2_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;  // residual orthogonal to every remaining atom

    const auto k = static_cast<Eigen::Index>(support.size());
    // Row k of L is w^H with w = L^{-1} G_{S,best}, which is row `best` of B.
    const Vec<Scalar> w = basis_gram.row(best).head(k).adjoint();
    const double g = std::real(gram_(best, best));
    const double pivot = g - w.squaredNorm();
    if (!(pivot > 1e-12 * g)) break;  // atom lies in the span of the support
    const double d = std::sqrt(pivot);

    chol.row(k).head(k) = w.adjoint();
    chol(k, k) = Scalar(d);
    basis_gram.col(k) = gram_.col(best);
    basis_gram.col(k).noalias() -= basis_gram.leftCols(k) * w;
    basis_gram.col(k) /= d;
    z.row(k) = projections.row(best);
    z.row(k).noalias() -= w.adjoint() * z.topRows(k);
    z.row(k) /= d;
    correlation.noalias() -= basis_gram.col(k) * z.row(k);

    support.push_back(best);
    selected[static_cast<std::size_t>(best)] = true;

    double next_residual2 = std::max(0.0, residual2 - z.row(k).squaredNorm());
    if (next_residual2 < cancellation_floor) next_residual2 = explicit_residual2();
    if (!std::isfinite(next_residual2) ||
        next_residual2 > residual2 * (1.0 + 1e-9) + 1e-14 * y_norm2) {
      support.pop_back();
      throw RecoveryError("omp: residual failed to decrease at atom " +
                              std::to_string(k + 1),
                          finish());
    }
    residual2 = next_residual2;
    residual_norms.push_back(std::sqrt(residual2));
    if (std::sqrt(residual2) <= target) break;
  }
  return finish();
}

template class OmpSolver<double>;
template class OmpSolver<std::complex<double>>;

OmpResult omp(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& dictionary,
              const OmpStop& stop) {
  return OmpSolver<std::complex<double>>(dictionary).solve(y, stop);
}

OmpResult omp(const Eigen::VectorXcd& y, const Eigen::MatrixXd& dictionary,
              const OmpStop& stop) {
  return OmpSolver<double>(dictionary).solve(y, stop);
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

CsCodec::CsCodec(Eigen::MatrixXd phi, Basis basis, OmpStop stop)
    : phi_(std::move(phi)), basis_(basis), stop_(stop) {
  const Eigen::Index m = phi_.rows();
  const Eigen::Index n = phi_.cols();
  if (m < 1 || m > n) {
    throw InvalidParameter("CsCodec: Phi must be M x n with 0 < M <= n, got " +
                           std::to_string(m) + " x " + std::to_string(n));
  }
  if (stop_.max_atoms < 1 || !(stop_.residual_tol >= 0.0)) {
    throw InvalidParameter("CsCodec: max_atoms must be >= 1 and residual_tol >= 0");
  }
  const int len = static_cast<int>(n);
  switch (basis_) {
    case Basis::Dct:
      psi_real_ = dct_basis(len);
      real_solver_.emplace(phi_ * psi_real_.transpose());
      break;
    case Basis::Identity:
      psi_real_ = Eigen::MatrixXd::Identity(len, len);
      real_solver_.emplace(phi_);
      break;
    case Basis::Dft:
      psi_complex_ = dft_basis(len);
      complex_solver_.emplace(phi_.cast<std::complex<double>>() * psi_complex_.adjoint());
      break;
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(phi_.data(), sizeof(double) * static_cast<std::size_t>(phi_.size()), h);
  const int tag = static_cast<int>(basis_);
  h = fnv1a(&tag, sizeof tag, h);
  id_ = h;
}

CsCodec CsCodec::gaussian(Rng& rng, int m, int n, Basis basis, OmpStop stop) {
  return CsCodec(gaussian_phi(rng, m, n), basis, stop);
}

Eigen::MatrixXcd CsCodec::psi() const {
  if (basis_ == Basis::Dft) return psi_complex_;
  return psi_real_.cast<std::complex<double>>();
}

CompressedReport CsCodec::compress(const Eigen::VectorXcd& x) const {
  if (x.size() != phi_.cols()) {
    throw DimensionMismatch("compress: x has length " + std::to_string(x.size()) +
                            ", codec expects " + std::to_string(phi_.cols()));
  }
  CompressedReport out;
  out.y.resize(phi_.rows());
  out.y.real() = phi_ * x.real();
  out.y.imag() = phi_ * x.imag();
  out.codec_id = id_;
  return out;
}

CompressedReport CsCodec::compress(const Eigen::VectorXd& x) const {
  if (x.size() != phi_.cols()) {
    throw DimensionMismatch("compress: x has length " + std::to_string(x.size()) +
                            ", codec expects " + std::to_string(phi_.cols()));
  }
  CompressedReport out;
  out.y = (phi_ * x).cast<std::complex<double>>();
  out.codec_id = id_;
  return out;
}

void CsCodec::check_report(const CompressedReport& report) const {
  if (report.codec_id != id_) {
    throw InvalidParameter("CsCodec: report was produced by a different codec");
  }
  if (report.y.size() != phi_.rows()) {
    throw DimensionMismatch("CsCodec: report has length " +
                            std::to_string(report.y.size()) + ", expected " +
                            std::to_string(phi_.rows()));
  }
}

OmpResult CsCodec::recover(const CompressedReport& report) const {
  check_report(report);
  if (real_solver_) return real_solver_->solve(report.y, stop_);
  return complex_solver_->solve(report.y, stop_);
}

Eigen::VectorXcd CsCodec::synthesize(const OmpResult& result) const {
  const Eigen::Index n = phi_.cols();
  if (result.coefficients.size() != n) {
    throw DimensionMismatch("synthesize: coefficient length mismatch");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j : result.support) {
    // Psi^H column j is the conjugated row j of Psi.
    if (basis_ == Basis::Dft) {
      out += psi_complex_.row(j).adjoint() * result.coefficients[j];
    } else {
      out += psi_real_.row(j).transpose().cast<std::complex<double>>() *
             result.coefficients[j];
    }
  }
  return out;
}

Eigen::VectorXcd reconstruct_raw(const CompressedReport& report,
                                 const CsCodec& codec) {
  return codec.synthesize(codec.recover(report));
}

double reconstruction_error(const CompressedReport& report, const CsCodec& codec,
                            const Eigen::VectorXcd& truth) {
  const Eigen::VectorXcd estimate = reconstruct_raw(report, codec);
  if (truth.size() != estimate.size()) {
    throw DimensionMismatch("reconstruction_error: truth length mismatch");
  }
  return (estimate - truth).squaredNorm();
}

namespace {

struct DecisionFit {
  OmpResult result;
  bool converged = false;
  double relative_residual = 0.0;
};

DecisionFit fit_decisions(const CsCodec& codec, const CompressedReport& report) {
  DecisionFit fit;
  try {
    fit.result = codec.recover(report);
  } catch (const RecoveryError& e) {
    fit.result = e.partial();
  }
  const double y_norm = report.y.norm();
  const double r = fit.result.residual_norms.empty() ? y_norm
                                                     : fit.result.residual_norms.back();
  fit.relative_residual = y_norm > 0.0 ? r / y_norm : 0.0;
  fit.converged = r <= codec.stop().residual_tol * y_norm;
  return fit;
}

// True when `a` explains its measurements at least as well as `b`.
bool better_fit(const DecisionFit& a, const DecisionFit& b) {
  if (a.converged != b.converged) return a.converged;
  if (a.converged) return a.result.support.size() <= b.result.support.size();
  return a.relative_residual <= b.relative_residual;
}

}  // namespace

DecisionVector reconstruct_decisions(const CompressedReport& report,
                                     const CsCodec& codec) {
  if (codec.basis() != Basis::Identity) {
    throw InvalidParameter("reconstruct_decisions: codec must use the identity basis");
  }
  // Phi 1 - y measures the complement 1 - u, which is sparse when u is dense.
  CompressedReport complement{
      codec.phi().rowwise().sum().cast<std::complex<double>>() - report.y,
      report.codec_id};
  const DecisionFit direct = fit_decisions(codec, report);
  const DecisionFit flipped = fit_decisions(codec, complement);

  const bool use_direct = better_fit(direct, flipped);
  const OmpResult& result = use_direct ? direct.result : flipped.result;
  const std::uint8_t base = use_direct ? 0 : 1;
  DecisionVector u = DecisionVector::Constant(codec.length(), base);
  for (Eigen::Index j : result.support) {
    const bool one = result.coefficients[j].real() > 0.5;
    u[j] = static_cast<std::uint8_t>(one ? 1 - base : base);
  }
  return u;
}

}  // namespace cirauth
