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

#include <string_view>

#include <Eigen/Core>

#include "cirauth/linalg.hpp"
#include "cirauth/rng.hpp"

namespace cirauth {

/// Which transmitter holds the sensing channel in a timeslot.
enum class Occupant { Alice, Eve };

std::string_view to_string(Occupant occupant);

/// Receive-side channel geometry: N Bob nodes each observing an L-tap CIR.
struct ChannelConfig {
  int n_nodes = 10;
  int n_taps = 6;
  double rho = 0.9;
  Eigen::VectorXd pdp;  ///< per-tap variance, length n_taps
  bool normalize_kronecker = true;

  /// Uniform power-delay profile with unit total energy (each tap 1/L).
  static ChannelConfig uniform(int n_nodes, int n_taps, double rho,
                               bool normalize_kronecker = true);

  /// Throws InvalidParameter on any out-of-range field.
  void validate() const;
};

/// [R]_{ij} = rho^{|i-j|}.
template <typename Scalar = double>
Mat<Scalar> exp_correlation_matrix(int n, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidParameter("exp_correlation_matrix: rho must lie in [0, 1], got " +
                           std::to_string(rho));
  }
  if (n < 1) throw InvalidParameter("exp_correlation_matrix: n must be >= 1");
  Mat<Scalar> r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // std::pow(0, 0) == 1 keeps the diagonal at one for rho = 0.
      r(i, j) = Scalar(std::pow(rho, std::abs(i - j)));
    }
  }
  return r;
}

/// Channel matrices for both candidate transmitters. Column n is the CIR
/// seen by Bob n.
struct ChannelEnsemble {
  Eigen::MatrixXcd h_ab;  ///< L x N, Alice -> Bobs
  Eigen::MatrixXcd h_eb;  ///< L x N, Eve -> Bobs

  const Eigen::MatrixXcd& of(Occupant occupant) const {
    return occupant == Occupant::Alice ? h_ab : h_eb;
  }
};

/**
 * Validated config plus its precomputed mixing matrix.
 *
 * A draw is H = c * X * U where X has independent CN(0, pdp[k]) entries in
 * row k, U is the upper Cholesky factor of R_B (so U^H U = R_B and the rows
 * of H have covariance R_B), and c is 1/sqrt(tr R_B) when normalisation is
 * enabled, else 1.
 */
class ChannelModel {
 public:
  explicit ChannelModel(ChannelConfig config);

  const ChannelConfig& config() const { return config_; }
  const Eigen::MatrixXd& correlation() const { return correlation_; }

  /// One L x N matrix with the configured column correlation.
  Eigen::MatrixXcd draw_matrix(Rng& rng) const;

  /// Independent Alice and Eve matrices, Alice first.
  ChannelEnsemble draw(Rng& rng) const;

 private:
  ChannelConfig config_;
  Eigen::MatrixXd correlation_;
  Eigen::MatrixXd mixing_;  // c * U
  Eigen::VectorXd tap_std_;
};

ChannelEnsemble draw_channel(Rng& rng, const ChannelConfig& config);

/**
 * Measurement noise per node: v_n ~ CN(0, sigma2[n] * shape).
 *
 * `shape` is (S^H S)^{-1} for training matrix S; identity by default.
 */
class NoiseModel {
 public:
  /// Same sigma2 at every node, identity shape.
  static NoiseModel homogeneous(int n_nodes, int n_taps, double sigma2);

  NoiseModel(Eigen::VectorXd sigma2, Eigen::MatrixXcd shape);

  int n_nodes() const { return static_cast<int>(sigma2_.size()); }
  int n_taps() const { return static_cast<int>(shape_.rows()); }
  const Eigen::VectorXd& sigma2() const { return sigma2_; }

  /// Sigma_n = sigma2[n] * shape.
  Eigen::MatrixXcd covariance(int node) const;

  /// Sigma_* = blkdiag(Sigma_1, ..., Sigma_N).
  Eigen::MatrixXcd stacked_covariance() const;

  /// r^H Sigma_n^{-1} r for one node's L-vector.
  double node_quadratic_form(int node,
                             const Eigen::Ref<const Eigen::VectorXcd>& r) const;

  /// r^H Sigma_*^{-1} r for a stacked N*L vector.
  double stacked_quadratic_form(const Eigen::VectorXcd& r) const;

  /// Draw of v_n for one node.
  Eigen::VectorXcd sample_node(Rng& rng, int node) const;

 private:
  Eigen::VectorXd sigma2_;
  Eigen::MatrixXcd shape_;
  Eigen::MatrixXcd shape_chol_;
  bool identity_shape_;
};

double snr_db_to_sigma2(double snr_db);

/// One noisy observation of the occupant's CIRs, stacked node-major.
struct MeasurementBatch {
  Eigen::VectorXcd z_star;  ///< length N*L: node 1 taps 1..L, node 2, ...
  Occupant truth_label;
};

/// Columns of an L x N matrix concatenated node-major.
Eigen::VectorXcd stack(const Eigen::MatrixXcd& columns);
Eigen::MatrixXcd unstack(const Eigen::VectorXcd& stacked, int n_taps);

MeasurementBatch measure(Rng& rng, const ChannelEnsemble& ensemble,
                         Occupant occupant, const NoiseModel& noise);

}  // namespace cirauth
