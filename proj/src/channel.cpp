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

#include "cirauth/channel.hpp"

#include <cmath>
#include <string>

#include "cirauth/errors.hpp"

namespace cirauth {

std::string_view to_string(Occupant occupant) {
  return occupant == Occupant::Alice ? "alice" : "eve";
}

ChannelConfig ChannelConfig::uniform(int n_nodes, int n_taps, double rho,
                                     bool normalize_kronecker) {
  ChannelConfig cfg;
  cfg.n_nodes = n_nodes;
  cfg.n_taps = n_taps;
  cfg.rho = rho;
  cfg.normalize_kronecker = normalize_kronecker;
  if (n_taps >= 1) cfg.pdp = Eigen::VectorXd::Constant(n_taps, 1.0 / n_taps);
  return cfg;
}

void ChannelConfig::validate() const {
  if (n_nodes < 1) throw InvalidParameter("channel: n_nodes must be >= 1");
  if (n_taps < 1) throw InvalidParameter("channel: n_taps must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidParameter("channel: rho must lie in [0, 1], got " +
                           std::to_string(rho));
  }
  if (pdp.size() != n_taps) {
    throw InvalidParameter("channel: pdp has " + std::to_string(pdp.size()) +
                           " entries, expected n_taps = " +
                           std::to_string(n_taps));
  }
  if ((pdp.array() < 0.0).any() || !pdp.allFinite()) {
    throw InvalidParameter("channel: pdp entries must be finite and >= 0");
  }
}

ChannelModel::ChannelModel(ChannelConfig config) : config_(std::move(config)) {
  config_.validate();
  correlation_ = exp_correlation_matrix<double>(config_.n_nodes, config_.rho);
  mixing_ = cholesky(correlation_).transpose();
  if (config_.normalize_kronecker) {
    mixing_ /= std::sqrt(correlation_.trace());
  }
  tap_std_ = config_.pdp.cwiseSqrt();
}

Eigen::MatrixXcd ChannelModel::draw_matrix(Rng& rng) const {
  const int taps = config_.n_taps;
  const int nodes = config_.n_nodes;
  Eigen::MatrixXcd iid(taps, nodes);
  for (int n = 0; n < nodes; ++n) {
    for (int k = 0; k < taps; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      iid(k, n) = std::complex<double>(re, im) * (tap_std_[k] * M_SQRT1_2);
    }
  }
  return iid * mixing_;
}

ChannelEnsemble ChannelModel::draw(Rng& rng) const {
  ChannelEnsemble out;
  out.h_ab = draw_matrix(rng);
  out.h_eb = draw_matrix(rng);
  return out;
}

ChannelEnsemble draw_channel(Rng& rng, const ChannelConfig& config) {
  return ChannelModel(config).draw(rng);
}

double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

NoiseModel NoiseModel::homogeneous(int n_nodes, int n_taps, double sigma2) {
  if (n_nodes < 1 || n_taps < 1) {
    throw InvalidParameter("NoiseModel: n_nodes and n_taps must be >= 1");
  }
  return NoiseModel(Eigen::VectorXd::Constant(n_nodes, sigma2),
                    Eigen::MatrixXcd::Identity(n_taps, n_taps));
}

NoiseModel::NoiseModel(Eigen::VectorXd sigma2, Eigen::MatrixXcd shape)
    : sigma2_(std::move(sigma2)), shape_(std::move(shape)) {
  if (sigma2_.size() < 1) throw InvalidParameter("NoiseModel: no nodes");
  if (!(sigma2_.array() > 0.0).all() || !sigma2_.allFinite()) {
    throw InvalidParameter("NoiseModel: every sigma2 must be finite and > 0");
  }
  if (shape_.rows() < 1 || shape_.rows() != shape_.cols()) {
    throw DimensionMismatch("NoiseModel: shape must be square and non-empty");
  }
  shape_chol_ = cholesky(shape_);
  if ((shape_chol_.diagonal().array() == 0.0).any()) {
    throw DecompositionError("NoiseModel: shape must be positive definite");
  }
  identity_shape_ = shape_.isIdentity(0.0);
}

Eigen::MatrixXcd NoiseModel::covariance(int node) const {
  return sigma2_[node] * shape_;
}

Eigen::MatrixXcd NoiseModel::stacked_covariance() const {
  const Eigen::Index taps = n_taps();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(taps * n_nodes(), taps * n_nodes());
  for (int n = 0; n < n_nodes(); ++n) {
    out.block(n * taps, n * taps, taps, taps) = covariance(n);
  }
  return out;
}

double NoiseModel::node_quadratic_form(
    int node, const Eigen::Ref<const Eigen::VectorXcd>& r) const {
  if (r.size() != n_taps()) {
    throw DimensionMismatch("node_quadratic_form: expected " +
                            std::to_string(n_taps()) + " taps, got " +
                            std::to_string(r.size()));
  }
  if (identity_shape_) return r.squaredNorm() / sigma2_[node];
  const Eigen::VectorXcd w =
      shape_chol_.triangularView<Eigen::Lower>().solve(r);
  return w.squaredNorm() / sigma2_[node];
}

double NoiseModel::stacked_quadratic_form(const Eigen::VectorXcd& r) const {
  const Eigen::Index taps = n_taps();
  if (r.size() != taps * n_nodes()) {
    throw DimensionMismatch("stacked_quadratic_form: expected length " +
                            std::to_string(taps * n_nodes()) + ", got " +
                            std::to_string(r.size()));
  }
  double total = 0.0;
  for (int n = 0; n < n_nodes(); ++n) {
    total += node_quadratic_form(n, r.segment(n * taps, taps));
  }
  return total;
}

Eigen::VectorXcd NoiseModel::sample_node(Rng& rng, int node) const {
  Eigen::VectorXcd g = sample_complex_gaussian(rng, n_taps(), sigma2_[node]);
  if (identity_shape_) return g;
  return shape_chol_ * g;
}

Eigen::VectorXcd stack(const Eigen::MatrixXcd& columns) {
  return columns.reshaped();
}

Eigen::MatrixXcd unstack(const Eigen::VectorXcd& stacked, int n_taps) {
  if (n_taps < 1 || stacked.size() % n_taps != 0) {
    throw DimensionMismatch("unstack: length " + std::to_string(stacked.size()) +
                            " is not a multiple of n_taps " +
                            std::to_string(n_taps));
  }
  return stacked.reshaped(n_taps, stacked.size() / n_taps);
}

MeasurementBatch measure(Rng& rng, const ChannelEnsemble& ensemble,
                         Occupant occupant, const NoiseModel& noise) {
  const Eigen::MatrixXcd& h = ensemble.of(occupant);
  if (h.rows() != noise.n_taps() || h.cols() != noise.n_nodes()) {
    throw DimensionMismatch("measure: channel is " + std::to_string(h.rows()) +
                            "x" + std::to_string(h.cols()) +
                            " but noise model is for " +
                            std::to_string(noise.n_taps()) + " taps x " +
                            std::to_string(noise.n_nodes()) + " nodes");
  }
  const Eigen::Index taps = h.rows();
  MeasurementBatch out{stack(h), occupant};
  for (int n = 0; n < noise.n_nodes(); ++n) {
    out.z_star.segment(n * taps, taps) += noise.sample_node(rng, n);
  }
  return out;
}

}  // namespace cirauth
