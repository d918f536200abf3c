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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cirauth/channel.hpp"

namespace cirauth {

enum class Decision { H0, H1 };

/**
 * How the whitened quadratic form is reported.
 *
 * For v ~ CN(0, Sigma), v^H Sigma^{-1} v has mean L and twice it is exactly
 * chi2(2L). PaperChi2 reports the doubled value, so thresholds solved from
 * chi2(2L) or chi2(2NL) quantiles hit their nominal false-alarm rates.
 */
enum class StatisticScale { PaperChi2, RawQuadratic };

/// Chi-squared threshold with upper-tail probability alpha.
/// Throws InvalidParameter unless 0 < alpha < 1 and dof >= 1.
double solve_threshold(double alpha, int dof);

/// Thresholds for the fusion-center test or the per-node tests.
struct DetectorConfig {
  StatisticScale scale = StatisticScale::PaperChi2;
  std::vector<double> thresholds;
  std::vector<double> target_pfa;  ///< empty when thresholds are user-supplied

  static DetectorConfig from_pfa(std::vector<double> alphas, int dof,
                                 StatisticScale scale = StatisticScale::PaperChi2);
  static DetectorConfig from_thresholds(std::vector<double> thresholds,
                                        StatisticScale scale = StatisticScale::PaperChi2);
};

inline double apply_scale(double quadratic_form, StatisticScale scale) {
  return scale == StatisticScale::PaperChi2 ? 2.0 * quadratic_form
                                            : quadratic_form;
}

/// (z - h)^H Sigma^{-1} (z - h) for a dense HPD Sigma, scaled.
double quadratic_statistic(const Eigen::VectorXcd& z, const Eigen::VectorXcd& h,
                           const Eigen::MatrixXcd& sigma, StatisticScale scale);

/// Fusion-center statistic over the stacked measurement, Sigma_* taken
/// block-diagonal from the noise model.
double fc_raw_statistic(const Eigen::VectorXcd& z_star,
                        const Eigen::VectorXcd& h_ab_star,
                        const NoiseModel& noise, StatisticScale scale);

/// H1 iff statistic > delta; equality accepts.
Decision threshold_decide(double statistic, double delta);

inline Decision fc_raw_decide(double statistic, double delta) {
  return threshold_decide(statistic, delta);
}

/// Hard decision of one node: 1 declares Eve.
int local_decide(const Eigen::VectorXcd& z_n, const Eigen::VectorXcd& h_ab_n,
                 const Eigen::MatrixXcd& sigma_n, double delta_n,
                 StatisticScale scale);

using DecisionVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

enum class FusionKind { Or, And, Majority, WeightedAverage };

std::string_view to_string(FusionKind kind);

struct FusionRule {
  FusionKind kind = FusionKind::Majority;
  Eigen::VectorXd weights;  ///< WeightedAverage only; empty means uniform
  double avg_threshold = 0.5;

  static FusionRule of(FusionKind kind) { return {kind, {}, 0.5}; }
};

/// Throws InvalidParameter on an empty vector or malformed weights.
Decision fuse(const DecisionVector& u_star, const FusionRule& rule);

/// Fused false-alarm probability for n iid node decisions with rate alpha.
/// WeightedAverage has no closed form and is rejected.
double fused_pfa_analytic(double alpha, int n, FusionKind kind);

}  // namespace cirauth
