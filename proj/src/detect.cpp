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

#include "cirauth/detect.hpp"

#include <cmath>
#include <string>

#include "cirauth/chi2.hpp"
#include "cirauth/errors.hpp"
#include "cirauth/linalg.hpp"

namespace cirauth {

double solve_threshold(double alpha, int dof) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParameter("solve_threshold: alpha must lie in (0, 1), got " +
                           std::to_string(alpha));
  }
  return chi2_quantile(1.0 - alpha, dof);
}

DetectorConfig DetectorConfig::from_pfa(std::vector<double> alphas, int dof,
                                        StatisticScale scale) {
  DetectorConfig cfg;
  cfg.scale = scale;
  for (double a : alphas) cfg.thresholds.push_back(solve_threshold(a, dof));
  cfg.target_pfa = std::move(alphas);
  return cfg;
}

DetectorConfig DetectorConfig::from_thresholds(std::vector<double> thresholds,
                                               StatisticScale scale) {
  for (double d : thresholds) {
    if (!(d > 0.0)) {
      throw InvalidParameter("DetectorConfig: thresholds must be > 0, got " +
                             std::to_string(d));
    }
  }
  DetectorConfig cfg;
  cfg.scale = scale;
  cfg.thresholds = std::move(thresholds);
  return cfg;
}

double quadratic_statistic(const Eigen::VectorXcd& z, const Eigen::VectorXcd& h,
                           const Eigen::MatrixXcd& sigma, StatisticScale scale) {
  if (z.size() != h.size() || sigma.rows() != z.size()) {
    throw DimensionMismatch("quadratic_statistic: z, h and Sigma disagree in size");
  }
  const Eigen::VectorXcd r = z - h;
  const std::complex<double> q = r.dot(solve_hpd(sigma, r));
  const double mag = std::max(1.0, std::abs(q));
  if (std::abs(q.imag()) > 1e-10 * mag) {
    throw DecompositionError("quadratic_statistic: quadratic form is not real");
  }
  return apply_scale(std::max(0.0, q.real()), scale);
}

double fc_raw_statistic(const Eigen::VectorXcd& z_star,
                        const Eigen::VectorXcd& h_ab_star,
                        const NoiseModel& noise, StatisticScale scale) {
  if (z_star.size() != h_ab_star.size()) {
    throw DimensionMismatch("fc_raw_statistic: z_star has length " +
                            std::to_string(z_star.size()) + ", h_ab_star " +
                            std::to_string(h_ab_star.size()));
  }
  return apply_scale(noise.stacked_quadratic_form(z_star - h_ab_star), scale);
}

Decision threshold_decide(double statistic, double delta) {
  return statistic > delta ? Decision::H1 : Decision::H0;
}

int local_decide(const Eigen::VectorXcd& z_n, const Eigen::VectorXcd& h_ab_n,
                 const Eigen::MatrixXcd& sigma_n, double delta_n,
                 StatisticScale scale) {
  const double t = quadratic_statistic(z_n, h_ab_n, sigma_n, scale);
  return threshold_decide(t, delta_n) == Decision::H1 ? 1 : 0;
}

std::string_view to_string(FusionKind kind) {
  switch (kind) {
    case FusionKind::Or: return "or";
    case FusionKind::And: return "and";
    case FusionKind::Majority: return "majority";
    case FusionKind::WeightedAverage: return "weighted_average";
  }
  return "?";
}

Decision fuse(const DecisionVector& u_star, const FusionRule& rule) {
  const Eigen::Index n = u_star.size();
  if (n == 0) throw InvalidParameter("fuse: empty decision vector");
  if ((u_star.array() > 1).any()) {
    throw InvalidParameter("fuse: decisions must be 0 or 1");
  }
  const Eigen::Index ones = u_star.cast<Eigen::Index>().sum();
  bool h1 = false;
  switch (rule.kind) {
    case FusionKind::Or: h1 = ones > 0; break;
    case FusionKind::And: h1 = ones == n; break;
    case FusionKind::Majority: h1 = 2 * ones > n; break;
    case FusionKind::WeightedAverage: {
      if (!(rule.avg_threshold > 0.0 && rule.avg_threshold < 1.0)) {
        throw InvalidParameter("fuse: avg_threshold must lie in (0, 1)");
      }
      double score = 0.0;
      if (rule.weights.size() == 0) {
        score = static_cast<double>(ones) / static_cast<double>(n);
      } else {
        if (rule.weights.size() != n) {
          throw InvalidParameter("fuse: " + std::to_string(rule.weights.size()) +
                                 " weights for " + std::to_string(n) + " nodes");
        }
        if ((rule.weights.array() < 0.0).any() ||
            std::abs(rule.weights.sum() - 1.0) > 1e-9) {
          throw InvalidParameter("fuse: weights must be >= 0 and sum to 1");
        }
        score = rule.weights.dot(u_star.cast<double>());
      }
      h1 = score > rule.avg_threshold;
      break;
    }
  }
  return h1 ? Decision::H1 : Decision::H0;
}

double fused_pfa_analytic(double alpha, int n, FusionKind kind) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidParameter("fused_pfa_analytic: alpha must lie in [0, 1]");
  }
  if (n < 1) throw InvalidParameter("fused_pfa_analytic: n must be >= 1");
  switch (kind) {
    case FusionKind::Or: return -std::expm1(n * std::log1p(-alpha));
    case FusionKind::And: return std::pow(alpha, n);
    case FusionKind::Majority: {
      if (alpha == 0.0) return 0.0;
      if (alpha == 1.0) return 1.0;
      double tail = 0.0;
      for (int k = n / 2 + 1; k <= n; ++k) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                std::lgamma(n - k + 1.0) + k * std::log(alpha) +
                                (n - k) * std::log1p(-alpha);
        tail += std::exp(log_term);
      }
      return tail;
    }
    case FusionKind::WeightedAverage:
      break;
  }
  throw InvalidParameter("fused_pfa_analytic: no closed form for weighted_average");
}

}  // namespace cirauth
