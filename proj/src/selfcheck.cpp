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

#include <cmath>
#include <cstdio>

#include "cirauth/chi2.hpp"
#include "cirauth/config.hpp"
#include "cirauth/detect.hpp"
#include "cirauth/linalg.hpp"
#include "cirauth/rng.hpp"
#include "cirauth/sparse.hpp"

namespace cirauth {

namespace {

constexpr std::uint64_t kSelfcheckSeed = 20240521;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SelfcheckResult chi2_round_trip(double perturbation) {
  double worst = 0.0;
  for (int dof : {1, 2, 12, 120, 1200}) {
    for (double p : {1e-3, 0.01, 0.5, 0.99, 0.999, 0.9999}) {
      const double x = chi2_quantile(p, dof) + perturbation;
      worst = std::max(worst, std::abs(chi2_cdf(x, dof) - p));
    }
  }
  const double table = chi2_quantile(0.99, 12) + perturbation;
  const bool ok = worst < 1e-8 && std::abs(table - 26.217) < 0.01;
  return {"chi2_round_trip", ok,
          "max |cdf(quantile(p)) - p| = " + sci(worst) + ", q(0.99, 12) = " + sci(table)};
}

SelfcheckResult cholesky_round_trip() {
  Rng rng(kSelfcheckSeed, 1);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXcd b(8, 8);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = {rng.normal(), rng.normal()};
    const Eigen::MatrixXcd a = b * b.adjoint();
    const Eigen::MatrixXcd l = cholesky(a);
    worst = std::max(worst, (l * l.adjoint() - a).norm() / a.norm());
  }
  return {"cholesky_round_trip", worst <= 1e-10, "max relative error = " + sci(worst)};
}

SelfcheckResult omp_single_atom() {
  Rng rng(kSelfcheckSeed, 2);
  const Eigen::MatrixXd a = gaussian_phi(rng, 40, 100);
  const Eigen::VectorXcd y = (3.0 * a.col(7)).cast<std::complex<double>>();
  const OmpResult r = omp(y, a, OmpStop{5, 1e-9});
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(100);
  expected[7] = 3.0;
  const double err = (r.coefficients - expected).norm();
  const bool ok = r.support.size() == 1 && r.support[0] == 7 && err < 1e-10;
  return {"omp_single_atom", ok, "coefficient error = " + sci(err)};
}

SelfcheckResult fusion_identities() {
  long violations = 0;
  for (int n = 1; n <= 10; ++n) {
    const FusionRule weighted = FusionRule::of(FusionKind::WeightedAverage);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      DecisionVector u(n);
      for (int i = 0; i < n; ++i) u[i] = (mask >> i) & 1u;
      const bool any = fuse(u, FusionRule::of(FusionKind::Or)) == Decision::H1;
      const bool all = fuse(u, FusionRule::of(FusionKind::And)) == Decision::H1;
      const bool maj = fuse(u, FusionRule::of(FusionKind::Majority)) == Decision::H1;
      const bool avg = fuse(u, weighted) == Decision::H1;
      if ((maj && !any) || (all && !maj) || (avg != maj)) ++violations;
    }
  }
  return {"fusion_identities", violations == 0,
          std::to_string(violations) + " violations over all inputs with N <= 10"};
}

}  // namespace

std::vector<SelfcheckResult> run_selfcheck(const SelfcheckOptions& options) {
  return {chi2_round_trip(options.quantile_perturbation), cholesky_round_trip(),
          omp_single_atom(), fusion_identities()};
}

}  // namespace cirauth
