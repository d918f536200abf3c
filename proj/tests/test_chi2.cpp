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


#include "cirauth/chi2.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cirauth/errors.hpp"
#include "cirauth/rng.hpp"
#include "support.hpp"

namespace cirauth {
namespace {

// Reference values from scipy.special.gammainc / scipy.stats.chi2.
TEST(GammaP, ReferenceValues) {
  struct Case { double a, x, p; };
  const std::vector<Case> cases = {
      {0.5, 0.1, 0.34527915398142317},  {3.0, 2.5, 0.45618688411667035},
      {6.0, 6.0, 0.55432035863538853},  {60.0, 50.0, 0.092265051958932975},
      {600.0, 650.0, 0.97728564529948236}, {0.5, 30.0, 0.99999999999999056},
  };
  for (const Case& c : cases) {
    EXPECT_NEAR(gamma_p(c.a, c.x), c.p, 1e-12) << "a=" << c.a << " x=" << c.x;
    EXPECT_NEAR(gamma_q(c.a, c.x), 1.0 - c.p, 1e-12) << "a=" << c.a << " x=" << c.x;
  }
}

TEST(Chi2Cdf, Examples) {
  EXPECT_EQ(chi2_cdf(0.0, 5), 0.0);
  EXPECT_NEAR(chi2_cdf(26.2, 12), 0.990, 5e-4);
  EXPECT_NEAR(chi2_cdf(26.2, 12), 0.989944363259458, 1e-10);
  EXPECT_NEAR(chi2_cdf(2.0, 2), 1.0 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(chi2_cdf(3.841458820694124, 1), 0.95, 1e-10);
  EXPECT_NEAR(chi2_cdf(146.567, 120), 0.94999791522447719, 1e-10);
  EXPECT_NEAR(chi2_cdf(1300.0, 1200), 0.97728564529948236, 1e-10);
}

TEST(Chi2Cdf, SurvivalComplements) {
  for (int dof : {1, 2, 12, 120}) {
    for (double x : {0.5, 5.0, 50.0, 200.0}) {
      EXPECT_NEAR(chi2_cdf(x, dof) + chi2_sf(x, dof), 1.0, 1e-14);
    }
  }
  // Far tail keeps relative precision in the survival function.
  EXPECT_GT(chi2_sf(400.0, 12), 0.0);
  EXPECT_LT(chi2_sf(400.0, 12), 1e-70);
}

TEST(Chi2Cdf, Errors) {
  EXPECT_THROW(chi2_cdf(-1.0, 3), InvalidParameter);
  EXPECT_THROW(chi2_cdf(1.0, 0), InvalidParameter);
  EXPECT_THROW(chi2_sf(-0.1, 3), InvalidParameter);
}

TEST(Chi2Cdf, MonotoneInX) {
  for (int dof : {1, 2, 3, 12, 120, 1200}) {
    double prev = 0.0;
    for (double x = 0.0; x <= 2.0 * dof + 100.0; x += 0.37) {
      const double f = chi2_cdf(x, dof);
      ASSERT_GE(f, prev) << "dof=" << dof << " x=" << x;
      prev = f;
    }
  }
}

TEST(Chi2Quantile, Examples) {
  EXPECT_NEAR(chi2_quantile(0.99, 12), 26.217, 0.01);
  EXPECT_NEAR(chi2_quantile(0.999, 12), 32.909, 0.01);
  EXPECT_NEAR(chi2_quantile(0.9999, 12), 39.134403881950, 1e-6);
  EXPECT_NEAR(chi2_quantile(0.99, 120), 158.950165897306, 1e-6);
  EXPECT_NEAR(chi2_quantile(0.999, 1200), 1357.106101386200, 1e-5);
  EXPECT_EQ(chi2_quantile(0.0, 7), 0.0);
}

TEST(Chi2Quantile, Errors) {
  EXPECT_THROW(chi2_quantile(1.0, 12), InvalidParameter);
  EXPECT_THROW(chi2_quantile(-0.1, 12), InvalidParameter);
  EXPECT_THROW(chi2_quantile(0.5, 0), InvalidParameter);
}

TEST(Chi2Quantile, RoundTripGrid) {
  for (int dof : {1, 2, 5, 12, 60, 120, 600, 1200}) {
    for (double p : {1e-4, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999, 0.9999}) {
      EXPECT_NEAR(chi2_cdf(chi2_quantile(p, dof), dof), p, 1e-9)
          << "dof=" << dof << " p=" << p;
    }
    for (double x : {0.3, 1.0, 0.8 * dof, 1.0 * dof, 1.3 * dof}) {
      const double p = chi2_cdf(x, dof);
      if (p <= 1e-6 || p >= 1.0 - 1e-6) continue;  // flat cdf, x ill-conditioned
      EXPECT_NEAR(chi2_quantile(p, dof), x, 1e-8 * std::max(1.0, x))
          << "dof=" << dof << " x=" << x;
    }
  }
}

// 2 sum |g_i|^2 with g_i ~ CN(0, 1) is chi2(2k).
TEST(Chi2Cdf, KolmogorovSmirnovAgainstSampling) {
  for (int k : {1, 6}) {
    Rng rng(2024, static_cast<std::uint64_t>(k));
    std::vector<double> sample(100000);
    for (double& s : sample) s = 2.0 * sample_complex_gaussian(rng, k, 1.0).squaredNorm();
    const double d = testing::ks_statistic(sample, [k](double x) { return chi2_cdf(x, 2 * k); });
    EXPECT_GT(testing::ks_pvalue(d, sample.size()), 0.001) << "k=" << k << " D=" << d;
  }
}

TEST(KsHelper, RejectsWrongDistribution) {
  Rng rng(8, 8);
  std::vector<double> sample(20000);
  for (double& s : sample) s = 2.0 * sample_complex_gaussian(rng, 6, 1.0).squaredNorm();
  const double d = testing::ks_statistic(sample, [](double x) { return chi2_cdf(x, 13); });
  EXPECT_LT(testing::ks_pvalue(d, sample.size()), 0.001);
}

}  // namespace
}  // namespace cirauth
