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

namespace cirauth {

/// Regularized lower incomplete gamma P(a, x). Series below x = a + 1,
/// Lentz continued fraction for the complement above.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation in the upper tail.
double gamma_q(double a, double x);

/// P(chi2(dof) <= x). Throws InvalidParameter for x < 0 or dof < 1.
double chi2_cdf(double x, int dof);

/// P(chi2(dof) > x), accurate for tail probabilities far below 1e-16.
double chi2_sf(double x, int dof);

/// Inverse of chi2_cdf for p in [0, 1): bisection on
/// [0, dof + 40 sqrt(2 dof)], at most 200 halvings.
double chi2_quantile(double p, int dof);

}  // namespace cirauth
