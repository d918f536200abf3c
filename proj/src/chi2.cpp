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

#include <cmath>
#include <limits>
#include <string>

#include "cirauth/errors.hpp"

namespace cirauth {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// log(x^a e^-x / Gamma(a)), the common prefactor of both expansions.
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_args(double x, int dof, const char* who) {
  if (dof < 1) {
    throw InvalidParameter(std::string(who) + ": dof must be >= 1, got " +
                           std::to_string(dof));
  }
  if (!(x >= 0.0)) {
    throw InvalidParameter(std::string(who) + ": x must be >= 0, got " +
                           std::to_string(x));
  }
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw InvalidParameter("gamma_p: domain");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw InvalidParameter("gamma_q: domain");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double chi2_cdf(double x, int dof) {
  check_args(x, dof, "chi2_cdf");
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(double x, int dof) {
  check_args(x, dof, "chi2_sf");
  return gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double p, int dof) {
  if (dof < 1) {
    throw InvalidParameter("chi2_quantile: dof must be >= 1, got " +
                           std::to_string(dof));
  }
  if (!(p >= 0.0 && p < 1.0)) {
    throw InvalidParameter("chi2_quantile: p must lie in [0, 1), got " +
                           std::to_string(p));
  }
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = dof + 40.0 * std::sqrt(2.0 * dof);
  // The bracket covers every p the cdf can distinguish from 1 at small dof;
  // extend it for p pathologically close to 1.
  while (chi2_cdf(hi, dof) < p) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (chi2_cdf(mid, dof) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cirauth
