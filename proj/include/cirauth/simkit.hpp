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
#include <string>
#include <string_view>
#include <vector>

#include "cirauth/channel.hpp"
#include "cirauth/detect.hpp"
#include "cirauth/rng.hpp"
#include "cirauth/sparse.hpp"

namespace cirauth {

/// Reporting strategy from the Bob nodes to the fusion center.
enum class Scheme {
  FcRaw,          ///< raw measurements, one chi-squared test at the FC
  LocalFusion,    ///< per-node tests, hard decisions fused at the FC
  FcRawCs,        ///< raw measurements compressed before reporting
  LocalFusionCs,  ///< decision vector compressed before reporting
};

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

inline bool is_compressed(Scheme s) {
  return s == Scheme::FcRawCs || s == Scheme::LocalFusionCs;
}
inline bool is_local(Scheme s) {
  return s == Scheme::LocalFusion || s == Scheme::LocalFusionCs;
}

struct CsSettings {
  int measurements = 480;
  Basis basis = Basis::Dct;
  int max_atoms = 0;  ///< 0 selects the scheme default
  double residual_tol = 1e-6;
  bool compare_uncompressed = true;  ///< also score the uncompressed scheme on the same trials
};

/// Default OMP atom budget: ceil(M/8) for raw vectors, ceil(M/4) for
/// decision vectors.
int default_max_atoms(Scheme scheme, int measurements);

struct Scenario {
  Scheme scheme = Scheme::FcRaw;
  ChannelConfig channel = ChannelConfig::uniform(10, 6, 0.9);
  DetectorConfig detector;
  std::vector<FusionRule> rules;  ///< local schemes only
  bool single_node_baseline = false;
  CsSettings cs;
  std::vector<double> snr_db;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;

  /// Degrees of freedom of the null distribution the thresholds refer to:
  /// 2NL at the fusion center, 2L at a node.
  int null_dof() const;

  /// Length of the vector the relay compresses.
  int report_length() const;

  void validate() const;
};

/// Canonical `key = value` lines describing every resolved field.
std::vector<std::string> canonical_config(const Scenario& scenario);

/// FNV-1a 64 of the canonical config, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

/// One output curve: a scheme, a threshold and (local schemes) a rule.
struct CurveSpec {
  Scheme scheme;
  std::string label;
  std::size_t threshold_index;
  int rule_index;  ///< -1: no rule (FC test) or single-node baseline
  bool single_node = false;
};

struct DetectionCurve {
  Scheme scheme;
  std::string label;
  std::vector<double> snr_db;
  std::vector<double> p_d;
  std::vector<double> p_d_stderr;
  std::vector<double> p_fa;
  std::vector<double> p_fa_stderr;
  std::int64_t trials = 0;
  std::string config_digest;
};

/**
 * A validated scenario with its channel model and codec built.
 *
 * Trial (snr index i, trial t, occupant o) always draws from the substream
 * trial_stream(i, t, o) of the scenario seed, so results do not depend on
 * how trials are distributed over workers.
 */
class Experiment {
 public:
  explicit Experiment(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<CurveSpec>& curves() const { return curves_; }
  const CsCodec* codec() const { return codec_ ? &*codec_ : nullptr; }

  /// One end-to-end trial; the returned decisions parallel curves().
  std::vector<Decision> run_trial(Rng& rng, double snr_db, Occupant occupant) const;

  static std::uint64_t trial_stream(std::size_t snr_index, std::int64_t trial,
                                    Occupant occupant);
  /// Stream reserved for drawing the measurement matrix.
  static constexpr std::uint64_t kCodecStream = ~std::uint64_t{0};

  /// All curves, each from `trials` H1 (Eve) and `trials` H0 (Alice) trials
  /// per SNR point. Either every curve is produced or an exception escapes.
  std::vector<DetectionCurve> estimate(int workers = 1) const;

 private:
  Scenario scenario_;
  ChannelModel model_;
  std::optional<CsCodec> codec_;
  std::vector<CurveSpec> curves_;
};

inline std::vector<DetectionCurve> estimate_curve(const Scenario& scenario,
                                                  int workers = 1) {
  return Experiment(scenario).estimate(workers);
}

/// SNR where the curve first reaches target_pd, linearly interpolated in dB
/// between the bracketing grid points. Throws NotComparable if the curve
/// never reaches the target or already exceeds it at the first point.
double crossing_snr(const DetectionCurve& curve, double target_pd);

/// crossing_snr(a) - crossing_snr(b): extra SNR curve a needs.
double snr_margin(const DetectionCurve& a, const DetectionCurve& b,
                  double target_pd);

/// Indices i where p_d[i] falls below p_d[i-1] by more than `sigmas`
/// combined standard errors.
std::vector<std::size_t> nonmonotone_points(const DetectionCurve& curve,
                                            double sigmas = 3.0);

}  // namespace cirauth
