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


#include "cirauth/simkit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cirauth/errors.hpp"
#include "support.hpp"

namespace cirauth {
namespace {

Scenario fc_raw_small() {
  Scenario s;
  s.scheme = Scheme::FcRaw;
  s.channel = ChannelConfig::uniform(4, 3, 0.5);
  s.detector = DetectorConfig::from_pfa({0.05, 0.01}, 24);
  s.snr_db = {0.0, 10.0};
  s.trials = 300;
  s.seed = 3;
  return s;
}

Scenario local_small() {
  Scenario s = fc_raw_small();
  s.scheme = Scheme::LocalFusion;
  s.detector = DetectorConfig::from_pfa({0.05}, 6);
  s.rules = {FusionRule::of(FusionKind::Or), FusionRule::of(FusionKind::Majority),
             FusionRule::of(FusionKind::And)};
  s.single_node_baseline = true;
  return s;
}

DetectionCurve synthetic(std::vector<double> snr, std::vector<double> pd) {
  DetectionCurve c{Scheme::FcRaw, "synthetic", snr, pd, {}, {}, {}, 1, ""};
  c.p_d_stderr.assign(pd.size(), 0.0);
  return c;
}

const DetectionCurve& find(const std::vector<DetectionCurve>& curves, Scheme scheme,
                           const std::string& label) {
  for (const DetectionCurve& c : curves) {
    if (c.scheme == scheme && c.label == label) return c;
  }
  throw std::runtime_error("no curve " + label);
}

TEST(Scheme, NamesRoundTrip) {
  for (Scheme s : {Scheme::FcRaw, Scheme::LocalFusion, Scheme::FcRawCs, Scheme::LocalFusionCs}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  EXPECT_FALSE(parse_scheme("fc-raw").has_value());
  EXPECT_TRUE(is_compressed(Scheme::FcRawCs));
  EXPECT_FALSE(is_compressed(Scheme::LocalFusion));
  EXPECT_TRUE(is_local(Scheme::LocalFusionCs));
}

TEST(Scenario, DerivedSizes) {
  Scenario s = fc_raw_small();
  EXPECT_EQ(s.null_dof(), 24);
  EXPECT_EQ(s.report_length(), 12);
  s.scheme = Scheme::LocalFusionCs;
  EXPECT_EQ(s.null_dof(), 6);
  EXPECT_EQ(s.report_length(), 4);
  EXPECT_EQ(default_max_atoms(Scheme::FcRawCs, 480), 60);
  EXPECT_EQ(default_max_atoms(Scheme::LocalFusionCs, 70), 18);
}

TEST(Scenario, Validation) {
  Scenario s = fc_raw_small();
  s.trials = 0;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s = fc_raw_small();
  s.snr_db.clear();
  EXPECT_THROW(s.validate(), InvalidParameter);
  s = fc_raw_small();
  s.detector.thresholds.clear();
  s.detector.target_pfa.clear();
  EXPECT_THROW(s.validate(), InvalidParameter);
  s = local_small();
  s.rules.clear();
  s.single_node_baseline = false;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s = local_small();
  s.scheme = Scheme::LocalFusionCs;
  s.cs.measurements = 4;
  s.cs.basis = Basis::Identity;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s.cs.measurements = 3;
  s.cs.basis = Basis::Dct;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s.cs.basis = Basis::Identity;
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(Experiment{[] { Scenario x = fc_raw_small(); x.trials = -1; return x; }()},
               InvalidParameter);
}

TEST(Scenario, DigestTracksResolvedConfig) {
  const Scenario a = fc_raw_small();
  Scenario b = a;
  EXPECT_EQ(scenario_digest(a), scenario_digest(b));
  EXPECT_EQ(scenario_digest(a).size(), 16u);
  b.seed = 4;
  EXPECT_NE(scenario_digest(a), scenario_digest(b));
  b = a;
  b.channel.rho = 0.51;
  EXPECT_NE(scenario_digest(a), scenario_digest(b));
}

TEST(Experiment, CurveLayout) {
  const Experiment fc(fc_raw_small());
  ASSERT_EQ(fc.curves().size(), 2u);
  EXPECT_EQ(fc.curves()[0].label, "pfa=0.05");
  EXPECT_EQ(fc.curves()[1].label, "pfa=0.01");
  EXPECT_EQ(fc.codec(), nullptr);

  const Experiment local(local_small());
  std::vector<std::string> labels;
  for (const CurveSpec& c : local.curves()) labels.push_back(c.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"or:pfa_n=0.05", "majority:pfa_n=0.05",
                                              "and:pfa_n=0.05", "single:pfa_n=0.05"}));

  Scenario cs = fc_raw_small();
  cs.scheme = Scheme::FcRawCs;
  cs.cs.measurements = 8;
  const Experiment compressed(cs);
  ASSERT_NE(compressed.codec(), nullptr);
  EXPECT_EQ(compressed.codec()->measurements(), 8);
  ASSERT_EQ(compressed.curves().size(), 4u);
  EXPECT_EQ(compressed.curves()[0].scheme, Scheme::FcRawCs);
  EXPECT_EQ(compressed.curves()[3].scheme, Scheme::FcRaw);
}

TEST(Experiment, TrialStreamsAreDistinct) {
  std::set<std::uint64_t> ids;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::int64_t t = 0; t < 50; ++t) {
      ids.insert(Experiment::trial_stream(i, t, Occupant::Alice));
      ids.insert(Experiment::trial_stream(i, t, Occupant::Eve));
    }
  }
  EXPECT_EQ(ids.size(), 400u);
  EXPECT_EQ(ids.count(Experiment::kCodecStream), 0u);
}

TEST(Experiment, NoiselessEveAlwaysDetected) {
  for (Scheme scheme : {Scheme::FcRaw, Scheme::LocalFusion}) {
    const Scenario s = scheme == Scheme::FcRaw ? fc_raw_small() : local_small();
    const Experiment e(s);
    for (std::int64_t t = 0; t < 20; ++t) {
      Rng eve(s.seed, Experiment::trial_stream(0, t, Occupant::Eve));
      for (Decision d : e.run_trial(eve, 300.0, Occupant::Eve)) ASSERT_EQ(d, Decision::H1);
    }
  }
}

// The whitened H0 statistic is 2 ||g||^2 whatever sigma2 is, so Alice sees the
// same decisions at every SNR on a given trial stream; shrinking the noise
// never drives false alarms to zero.
TEST(Experiment, AliceDecisionsIndependentOfSnr) {
  for (Scheme scheme : {Scheme::FcRaw, Scheme::LocalFusion}) {
    const Scenario s = scheme == Scheme::FcRaw ? fc_raw_small() : local_small();
    const Experiment e(s);
    int alarms = 0;
    for (std::int64_t t = 0; t < 200; ++t) {
      const std::uint64_t stream = Experiment::trial_stream(0, t, Occupant::Alice);
      Rng quiet(s.seed, stream), loud(s.seed, stream);
      const auto a = e.run_trial(quiet, 60.0, Occupant::Alice);
      ASSERT_EQ(a, e.run_trial(loud, -10.0, Occupant::Alice));
      alarms += a[0] == Decision::H1;
    }
    EXPECT_GT(alarms, 0);
  }
}

TEST(Experiment, TrialIsReproducible) {
  const Experiment e(local_small());
  Rng a(3, 99), b(3, 99);
  EXPECT_EQ(e.run_trial(a, 2.0, Occupant::Eve), e.run_trial(b, 2.0, Occupant::Eve));
}

TEST(Estimate, DeterministicAcrossWorkers) {
  Scenario s = local_small();
  s.scheme = Scheme::LocalFusionCs;
  s.channel = ChannelConfig::uniform(20, 3, 0.5);
  s.cs.measurements = 14;
  s.cs.basis = Basis::Identity;
  s.trials = 150;
  const auto one = estimate_curve(s, 1);
  const auto three = estimate_curve(s, 3);
  const auto again = estimate_curve(s, 1);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t c = 0; c < one.size(); ++c) {
    EXPECT_EQ(one[c].p_d, three[c].p_d);
    EXPECT_EQ(one[c].p_fa, three[c].p_fa);
    EXPECT_EQ(one[c].p_d, again[c].p_d);
    EXPECT_EQ(one[c].config_digest, scenario_digest(s));
  }
}

TEST(Estimate, CurveStructure) {
  const auto curves = estimate_curve(fc_raw_small());
  for (const DetectionCurve& c : curves) {
    ASSERT_EQ(c.snr_db.size(), 2u);
    ASSERT_EQ(c.p_d.size(), 2u);
    ASSERT_EQ(c.p_fa.size(), 2u);
    ASSERT_EQ(c.p_d_stderr.size(), 2u);
    ASSERT_EQ(c.p_fa_stderr.size(), 2u);
    EXPECT_EQ(c.trials, 300);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_GE(c.p_d[i], 0.0);
      EXPECT_LE(c.p_d[i], 1.0);
      EXPECT_NEAR(c.p_d_stderr[i], testing::binomial_sigma(c.p_d[i], 300), 1e-12);
    }
  }
}

TEST(Estimate, SingleTrial) {
  Scenario s = fc_raw_small();
  s.trials = 1;
  for (const DetectionCurve& c : estimate_curve(s)) {
    for (double p : c.p_d) EXPECT_TRUE(p == 0.0 || p == 1.0);
    for (double p : c.p_fa) EXPECT_TRUE(p == 0.0 || p == 1.0);
    for (double se : c.p_d_stderr) EXPECT_EQ(se, 0.0);
  }
}

TEST(Estimate, NullCalibrationAndThresholdOrder) {
  Scenario s = fc_raw_small();
  s.trials = 4000;
  s.snr_db = {-5.0, 5.0};
  const auto curves = estimate_curve(s);
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const double alpha = s.detector.target_pfa[k];
    for (double p : curves[k].p_fa) {
      EXPECT_NEAR(p, alpha, 5 * testing::binomial_sigma(alpha, 4000));
    }
  }
  // Same trials: the larger threshold can only remove H1 decisions.
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(curves[1].p_d[i], curves[0].p_d[i]);
}

TEST(Estimate, FusionDominance) {
  Scenario s = local_small();
  s.trials = 500;
  const auto curves = estimate_curve(s);
  const auto& or_c = find(curves, Scheme::LocalFusion, "or:pfa_n=0.05");
  const auto& maj = find(curves, Scheme::LocalFusion, "majority:pfa_n=0.05");
  const auto& and_c = find(curves, Scheme::LocalFusion, "and:pfa_n=0.05");
  for (std::size_t i = 0; i < s.snr_db.size(); ++i) {
    EXPECT_GE(or_c.p_d[i], maj.p_d[i]);
    EXPECT_GE(maj.p_d[i], and_c.p_d[i]);
    EXPECT_GE(or_c.p_fa[i], maj.p_fa[i]);
    EXPECT_GE(maj.p_fa[i], and_c.p_fa[i]);
  }
}

TEST(Margin, Crossings) {
  const DetectionCurve a = synthetic({0, 1, 2, 3}, {0.1, 0.5, 0.95, 1.0});
  EXPECT_DOUBLE_EQ(crossing_snr(a, 0.5), 1.0);
  EXPECT_NEAR(crossing_snr(a, 0.9), 1.0 + 0.4 / 0.45, 1e-12);
  EXPECT_DOUBLE_EQ(snr_margin(a, a, 0.9), 0.0);
  const DetectionCurve shifted = synthetic({0.5, 1.5, 2.5, 3.5}, {0.1, 0.5, 0.95, 1.0});
  EXPECT_NEAR(snr_margin(shifted, a, 0.9), 0.5, 1e-12);
}

TEST(Margin, NotComparable) {
  const DetectionCurve low = synthetic({0, 1, 2}, {0.1, 0.2, 0.3});
  const DetectionCurve high = synthetic({0, 1, 2}, {0.95, 0.99, 1.0});
  EXPECT_THROW(crossing_snr(low, 0.9), NotComparable);
  EXPECT_THROW(crossing_snr(high, 0.9), NotComparable);
  EXPECT_THROW(snr_margin(low, high, 0.9), NotComparable);
}

TEST(Monotonicity, FlagsSignificantDrops) {
  DetectionCurve c = synthetic({0, 1, 2, 3}, {0.2, 0.5, 0.48, 0.1});
  c.p_d_stderr = {0.01, 0.01, 0.01, 0.01};
  EXPECT_EQ(nonmonotone_points(c), std::vector<std::size_t>{3});
  EXPECT_EQ(nonmonotone_points(c, 1.0), (std::vector<std::size_t>{2, 3}));
}

}  // namespace
}  // namespace cirauth
