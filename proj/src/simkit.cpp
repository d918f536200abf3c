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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "cirauth/errors.hpp"

namespace cirauth {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join_numbers(const auto& values) {
  std::string out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(values.size()); ++i) {
    if (i) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

std::string threshold_label(const Scenario& s, std::size_t i) {
  const std::string suffix = is_local(s.scheme) ? "_n=" : "=";
  if (!s.detector.target_pfa.empty()) {
    return "pfa" + suffix + format_number(s.detector.target_pfa[i]);
  }
  return "delta" + suffix + format_number(s.detector.thresholds[i]);
}

Scheme uncompressed(Scheme s) {
  return s == Scheme::FcRawCs ? Scheme::FcRaw
         : s == Scheme::LocalFusionCs ? Scheme::LocalFusion
                                      : s;
}

std::vector<CurveSpec> build_curves(const Scenario& s) {
  std::vector<Scheme> schemes{s.scheme};
  if (is_compressed(s.scheme) && s.cs.compare_uncompressed) {
    schemes.push_back(uncompressed(s.scheme));
  }
  std::vector<CurveSpec> out;
  for (Scheme scheme : schemes) {
    for (std::size_t t = 0; t < s.detector.thresholds.size(); ++t) {
      const std::string tl = threshold_label(s, t);
      if (!is_local(scheme)) {
        out.push_back({scheme, tl, t, -1});
        continue;
      }
      for (std::size_t r = 0; r < s.rules.size(); ++r) {
        out.push_back({scheme, std::string(to_string(s.rules[r].kind)) + ":" + tl,
                       t, static_cast<int>(r)});
      }
      if (s.single_node_baseline) {
        out.push_back({scheme, "single:" + tl, t, -1, true});
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::FcRaw: return "fc_raw";
    case Scheme::LocalFusion: return "local_fusion";
    case Scheme::FcRawCs: return "fc_raw_cs";
    case Scheme::LocalFusionCs: return "local_fusion_cs";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::FcRaw, Scheme::LocalFusion, Scheme::FcRawCs,
                   Scheme::LocalFusionCs}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

int default_max_atoms(Scheme scheme, int measurements) {
  const int div = scheme == Scheme::LocalFusionCs ? 4 : 8;
  return std::max(1, (measurements + div - 1) / div);
}

int Scenario::null_dof() const {
  return is_local(scheme) ? 2 * channel.n_taps
                          : 2 * channel.n_taps * channel.n_nodes;
}

int Scenario::report_length() const {
  return scheme == Scheme::LocalFusionCs ? channel.n_nodes
                                         : channel.n_nodes * channel.n_taps;
}

void Scenario::validate() const {
  channel.validate();
  if (trials < 1) throw InvalidParameter("scenario: trials must be >= 1");
  if (snr_db.empty()) throw InvalidParameter("scenario: SNR grid is empty");
  if (snr_db.size() >= (std::size_t{1} << 22)) {
    throw InvalidParameter("scenario: SNR grid too long");
  }
  if (trials >= (std::int64_t{1} << 40)) {
    throw InvalidParameter("scenario: trials must be < 2^40");
  }
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw InvalidParameter("scenario: non-finite SNR");
  }
  if (detector.thresholds.empty()) {
    throw InvalidParameter("scenario: at least one threshold is required");
  }
  for (double d : detector.thresholds) {
    if (!(d > 0.0)) throw InvalidParameter("scenario: thresholds must be > 0");
  }
  if (!detector.target_pfa.empty() &&
      detector.target_pfa.size() != detector.thresholds.size()) {
    throw InvalidParameter("scenario: target_pfa and thresholds differ in length");
  }
  if (is_local(scheme)) {
    if (rules.empty() && !single_node_baseline) {
      throw InvalidParameter("scenario: local schemes need at least one fusion rule");
    }
    for (const FusionRule& r : rules) {
      if (r.kind == FusionKind::WeightedAverage) {
        if (r.weights.size() != 0 && r.weights.size() != channel.n_nodes) {
          throw InvalidParameter("scenario: weights must have one entry per node");
        }
        if (r.weights.size() != 0 && ((r.weights.array() < 0.0).any() ||
                                       std::abs(r.weights.sum() - 1.0) > 1e-9)) {
          throw InvalidParameter("scenario: weights must be >= 0 and sum to 1");
        }
        if (!(r.avg_threshold > 0.0 && r.avg_threshold < 1.0)) {
          throw InvalidParameter("scenario: avg_threshold must lie in (0, 1)");
        }
      }
    }
  }
  if (is_compressed(scheme)) {
    const int n = report_length();
    if (cs.measurements < 1 || cs.measurements >= n) {
      throw InvalidParameter("scenario: need 0 < cs.measurements < " +
                             std::to_string(n) + ", got " +
                             std::to_string(cs.measurements));
    }
    if (cs.max_atoms < 0) throw InvalidParameter("scenario: cs.max_atoms must be >= 0");
    if (!(cs.residual_tol >= 0.0)) {
      throw InvalidParameter("scenario: cs.residual_tol must be >= 0");
    }
    if (scheme == Scheme::LocalFusionCs && cs.basis != Basis::Identity) {
      throw InvalidParameter("scenario: decision vectors are compressed in the identity basis");
    }
  }
}

std::vector<std::string> canonical_config(const Scenario& s) {
  std::vector<std::string> lines;
  auto add = [&](std::string key, std::string value) {
    lines.push_back(std::move(key) + " = " + std::move(value));
  };
  add("scenario.scheme", std::string(to_string(s.scheme)));
  add("scenario.snr_db", join_numbers(s.snr_db));
  add("scenario.trials", std::to_string(s.trials));
  add("scenario.seed", std::to_string(s.seed));
  add("channel.nodes", std::to_string(s.channel.n_nodes));
  add("channel.taps", std::to_string(s.channel.n_taps));
  add("channel.rho", format_number(s.channel.rho));
  add("channel.pdp", join_numbers(s.channel.pdp));
  add("channel.normalize_kronecker", s.channel.normalize_kronecker ? "true" : "false");
  add("detector.statistic_scale",
      s.detector.scale == StatisticScale::PaperChi2 ? "paper_chi2" : "raw_quadratic");
  add("detector.thresholds", join_numbers(s.detector.thresholds));
  if (!s.detector.target_pfa.empty()) {
    add("detector.pfa", join_numbers(s.detector.target_pfa));
  }
  if (is_local(s.scheme)) {
    std::string rules;
    for (const FusionRule& r : s.rules) {
      if (!rules.empty()) rules += ",";
      rules += to_string(r.kind);
    }
    if (s.single_node_baseline) rules += rules.empty() ? "single" : ",single";
    add("detector.rules", rules);
    for (const FusionRule& r : s.rules) {
      if (r.kind != FusionKind::WeightedAverage) continue;
      add("detector.weights", r.weights.size() ? join_numbers(r.weights) : "uniform");
      add("detector.avg_threshold", format_number(r.avg_threshold));
      break;
    }
  }
  if (is_compressed(s.scheme)) {
    add("cs.measurements", std::to_string(s.cs.measurements));
    add("cs.basis", std::string(to_string(s.cs.basis)));
    add("cs.max_atoms", std::to_string(s.cs.max_atoms > 0
                                           ? s.cs.max_atoms
                                           : default_max_atoms(s.scheme, s.cs.measurements)));
    add("cs.residual_tol", format_number(s.cs.residual_tol));
    add("cs.compare_uncompressed", s.cs.compare_uncompressed ? "true" : "false");
  }
  return lines;
}

std::string scenario_digest(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const std::string& line : canonical_config(s)) {
    for (unsigned char c : line + "\n") {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Experiment::Experiment(Scenario scenario)
    : scenario_(std::move(scenario)),
      model_((scenario_.validate(), scenario_.channel)) {
  if (is_compressed(scenario_.scheme)) {
    const CsSettings& cs = scenario_.cs;
    Rng codec_rng(scenario_.seed, kCodecStream);
    const OmpStop stop{cs.max_atoms > 0 ? cs.max_atoms
                                        : default_max_atoms(scenario_.scheme, cs.measurements),
                       cs.residual_tol};
    codec_.emplace(CsCodec::gaussian(codec_rng, cs.measurements,
                                     scenario_.report_length(), cs.basis, stop));
  }
  curves_ = build_curves(scenario_);
}

std::uint64_t Experiment::trial_stream(std::size_t snr_index, std::int64_t trial,
                                       Occupant occupant) {
  return (static_cast<std::uint64_t>(snr_index) << 41) |
         (static_cast<std::uint64_t>(occupant == Occupant::Eve) << 40) |
         static_cast<std::uint64_t>(trial);
}

std::vector<Decision> Experiment::run_trial(Rng& rng, double snr_db,
                                            Occupant occupant) const {
  const Scenario& s = scenario_;
  const int nodes = s.channel.n_nodes;
  const int taps = s.channel.n_taps;
  const StatisticScale scale = s.detector.scale;
  const auto& thresholds = s.detector.thresholds;

  const ChannelEnsemble ensemble = model_.draw(rng);
  const NoiseModel noise =
      NoiseModel::homogeneous(nodes, taps, snr_db_to_sigma2(snr_db));
  const MeasurementBatch batch = measure(rng, ensemble, occupant, noise);
  const Eigen::VectorXcd h_ab = stack(ensemble.h_ab);

  std::vector<Decision> out(curves_.size(), Decision::H0);

  if (!is_local(s.scheme)) {
    std::optional<double> t_cs;
    if (is_compressed(s.scheme)) {
      const Eigen::VectorXcd z_hat = reconstruct_raw(codec_->compress(batch.z_star), *codec_);
      t_cs = fc_raw_statistic(z_hat, h_ab, noise, scale);
    }
    const double t_raw = fc_raw_statistic(batch.z_star, h_ab, noise, scale);
    for (std::size_t c = 0; c < curves_.size(); ++c) {
      const double t = curves_[c].scheme == Scheme::FcRawCs ? *t_cs : t_raw;
      out[c] = threshold_decide(t, thresholds[curves_[c].threshold_index]);
    }
    return out;
  }

  Eigen::VectorXd node_stats(nodes);
  for (int n = 0; n < nodes; ++n) {
    node_stats[n] = apply_scale(
        noise.node_quadratic_form(n, batch.z_star.segment(n * taps, taps) -
                                         h_ab.segment(n * taps, taps)),
        scale);
  }
  std::vector<DecisionVector> local(thresholds.size());
  std::vector<DecisionVector> recovered(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    local[t] = (node_stats.array() > thresholds[t]).cast<std::uint8_t>();
    if (s.scheme == Scheme::LocalFusionCs) {
      const Eigen::VectorXd u = local[t].cast<double>();
      recovered[t] = reconstruct_decisions(codec_->compress(u), *codec_);
    }
  }
  for (std::size_t c = 0; c < curves_.size(); ++c) {
    const CurveSpec& spec = curves_[c];
    const DecisionVector& u = spec.scheme == Scheme::LocalFusionCs
                                  ? recovered[spec.threshold_index]
                                  : local[spec.threshold_index];
    if (spec.single_node) {
      out[c] = u[0] ? Decision::H1 : Decision::H0;
    } else {
      out[c] = fuse(u, s.rules[static_cast<std::size_t>(spec.rule_index)]);
    }
  }
  return out;
}

std::vector<DetectionCurve> Experiment::estimate(int workers) const {
  const Scenario& s = scenario_;
  const std::size_t n_snr = s.snr_db.size();
  const std::size_t n_curves = curves_.size();
  // job = 2 * snr_index + (occupant == Eve)
  const std::size_t n_jobs = 2 * n_snr;
  constexpr std::int64_t kChunk = 64;
  const std::int64_t chunks_per_job = (s.trials + kChunk - 1) / kChunk;
  const std::int64_t total_chunks = chunks_per_job * static_cast<std::int64_t>(n_jobs);

  workers = std::max(1, workers);
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(workers),
      std::vector<std::int64_t>(n_jobs * n_curves, 0));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](std::size_t w) {
    std::vector<std::int64_t>& mine = counts[w];
    try {
      for (;;) {
        const std::int64_t chunk = next.fetch_add(1);
        if (chunk >= total_chunks) return;
        const auto job = static_cast<std::size_t>(chunk / chunks_per_job);
        const std::int64_t begin = (chunk % chunks_per_job) * kChunk;
        const std::int64_t end = std::min(s.trials, begin + kChunk);
        const std::size_t snr_index = job / 2;
        const Occupant occ = job % 2 ? Occupant::Eve : Occupant::Alice;
        for (std::int64_t t = begin; t < end; ++t) {
          Rng rng(s.seed, trial_stream(snr_index, t, occ));
          const std::vector<Decision> d = run_trial(rng, s.snr_db[snr_index], occ);
          for (std::size_t c = 0; c < n_curves; ++c) {
            mine[job * n_curves + c] += d[c] == Decision::H1;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(total_chunks);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, static_cast<std::size_t>(w));
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::int64_t> total(n_jobs * n_curves, 0);
  for (const auto& mine : counts) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += mine[i];
  }

  const std::string digest = scenario_digest(s);
  const double n = static_cast<double>(s.trials);
  std::vector<DetectionCurve> out;
  for (std::size_t c = 0; c < n_curves; ++c) {
    DetectionCurve curve;
    curve.scheme = curves_[c].scheme;
    curve.label = curves_[c].label;
    curve.trials = s.trials;
    curve.config_digest = digest;
    for (std::size_t i = 0; i < n_snr; ++i) {
      const double pfa = static_cast<double>(total[(2 * i) * n_curves + c]) / n;
      const double pd = static_cast<double>(total[(2 * i + 1) * n_curves + c]) / n;
      curve.snr_db.push_back(s.snr_db[i]);
      curve.p_d.push_back(pd);
      curve.p_d_stderr.push_back(std::sqrt(pd * (1.0 - pd) / n));
      curve.p_fa.push_back(pfa);
      curve.p_fa_stderr.push_back(std::sqrt(pfa * (1.0 - pfa) / n));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

double crossing_snr(const DetectionCurve& curve, double target_pd) {
  const auto& x = curve.snr_db;
  const auto& y = curve.p_d;
  if (x.empty() || x.size() != y.size()) {
    throw NotComparable("crossing_snr: malformed curve '" + curve.label + "'");
  }
  if (y[0] >= target_pd) {
    if (y[0] == target_pd) return x[0];
    throw NotComparable("crossing_snr: curve '" + curve.label +
                        "' already exceeds P_d = " + format_number(target_pd) +
                        " at the first grid point");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (y[i] >= target_pd) {
      const double frac = (target_pd - y[i - 1]) / (y[i] - y[i - 1]);
      return x[i - 1] + frac * (x[i] - x[i - 1]);
    }
  }
  throw NotComparable("crossing_snr: curve '" + curve.label + "' never reaches P_d = " +
                      format_number(target_pd));
}

double snr_margin(const DetectionCurve& a, const DetectionCurve& b,
                  double target_pd) {
  return crossing_snr(a, target_pd) - crossing_snr(b, target_pd);
}

std::vector<std::size_t> nonmonotone_points(const DetectionCurve& curve,
                                            double sigmas) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < curve.p_d.size(); ++i) {
    const double se = std::hypot(curve.p_d_stderr[i], curve.p_d_stderr[i - 1]);
    if (curve.p_d[i - 1] - curve.p_d[i] > sigmas * se) out.push_back(i);
  }
  return out;
}

}  // namespace cirauth
