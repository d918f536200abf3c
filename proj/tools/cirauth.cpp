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

// Command-line front end: run scenario files, print threshold tables, and
// run the fast invariant suite.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cirauth/config.hpp"
#include "cirauth/detect.hpp"
#include "cirauth/errors.hpp"
#include "cirauth/simkit.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::vector<std::string> overrides;
};

int cmd_run(const RunOptions& opt) {
  cirauth::Scenario scenario;
  try {
    std::vector<std::string> overrides = opt.overrides;
    if (opt.seed) overrides.push_back("scenario.seed=" + std::to_string(*opt.seed));
    scenario = cirauth::load_scenario(opt.config, overrides);
  } catch (const cirauth::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto curves = cirauth::estimate_curve(scenario, opt.workers);
    for (const auto& c : curves) {
      for (std::size_t i : cirauth::nonmonotone_points(c)) {
        std::cerr << "warning: " << cirauth::to_string(c.scheme) << " " << c.label
                  << ": P_d drops by more than 3 sigma at " << c.snr_db[i] << " dB\n";
      }
    }
    cirauth::write_file_atomic(opt.out, cirauth::format_csv(scenario, curves));
    std::cerr << "wrote " << curves.size() << " curves to " << opt.out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_thresholds(const std::vector<std::string>& alpha_args, int dof) {
  std::vector<double> alphas;
  try {
    for (const std::string& arg : alpha_args) {
      for (double a : cirauth::parse_number_list(arg)) {
        if (!(a > 0.0 && a < 1.0)) {
          throw cirauth::InvalidParameter("alpha must lie in (0, 1), got " + arg);
        }
        alphas.push_back(a);
      }
    }
    if (dof < 1) throw cirauth::InvalidParameter("dof must be >= 1");
  } catch (const cirauth::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::printf("alpha,dof,delta\n");
  for (double a : alphas) {
    std::printf("%g,%d,%.4f\n", a, dof, cirauth::solve_threshold(a, dof));
  }
  return 0;
}

int cmd_selfcheck(double perturbation) {
  bool ok = true;
  for (const auto& r : cirauth::run_selfcheck({perturbation})) {
    std::printf("%-4s %s: %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cirauth: distributed CIR-based physical-layer authentication simulator"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Estimate detection curves for a scenario file");
  run_cmd->add_option("--config", run.config, "Scenario file")->required();
  run_cmd->add_option("--out", run.out, "Output CSV path")->required();
  run_cmd->add_option("--seed", run.seed, "Override scenario.seed");
  run_cmd->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--set", run.overrides, "key=value override (repeatable)");

  std::vector<std::string> alphas;
  int dof = 12;
  auto* thr_cmd = app.add_subcommand("thresholds", "Chi-squared thresholds for false-alarm targets");
  thr_cmd->add_option("--alpha", alphas, "False-alarm probability (repeatable, or a comma list)")
      ->required();
  thr_cmd->add_option("--dof", dof, "Degrees of freedom (2L per node, 2NL at the FC)");

  double perturbation = 0.0;
  auto* self_cmd = app.add_subcommand("selfcheck", "Run the fast invariant suite");
  self_cmd->add_option("--perturb-quantile", perturbation)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*run_cmd) return cmd_run(run);
  if (*thr_cmd) return cmd_thresholds(alphas, dof);
  if (*self_cmd) return cmd_selfcheck(perturbation);
  return kExitUsage;
}
