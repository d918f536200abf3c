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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cirauth/simkit.hpp"

namespace cirauth {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Invalid scenario configuration, anchored to where the bad input came
/// from ("fig2.cfg:7" or "--set #2").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/**
 * Parse a scenario from flat `key = value` text.
 *
 * Lines are UTF-8, `#` starts a comment, blank lines are ignored. Keys are
 * section-prefixed (scenario.*, channel.*, detector.*, cs.*); an unknown or
 * repeated key is an error. `overrides` are `key=value` pairs applied after
 * the file, in order.
 */
Scenario parse_scenario(std::string_view text, const std::string& source,
                        const std::vector<std::string>& overrides = {});

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Number list: comma separated values or an inclusive `start:step:stop`
/// range. Throws InvalidParameter on malformed input.
std::vector<double> parse_number_list(std::string_view text);

/// Curve CSV: `#` header lines (tool version, digest, seed, resolved
/// config) followed by scheme,label,snr_db,p_d,p_d_stderr,p_fa,p_fa_stderr,trials.
std::string format_csv(const Scenario& scenario,
                       const std::vector<DetectionCurve>& curves);

/// Write to a sibling temporary file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct SelfcheckOptions {
  /// Added to every chi-squared quantile before the round-trip check.
  /// Test hook for proving the check can fail.
  double quantile_perturbation = 0.0;
};

struct SelfcheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<SelfcheckResult> run_selfcheck(const SelfcheckOptions& options = {});

}  // namespace cirauth
