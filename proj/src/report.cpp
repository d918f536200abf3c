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

#include <cstdio>
#include <fstream>
#include <system_error>

#include "cirauth/config.hpp"

namespace cirauth {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string format_csv(const Scenario& scenario,
                       const std::vector<DetectionCurve>& curves) {
  std::string out;
  out += "# cirauth " + std::string(kToolVersion) + "\n";
  out += "# config_digest = " + scenario_digest(scenario) + "\n";
  out += "# seed = " + std::to_string(scenario.seed) + "\n";
  for (const std::string& line : canonical_config(scenario)) {
    out += "# config " + line + "\n";
  }
  out += "scheme,label,snr_db,p_d,p_d_stderr,p_fa,p_fa_stderr,trials\n";
  for (const DetectionCurve& c : curves) {
    for (std::size_t i = 0; i < c.snr_db.size(); ++i) {
      out += std::string(to_string(c.scheme)) + "," + c.label + "," +
             fmt("%.6g", c.snr_db[i]) + "," + fmt("%.8f", c.p_d[i]) + "," +
             fmt("%.8f", c.p_d_stderr[i]) + "," + fmt("%.8f", c.p_fa[i]) + "," +
             fmt("%.8f", c.p_fa_stderr[i]) + "," + std::to_string(c.trials) + "\n";
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" +
                             path.string() + "': " + ec.message());
  }
}

}  // namespace cirauth
