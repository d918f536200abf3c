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

#include "cirauth/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cirauth/errors.hpp"

namespace cirauth {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidParameter("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidParameter("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw InvalidParameter("expected true or false, got '" + std::string(s) + "'");
}

struct Entry {
  std::string value;
  std::string where;
};

// Every key the format understands. Values are validated when the scenario
// is assembled, so an entry here only means "spelled correctly".
const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys = {
      "scenario.scheme",      "scenario.snr_db",         "scenario.trials",
      "scenario.seed",        "channel.nodes",           "channel.taps",
      "channel.rho",          "channel.pdp",             "channel.normalize_kronecker",
      "detector.statistic_scale", "detector.thresholds", "detector.pfa",
      "detector.rules",       "detector.weights",        "detector.avg_threshold",
      "cs.measurements",      "cs.basis",                "cs.max_atoms",
      "cs.residual_tol",      "cs.compare_uncompressed",
  };
  return keys;
}

bool is_known(std::string_view key) {
  for (auto k : known_keys()) {
    if (k == key) return true;
  }
  return false;
}

void add_entry(std::map<std::string, Entry>& entries, std::string_view line,
               const std::string& where, bool allow_replace) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(where, "expected 'key = value', got '" + std::string(line) + "'");
  }
  const std::string key(trim(line.substr(0, eq)));
  const std::string value(trim(line.substr(eq + 1)));
  if (key.empty()) throw ConfigError(where, "empty key");
  if (!is_known(key)) throw ConfigError(where, "unknown key '" + key + "'");
  if (value.empty()) throw ConfigError(where, "empty value for '" + key + "'");
  const auto it = entries.find(key);
  if (it != entries.end() && !allow_replace) {
    throw ConfigError(where, "duplicate key '" + key + "' (first set at " +
                                 it->second.where + ")");
  }
  entries[key] = Entry{value, where};
}

class Assembler {
 public:
  explicit Assembler(std::map<std::string, Entry> entries)
      : entries_(std::move(entries)) {}

  // Runs `fn` on the value of `key` if present; conversion failures are
  // reported against the line that set the key.
  template <typename Fn>
  bool with(const std::string& key, Fn&& fn) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    try {
      fn(it->second.value);
    } catch (const InvalidParameter& e) {
      throw ConfigError(it->second.where, key + ": " + e.what());
    }
    return true;
  }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::string where(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->where : fallback;
  }

 private:
  std::map<std::string, Entry> entries_;
};

FusionKind parse_rule(std::string_view name) {
  for (FusionKind k : {FusionKind::Or, FusionKind::And, FusionKind::Majority,
                       FusionKind::WeightedAverage}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidParameter("unknown fusion rule '" + std::string(name) + "'");
}

Basis parse_basis(std::string_view name) {
  for (Basis b : {Basis::Dct, Basis::Identity, Basis::Dft}) {
    if (to_string(b) == name) return b;
  }
  throw InvalidParameter("unknown basis '" + std::string(name) + "'");
}

Scenario assemble(Assembler& a, const std::string& source) {
  Scenario s;
  if (!a.with("scenario.scheme", [&](const std::string& v) {
        const auto scheme = parse_scheme(v);
        if (!scheme) throw InvalidParameter("unknown scheme '" + v + "'");
        s.scheme = *scheme;
      })) {
    throw ConfigError(source, "missing required key 'scenario.scheme'");
  }
  if (!a.with("scenario.snr_db", [&](const std::string& v) { s.snr_db = parse_number_list(v); })) {
    throw ConfigError(source, "missing required key 'scenario.snr_db'");
  }
  a.with("scenario.trials", [&](const std::string& v) {
    s.trials = parse_int<std::int64_t>(v);
    if (s.trials < 1) throw InvalidParameter("must be >= 1");
  });
  a.with("scenario.seed", [&](const std::string& v) { s.seed = parse_int<std::uint64_t>(v); });

  int nodes = 10;
  int taps = 6;
  double rho = 0.9;
  a.with("channel.nodes", [&](const std::string& v) {
    nodes = parse_int<int>(v);
    if (nodes < 1) throw InvalidParameter("must be >= 1");
  });
  a.with("channel.taps", [&](const std::string& v) {
    taps = parse_int<int>(v);
    if (taps < 1) throw InvalidParameter("must be >= 1");
  });
  a.with("channel.rho", [&](const std::string& v) {
    rho = parse_double(v);
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidParameter("must lie in [0, 1]");
  });
  s.channel = ChannelConfig::uniform(nodes, taps, rho);
  a.with("channel.pdp", [&](const std::string& v) {
    if (v == "uniform") return;
    if (v == "unit") {
      s.channel.pdp = Eigen::VectorXd::Ones(taps);
      return;
    }
    const std::vector<double> pdp = parse_number_list(v);
    if (static_cast<int>(pdp.size()) != taps) {
      throw InvalidParameter("expected " + std::to_string(taps) + " entries, got " +
                             std::to_string(pdp.size()));
    }
    for (double p : pdp) {
      if (p < 0.0) throw InvalidParameter("entries must be >= 0");
    }
    s.channel.pdp = Eigen::Map<const Eigen::VectorXd>(pdp.data(), taps);
  });
  a.with("channel.normalize_kronecker",
         [&](const std::string& v) { s.channel.normalize_kronecker = parse_bool(v); });

  a.with("detector.statistic_scale", [&](const std::string& v) {
    if (v == "paper_chi2") {
      s.detector.scale = StatisticScale::PaperChi2;
    } else if (v == "raw_quadratic") {
      s.detector.scale = StatisticScale::RawQuadratic;
    } else {
      throw InvalidParameter("expected paper_chi2 or raw_quadratic, got '" + v + "'");
    }
  });
  const bool has_thresholds = a.find("detector.thresholds") != nullptr;
  const bool has_pfa = a.find("detector.pfa") != nullptr;
  if (has_thresholds && has_pfa) {
    throw ConfigError(a.where("detector.pfa", source),
                      "detector.pfa and detector.thresholds are mutually exclusive");
  }
  if (!has_thresholds && !has_pfa) {
    throw ConfigError(source, "one of 'detector.thresholds' or 'detector.pfa' is required");
  }
  const StatisticScale scale = s.detector.scale;
  a.with("detector.thresholds", [&](const std::string& v) {
    s.detector = DetectorConfig::from_thresholds(parse_number_list(v), scale);
  });
  a.with("detector.pfa", [&](const std::string& v) {
    s.detector = DetectorConfig::from_pfa(parse_number_list(v), s.null_dof(), scale);
  });

  const bool local = is_local(s.scheme);
  const bool compressed = is_compressed(s.scheme);
  for (const char* key : {"detector.rules", "detector.weights", "detector.avg_threshold"}) {
    if (!local && a.find(key)) {
      throw ConfigError(a.where(key, source),
                        std::string(key) + " applies only to local fusion schemes");
    }
  }
  for (const char* key : {"cs.measurements", "cs.basis", "cs.max_atoms", "cs.residual_tol",
                          "cs.compare_uncompressed"}) {
    if (!compressed && a.find(key)) {
      throw ConfigError(a.where(key, source),
                        std::string(key) + " applies only to compressed schemes");
    }
  }
  if (local) {
    if (!a.with("detector.rules", [&](const std::string& v) {
          for (std::string_view name : split(v, ',')) {
            if (name == "single") {
              s.single_node_baseline = true;
            } else {
              s.rules.push_back(FusionRule::of(parse_rule(name)));
            }
          }
        })) {
      s.rules.push_back(FusionRule::of(FusionKind::Majority));
    }
    Eigen::VectorXd weights;
    double avg_threshold = 0.5;
    a.with("detector.weights", [&](const std::string& v) {
      if (v == "uniform") return;
      const std::vector<double> w = parse_number_list(v);
      weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    });
    a.with("detector.avg_threshold", [&](const std::string& v) { avg_threshold = parse_double(v); });
    for (FusionRule& r : s.rules) {
      if (r.kind == FusionKind::WeightedAverage) {
        r.weights = weights;
        r.avg_threshold = avg_threshold;
      }
    }
  }
  if (compressed) {
    if (s.scheme == Scheme::LocalFusionCs) s.cs.basis = Basis::Identity;
    s.cs.measurements = s.report_length() * 4 / 5;
    a.with("cs.measurements", [&](const std::string& v) { s.cs.measurements = parse_int<int>(v); });
    a.with("cs.basis", [&](const std::string& v) { s.cs.basis = parse_basis(v); });
    a.with("cs.max_atoms", [&](const std::string& v) { s.cs.max_atoms = parse_int<int>(v); });
    a.with("cs.residual_tol", [&](const std::string& v) { s.cs.residual_tol = parse_double(v); });
    a.with("cs.compare_uncompressed",
           [&](const std::string& v) { s.cs.compare_uncompressed = parse_bool(v); });
  }

  try {
    s.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(source, e.what());
  }
  return s;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InvalidParameter("empty number list");
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double start = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double stop = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw InvalidParameter("range must be start:step:stop with step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw InvalidParameter("range has too many points");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  if (parts.size() != 1) throw InvalidParameter("malformed range '" + std::string(text) + "'");
  std::vector<double> out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

Scenario parse_scenario(std::string_view text, const std::string& source,
                        const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) {
      add_entry(entries, line, source + ":" + std::to_string(line_no), false);
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    add_entry(entries, trim(overrides[i]), "--set #" + std::to_string(i + 1), true);
  }
  Assembler assembler(std::move(entries));
  return assemble(assembler, source);
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string(), overrides);
}

}  // namespace cirauth
