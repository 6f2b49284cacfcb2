// Copyright 2025 The dusc Authors
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

#ifndef DUSC_CONFIG_HPP
#define DUSC_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dusc/common.hpp"

namespace dusc {

/** Ribbon offset d stored as 2d, so half-integers stay exact. */
struct DValue {
  int twice = 0;

  bool is_integer() const { return twice % 2 == 0; }
  int as_int() const {
    if (!is_integer()) throw ConfigError("d = " + str() + " is not an integer");
    return twice / 2;
  }
  double value() const { return 0.5 * twice; }
  std::string str() const {
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
  }
  bool operator==(const DValue &o) const = default;
};

/** "-1", "0", "2" or "-1/2", "-3/2". Positive half-integers are rejected. */
inline DValue parse_d(const std::string &tok) {
  const auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw ConfigError("");
      return {2 * v};
    }
    const int num = std::stoi(tok.substr(0, slash), &used);
    if (used != slash) throw ConfigError("");
    const std::string den_s = tok.substr(slash + 1);
    const int den = std::stoi(den_s, &used);
    if (used != den_s.size()) throw ConfigError("");
    if (den == 1) return {2 * num};
    if (den != 2) throw ConfigError("d must be an integer or a half-integer, got '" + tok + "'");
    if (num % 2 == 0) return {num};
    if (num > 0) throw ConfigError("half-integer d must be negative, got '" + tok + "'");
    return {num};
  } catch (const ConfigError &e) {
    if (std::string(e.what()).empty()) throw ConfigError("cannot parse d value '" + tok + "'");
    throw;
  } catch (const std::exception &) {
    throw ConfigError("cannot parse d value '" + tok + "'");
  }
}

enum class Geometry { LocalEven, LocalOddEven, Macro };
enum class Quantity { FXY, FXYbar, OPMI, TwoPoint, OTOC, Spectrum };
enum class Format { CSV, JSON };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::LocalEven:
      return "local-even";
    case Geometry::LocalOddEven:
      return "local-odd-even";
    case Geometry::Macro:
      return "macro";
  }
  return "?";
}

inline std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::FXY:
      return "fxy";
    case Quantity::FXYbar:
      return "fxybar";
    case Quantity::OPMI:
      return "opmi";
    case Quantity::TwoPoint:
      return "two_point";
    case Quantity::OTOC:
      return "otoc";
    case Quantity::Spectrum:
      return "spectrum";
  }
  return "?";
}

struct Budget {
  int max_dense_L = 12;        // dense U_F
  int max_cluster_sites = 13;  // reduced network cluster, 2n-qubit purity
  int max_quartet_L = 6;       // eigenstate quartet sums
  int max_pauli_log4 = 6;      // Pauli pairs 4^{|X|+|Y|}
  int max_ribbon = 1;          // |d| for dense transfer matrices
};

struct RunConfig {
  int L = 0;
  double J = 0.5;
  std::vector<double> J_values;  // spectrum / verify grid; defaults to {J}
  std::uint64_t master_seed = 0;
  int n_samples = 20;
  int t_min = 0;
  int t_max = 2;
  std::vector<DValue> d_values{{0}};
  Geometry geometry = Geometry::LocalEven;
  Quantity quantity = Quantity::FXY;
  int x_site = 0;    // 0: 2 for even placements, 1 for odd
  int far_gap = -1;  // macro geometry; -1: 2t
  std::vector<std::string> kinds{"T1"};
  int spectrum_k = 6;
  std::string output;
  Format format = Format::CSV;
  int threads = 1;
  bool corrupt_gate = false;  // negative control for verify
  Budget budget;
  std::vector<std::pair<std::string, std::string>> echo;  // raw key/value pairs as read

  std::vector<double> j_grid() const { return J_values.empty() ? std::vector<double>{J} : J_values; }
};

namespace detail {

inline std::string trim(const std::string &s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline long long to_int(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception &) {
  }
  throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

inline double to_real(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception &) {
  }
  throw ConfigError(key + ": expected a real number, got '" + v + "'");
}

inline bool to_bool(const std::string &key, const std::string &v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

}  // namespace detail

inline Format parse_format(const std::string &v) {
  if (v == "csv") return Format::CSV;
  if (v == "json") return Format::JSON;
  throw ConfigError("format must be csv or json, got '" + v + "'");
}

inline void set_key(RunConfig &c, const std::string &key, const std::string &v) {
  using namespace detail;
  if (key == "L") {
    c.L = static_cast<int>(to_int(key, v));
  } else if (key == "J") {
    c.J = to_real(key, v);
  } else if (key == "J_values") {
    c.J_values.clear();
    for (const auto &s : split_list(v)) c.J_values.push_back(to_real(key, s));
  } else if (key == "master_seed" || key == "seed") {
    try {
      std::size_t used = 0;
      c.master_seed = std::stoull(v, &used, 0);
      if (used != v.size()) throw ConfigError("");
    } catch (const std::exception &) {
      throw ConfigError(key + ": expected a 64-bit unsigned integer, got '" + v + "'");
    }
  } else if (key == "n_samples") {
    c.n_samples = static_cast<int>(to_int(key, v));
  } else if (key == "t_min") {
    c.t_min = static_cast<int>(to_int(key, v));
  } else if (key == "t_max") {
    c.t_max = static_cast<int>(to_int(key, v));
  } else if (key == "d_values") {
    c.d_values.clear();
    for (const auto &s : split_list(v)) c.d_values.push_back(parse_d(s));
  } else if (key == "geometry") {
    if (v == "local-even") c.geometry = Geometry::LocalEven;
    else if (v == "local-odd-even") c.geometry = Geometry::LocalOddEven;
    else if (v == "macro") c.geometry = Geometry::Macro;
    else throw ConfigError("geometry must be local-even, local-odd-even or macro, got '" + v + "'");
  } else if (key == "quantity") {
    if (v == "fxy") c.quantity = Quantity::FXY;
    else if (v == "fxybar") c.quantity = Quantity::FXYbar;
    else if (v == "opmi") c.quantity = Quantity::OPMI;
    else if (v == "two_point") c.quantity = Quantity::TwoPoint;
    else if (v == "otoc") c.quantity = Quantity::OTOC;
    else if (v == "spectrum") c.quantity = Quantity::Spectrum;
    else throw ConfigError("unknown quantity '" + v + "'");
  } else if (key == "x_site") {
    c.x_site = static_cast<int>(to_int(key, v));
  } else if (key == "far_gap") {
    c.far_gap = (v == "auto") ? -1 : static_cast<int>(to_int(key, v));
    if (c.far_gap < -1) throw ConfigError("far_gap must be >= 0 or auto");
  } else if (key == "kind") {
    c.kinds = split_list(v);
    for (const auto &k : c.kinds)
      if (k != "T1" && k != "T2" && k != "T3") throw ConfigError("kind must be T1, T2 or T3, got '" + k + "'");
  } else if (key == "spectrum_k") {
    c.spectrum_k = static_cast<int>(to_int(key, v));
  } else if (key == "output") {
    c.output = v;
  } else if (key == "format") {
    c.format = parse_format(v);
  } else if (key == "threads") {
    c.threads = static_cast<int>(to_int(key, v));
  } else if (key == "corrupt_gate") {
    c.corrupt_gate = to_bool(key, v);
  } else if (key == "max_dense_L") {
    c.budget.max_dense_L = static_cast<int>(to_int(key, v));
  } else if (key == "max_cluster_sites") {
    c.budget.max_cluster_sites = static_cast<int>(to_int(key, v));
  } else if (key == "max_quartet_L") {
    c.budget.max_quartet_L = static_cast<int>(to_int(key, v));
  } else if (key == "max_pauli_log4") {
    c.budget.max_pauli_log4 = static_cast<int>(to_int(key, v));
  } else if (key == "max_ribbon") {
    c.budget.max_ribbon = static_cast<int>(to_int(key, v));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/** Flat "key = value" text; '#' starts a comment. Later keys override earlier ones. */
inline RunConfig parse_config(std::istream &in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    set_key(c, key, val);
    c.echo.emplace_back(key, val);
  }
  return c;
}

inline RunConfig parse_config_string(const std::string &s) {
  std::istringstream in(s);
  return parse_config(in);
}

inline RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

inline bool is_local(Geometry g) { return g != Geometry::Macro; }

/** Checks shared by all commands, then the geometry/quantity pairing for scans. */
inline void validate(const RunConfig &c, const std::string &command) {
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (c.t_min < 0 || c.t_max < c.t_min) throw ConfigError("need 0 <= t_min <= t_max");
  if (command == "spectrum") {
    if (c.spectrum_k < 1) throw ConfigError("spectrum_k must be >= 1");
    for (const DValue &d : c.d_values)
      if (!d.is_integer()) throw ConfigError("transfer matrices take integer d, got " + d.str());
    return;
  }
  if (c.L < 4 || c.L % 2 != 0) throw ConfigError("L must be even and >= 4, got " + std::to_string(c.L));
  if (c.d_values.empty()) throw ConfigError("d_values is empty");
  if (command == "verify") return;
  for (const DValue &d : c.d_values) {
    if (c.geometry == Geometry::LocalOddEven && d.is_integer())
      throw ConfigError("local-odd-even places X on an odd site and Y on an even one: d must be a half-integer");
    if (c.geometry != Geometry::LocalOddEven && !d.is_integer())
      throw ConfigError("half-integer d needs geometry = local-odd-even");
  }
  const Quantity q = c.quantity;
  if (q == Quantity::Spectrum) throw ConfigError("quantity = spectrum belongs to the spectrum command");
  if (c.geometry == Geometry::Macro && !(q == Quantity::OPMI || q == Quantity::FXYbar))
    throw ConfigError("macro geometry supports quantity opmi or fxybar");
  if (is_local(c.geometry) && q == Quantity::OPMI)
    throw ConfigError("quantity opmi needs geometry = macro");
}

}  // namespace dusc

#endif  // DUSC_CONFIG_HPP
