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

#ifndef DUSC_CLI_HPP
#define DUSC_CLI_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "dusc/circuits.hpp"
#include "dusc/config.hpp"
#include "dusc/eigencorr.hpp"
#include "dusc/opent.hpp"
#include "dusc/replica.hpp"
#include "dusc/rng.hpp"
#include "dusc/scrambling.hpp"
#include "json.hpp"

#ifndef DUSC_VERSION
#define DUSC_VERSION "dev"
#endif

namespace dusc {

enum ExitCode : int { kOk = 0, kAssertion = 1, kConfig = 2, kBudget = 3 };

// ---------------------------------------------------------------------------
// Tabular output
// ---------------------------------------------------------------------------

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> provenance;
};

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const Cell &c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(const std::string &s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

inline void write_csv(std::ostream &os, const Table &t) {
  for (const auto &[k, v] : t.provenance) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto &r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
}

inline void write_json(std::ostream &os, const Table &t) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto &[k, v] : t.provenance) prov[k] = v;
  j["provenance"] = prov;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto &r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < r.size(); ++i) {
      struct V {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(long long x) const { return x; }
        nlohmann::ordered_json operator()(double x) const {
          if (!std::isfinite(x)) return format_real(x);
          return x;
        }
        nlohmann::ordered_json operator()(const std::string &s) const { return s; }
      };
      o[t.columns[i]] = std::visit(V{}, r[i]);
    }
    j["rows"].push_back(o);
  }
  os << j.dump(2) << "\n";
}

inline void emit(const Table &t, const RunConfig &c, std::ostream &fallback) {
  auto put = [&](std::ostream &os) {
    if (c.format == Format::JSON) write_json(os, t);
    else write_csv(os, t);
  };
  if (c.output.empty() || c.output == "-") {
    put(fallback);
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw ConfigError("cannot write '" + c.output + "'");
  put(f);
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/** Config echo and code version; the timestamp line is the only run-dependent field. */
inline std::vector<std::pair<std::string, std::string>> provenance(const RunConfig &c,
                                                                   const std::string &command) {
  std::vector<std::pair<std::string, std::string>> p;
  p.emplace_back("command", command);
  p.emplace_back("version", DUSC_VERSION);
  p.emplace_back("master_seed", std::to_string(c.master_seed));
  p.emplace_back("seed_derivation", "splitmix64(splitmix64(master) ^ (index * 0xd1342543de82ef95 + 1))");
  for (const auto &[k, v] : c.echo)
    if (k != "master_seed" && k != "seed") p.emplace_back("config." + k, v);
  return p;
}

inline void stamp(Table &t, double wall_seconds) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", wall_seconds);
  t.provenance.emplace_back("timestamp", utc_timestamp() + " wall_time_s=" + wall);
}

// ---------------------------------------------------------------------------
// Cell geometry
// ---------------------------------------------------------------------------

struct Placement {
  std::vector<int> X, Y;
  bool fits = true;
  std::string why;
};

inline std::vector<int> ring_segment(int from, int to, int L) {
  std::vector<int> s;
  for (int i = from;; ++i) {
    s.push_back(ring_site(i, L));
    if (ring_site(i, L) == ring_site(to, L)) break;
  }
  return s;
}

/**
 * Local: single sites, i_Y = i_X + 2t + 2d. Macro: X ends at i_X, Y starts
 * at i_Y = i_X + 2t + 2d; a far gap (default 2t sites) separates the end of
 * Y from the start of X, the remaining sites are split between Y and X.
 */
inline Placement place(const RunConfig &c, DValue d, int t) {
  Placement p;
  const int L = c.L;
  const int ix = c.x_site ? c.x_site : (c.geometry == Geometry::LocalOddEven ? 1 : 2);
  const int iy = ix + 2 * t + d.twice;
  if (is_local(c.geometry)) {
    p.X = {ring_site(ix, L)};
    p.Y = {ring_site(iy, L)};
    return p;
  }
  const int gap = iy - ix - 1;  // may be negative: X (input) and Y (output) then overlap
  const int g2 = c.far_gap < 0 ? 2 * t : c.far_gap;
  const int rest = L - gap - g2;  // |X| + |Y|
  const int ny = rest / 2, nx = rest - ny;
  if (ny < 1 || nx < 1 || nx > L || ny > L) {
    p.fits = false;
    p.why = "macro geometry does not fit (near gap " + std::to_string(gap) + ", far gap " +
            std::to_string(g2) + ", L " + std::to_string(L) + ")";
    return p;
  }
  const int b = iy + ny - 1;
  const int a = b + 1 + g2;
  p.Y = ring_segment(iy, b, L);
  p.X = ring_segment(a, a + nx - 1, L);
  return p;
}

/** Inside the comparison window 2t + 2|d| + 2 <= L. */
inline bool in_window(const RunConfig &c, DValue d, int t) {
  return 2 * t + std::abs(d.twice) + 2 <= c.L;
}

/**
 * Exact per-instance values off the light ray need the cone of X not to
 * come round the ring onto Y: 4t + 2|d| <= L. Conservative for F^{XY},
 * sharp for the OTOC.
 */
inline bool cone_clear(const RunConfig &c, DValue d, int t) {
  return 4 * t + std::abs(d.twice) <= c.L;
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

struct CellSpec {
  DValue d;
  int t = 0;
  Placement where;
  std::optional<double> prediction;
  bool asserted = false;
  std::string note;
  std::string skip;  // non-empty: skipped, with reason
};

struct CellResult {
  CellSpec spec;
  int n = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
  double max_abs_dev = std::numeric_limits<double>::quiet_NaN();
  std::optional<bool> pass;
};

struct ScanResult {
  std::vector<CellResult> cells;
  Table table;
  bool any_failed = false;
  bool all_skipped_budget = false;
};

/** Ribbon parameters of T2 at d = -1 for the d < 0 leading-order predictions. */
struct RibbonCache {
  std::map<double, RibbonSummary> t2;
  const RibbonSummary *get(double J) {
    auto it = t2.find(J);
    if (it == t2.end()) it = t2.emplace(J, summarize(build_t2(J, -1))).first;
    return &it->second;
  }
};

/** Per-sample value of the configured quantity, in its natural normalisation. */
inline double sample_value(const RunConfig &c, const std::vector<Mat4> &gates, const CellSpec &cell,
                           const PatternRouteOptions &opt) {
  const int L = c.L, t = cell.t;
  const auto &X = cell.where.X, &Y = cell.where.Y;
  const double nx = double(X.size()), ny = double(Y.size());
  switch (c.quantity) {
    case Quantity::FXY:
      return fxy_fast(gates, L, t, X, Y, opt) / std::pow(4.0, L - 1);
    case Quantity::TwoPoint:
      return fxy_fast(gates, L, t, X, Y, opt) / std::pow(2.0, 2 * L + nx + ny);
    case Quantity::OPMI:
      return std::pow(2.0, nx + ny - 2 * L) * fxy_fast(gates, L, t, X, Y, opt);
    case Quantity::OTOC:
      return std::pow(2.0, nx + (L - ny) - 2 * L) * fxybar_fast(gates, L, t, X, Y, opt) /
             std::pow(4.0, nx);
    case Quantity::FXYbar:
      if (c.geometry == Geometry::Macro)
        return fxybar_fast(gates, L, t, X, Y, opt) / fxybar_fast(gates, L, 0, X, Y, opt);
      return fxybar_fast(gates, L, t, X, Y, opt) / std::ldexp(1.0, L);
    case Quantity::Spectrum:
      break;
  }
  throw ConfigError("quantity not scannable");
}

inline std::string normalisation(const RunConfig &c) {
  switch (c.quantity) {
    case Quantity::FXY:
      return "F^{XY}(t) / 4^(L-1)";
    case Quantity::TwoPoint:
      return "C_XY(t) = F^{XY} / 2^(2L+|X|+|Y|)";
    case Quantity::OPMI:
      return "exp I2^{XY}(U_t)";
    case Quantity::OTOC:
      return "D_XY(t) = 2^(|X|+|Ybar|-2L) F^{X Ybar} / 4^|X|";
    case Quantity::FXYbar:
      return c.geometry == Geometry::Macro ? "exp Delta I2^{X Ybar} = F^{X Ybar}(t) / F^{X Ybar}(0)"
                                            : "F^{X Ybar}(t) / 2^L";
    case Quantity::Spectrum:
      break;
  }
  return "";
}

/** Closed-form value of a cell and whether it is asserted (exact or ensemble law in window). */
inline void predict(const RunConfig &c, CellSpec &cell, RibbonCache &ribbons) {
  const DValue d = cell.d;
  const int t = cell.t;
  const double J = c.J;
  const bool window = in_window(c, d, t);
  auto set = [&](double v, bool assertable, const std::string &note = "") {
    cell.prediction = v;
    cell.asserted = assertable && window;
    cell.note = note.empty() ? (window ? "" : "outside comparison window") : note;
  };
  const bool clear = d.twice == 0 || cone_clear(c, d, t);
  const std::string wraps = "cone wraps the ring (4t + 2|d| > L)";
  switch (c.quantity) {
    case Quantity::FXY:
      set(analytic::f_local(c.L, t, d.value(), J) / std::pow(4.0, c.L - 1), clear,
          clear ? "" : wraps);
      return;
    case Quantity::TwoPoint:
      set(analytic::f_local(c.L, t, d.value(), J) / std::pow(4.0, c.L + 1), clear,
          clear ? "" : wraps);
      return;
    case Quantity::FXYbar:
    case Quantity::OTOC: {
      const double scale = c.quantity == Quantity::OTOC ? 0.25 : 1.0;
      if (c.geometry == Geometry::Macro) {
        // exact per instance once the cone has passed Y (t > |d|)
        const int di = d.as_int();
        set(analytic::delta_opmi_macro(di), di > 0 || t > -di,
            (di <= 0 && t <= -di) ? "t <= |d|: before the cone reaches Y" : "");
        return;
      }
      if (d.twice > 0 || d.twice == 0) {
        set(scale * analytic::f_xybar_local(c.L, t, d.value(), J, 0, 0) / std::ldexp(1.0, c.L), clear,
            clear ? "" : wraps);
        return;
      }
      if (d.twice == -1) {
        set(scale * analytic::f_xybar_local(c.L, t, -0.5, J, 0, 0) / std::ldexp(1.0, c.L), true);
        return;
      }
      if (d.twice == -2 && t >= 1) {
        const RibbonSummary *r = ribbons.get(J);
        set(scale * 1.75 * (1.0 + r->c * std::pow(r->Gamma, 2 * t)), false,
            "leading order, Gamma and c from T2");
        return;
      }
      return;
    }
    case Quantity::OPMI: {
      const int di = d.as_int();
      if (di > 0) set(1.0, true);
      else if (di == 0) set(analytic::opmi_macro(t, 0, J), true);
      else set(analytic::opmi_macro(t, di, J), false, "leading order");
      return;
    }
    case Quantity::Spectrum:
      return;
  }
}

/** Gate-independent check that every reduced cluster fits the budget. */
inline std::string budget_check(const RunConfig &c, const CellSpec &cell) {
  auto worst = [&](const std::vector<char> &in, const std::vector<char> &out) {
    const ReducedNetwork net = reduce_network(c.L, cell.t, in, out);
    std::size_t w = 0;
    for (const auto &comp : net.components) w = std::max(w, comp.size());
    return static_cast<int>(w);
  };
  const auto &X = cell.where.X, &Y = cell.where.Y;
  int w = 0;
  if (c.quantity == Quantity::FXYbar || c.quantity == Quantity::OTOC)
    w = worst(site_mask(X, c.L), site_mask(Y, c.L, 0));
  else
    w = worst(site_mask(X, c.L), site_mask(Y, c.L));
  if (w > c.budget.max_cluster_sites)
    return "budget: reduced cluster of " + std::to_string(w) + " sites > max_cluster_sites " +
           std::to_string(c.budget.max_cluster_sites);
  return "";
}

/** Runs `job(i)` for i in [0, n) on `threads` workers; job must write only its own slot. */
template <typename F>
void parallel_for(int n, int threads, F &&job) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < std::min(threads, n); ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto &th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline ScanResult cmd_scan(const RunConfig &c) {
  validate(c, "scan");
  const auto t0 = std::chrono::steady_clock::now();
  RibbonCache ribbons;
  std::vector<CellSpec> cells;
  for (const DValue &d : c.d_values)
    for (int t = c.t_min; t <= c.t_max; ++t) {
      CellSpec s;
      s.d = d;
      s.t = t;
      s.where = place(c, d, t);
      if (!s.where.fits) s.skip = "geometry: " + s.where.why;
      else s.skip = budget_check(c, s);
      if (s.skip.empty()) {
        try {
          predict(c, s, ribbons);
        } catch (const BudgetError &e) {
          s.note = std::string("no prediction: ") + e.what();
        }
      }
      cells.push_back(s);
    }

  PatternRouteOptions opt;
  opt.max_component_sites = c.budget.max_cluster_sites;
  // samples[cell][sample]; sample i always uses the circuit seeded by (master, i)
  std::vector<std::vector<double>> samples(cells.size(), std::vector<double>(c.n_samples));
  parallel_for(c.n_samples, c.threads, [&](int i) {
    Rng rng = make_rng(c.master_seed, std::uint64_t(i));
    const auto gates = sample_circuit_gates(c.J, c.L, rng);
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].skip.empty()) samples[k][i] = sample_value(c, gates, cells[k], opt);
  });

  ScanResult res;
  res.table.columns = {"d", "t", "n", "mean", "stderr", "prediction", "sigma_discrepancy",
                       "max_abs_dev", "asserted", "pass", "status"};
  int skipped_budget = 0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    CellResult r;
    r.spec = cells[k];
    if (cells[k].skip.empty()) {
      const auto &v = samples[k];
      r.n = c.n_samples;
      double m = 0.0;
      for (double x : v) m += x;
      m /= r.n;
      double var = 0.0;
      for (double x : v) var += (x - m) * (x - m);
      r.mean = m;
      r.stderr_ = r.n > 1 ? std::sqrt(var / (r.n - 1) / r.n) : 0.0;
      if (r.spec.prediction) {
        double dev = 0.0;
        for (double x : v) dev = std::max(dev, std::abs(x - *r.spec.prediction));
        r.max_abs_dev = dev;
        if (r.spec.asserted) {
          const double p = *r.spec.prediction;
          r.pass = std::abs(m - p) <= 3.0 * r.stderr_ + 1e-10 * std::max(1.0, std::abs(p));
          if (!*r.pass) res.any_failed = true;
        }
      }
    } else if (cells[k].skip.rfind("budget", 0) == 0) {
      ++skipped_budget;
    }
    res.cells.push_back(r);

    std::vector<Cell> row;
    row.emplace_back(r.spec.d.str());
    row.emplace_back((long long)r.spec.t);
    row.emplace_back((long long)r.n);
    auto num = [](double x) -> Cell { return std::isnan(x) ? Cell{} : Cell{x}; };
    row.push_back(num(r.mean));
    row.push_back(num(r.stderr_));
    row.push_back(r.spec.prediction ? Cell{*r.spec.prediction} : Cell{});
    if (r.spec.prediction && r.n > 0) {
      const double diff = r.mean - *r.spec.prediction;
      double sig;
      if (r.stderr_ > 0) sig = diff / r.stderr_;
      else sig = std::abs(diff) <= 1e-10 * std::max(1.0, std::abs(*r.spec.prediction))
                     ? 0.0
                     : std::copysign(std::numeric_limits<double>::infinity(), diff);
      row.emplace_back(sig);
    } else {
      row.emplace_back();
    }
    row.push_back(num(r.max_abs_dev));
    row.emplace_back(r.spec.asserted);
    row.push_back(r.pass ? Cell{*r.pass} : Cell{});
    row.emplace_back(r.spec.skip.empty() ? (r.spec.note.empty() ? std::string("ok") : r.spec.note)
                                         : "skipped: " + r.spec.skip);
    res.table.rows.push_back(std::move(row));
  }
  res.all_skipped_budget = !cells.empty() && skipped_budget == static_cast<int>(cells.size());
  res.table.provenance = provenance(c, "scan");
  res.table.provenance.emplace_back("quantity", to_string(c.quantity) + " [" + normalisation(c) + "]");
  res.table.provenance.emplace_back("geometry", to_string(c.geometry));
  res.table.provenance.emplace_back("tolerance", "|mean - prediction| <= 3 stderr + 1e-10 max(1, |prediction|)");
  stamp(res.table, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return res;
}

// ---------------------------------------------------------------------------
// Verify
// ---------------------------------------------------------------------------

struct VerifyRow {
  std::string check;
  double J = 0.0;
  int sample = 0;
  std::uint64_t seed = 0;
  int t = -1;
  std::string detail;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;
  bool pass = true;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  Table table;
  int failures = 0;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string sites_str(const std::vector<int> &s) {
  std::string o = "{";
  for (std::size_t i = 0; i < s.size(); ++i) o += (i ? " " : "") + std::to_string(s[i]);
  return o + "}";
}

/**
 * Per-instance identity suite: gate unitarity and dual-unitarity, U_F and
 * eigenbasis residuals, purity sum rules, quartet sum vs purity, pattern
 * route vs dense purity, Pauli-averaged correlators vs opMI, and the macro
 * opMI jump.
 */
inline VerifyReport cmd_verify(const RunConfig &c) {
  validate(c, "verify");
  if (c.L > 8) throw BudgetError("verify runs dense checks and is capped at L = 8");
  const auto t0 = std::chrono::steady_clock::now();
  const int L = c.L;
  const double ln2 = std::log(2.0);
  VerifyReport rep;
  const int tmax = c.t_max;
  const auto grid = c.j_grid();
  const int per_j = c.n_samples;
  std::vector<std::vector<VerifyRow>> slots(grid.size() * per_j);

  parallel_for(static_cast<int>(slots.size()), c.threads, [&](int job) {
    const double J = grid[job / per_j];
    const int i = job % per_j;
    const std::uint64_t seed = derive_seed(c.master_seed, std::uint64_t(job));
    auto &out = slots[job];
    auto add = [&](std::string check, int t, std::string detail, double v, double ref, double err,
                   double tol) {
      out.push_back({std::move(check), J, i, seed, t, std::move(detail), v, ref, err, err <= tol});
    };
    Rng rng(seed);
    auto gates = sample_circuit_gates(J, L, rng);
    if (c.corrupt_gate) gates[0] *= 1.01;  // test hook

    for (int s = 0; s < L; ++s) {
      add("gate_unitarity", -1, "bond " + std::to_string(s + 1), unitarity_defect(gates[s]), 0.0,
          unitarity_defect(gates[s]), 1e-10);
      add("gate_dual_unitarity", -1, "bond " + std::to_string(s + 1), dual_unitarity_defect(gates[s]),
          0.0, dual_unitarity_defect(gates[s]), 1e-10);
    }
    const FloquetOperator U = floquet_from_gates(L, gates, c.budget.max_dense_L);
    add("floquet_unitarity", 1, "", unitarity_defect(U.matrix), 0.0, unitarity_defect(U.matrix), 1e-10);

    std::optional<EigenData> eig;
    try {
      eig = diagonalize(U);
      add("eigen_residual", -1, "", eig->residual, 0.0, eig->residual, 1e-8);
    } catch (const std::runtime_error &e) {
      add("eigen_residual", -1, e.what(), 1.0, 0.0, 1.0, 1e-8);
    }
    const bool quartet = eig && L <= c.budget.max_quartet_L;

    const std::vector<int> X{2};
    for (int t = 0; t <= tmax; ++t) {
      const DoubledState st = doubled_state(U, t);
      // purity sum rules: S2 of one layer is |A| ln 2, and A, complement agree
      {
        const std::vector<int> A{1, 2};
        const double p = purity(st, {input_sites(A)});
        add("purity_single_layer", t, "in" + sites_str(A), p, std::pow(2.0, -double(A.size())),
            rel_err(p, std::pow(2.0, -double(A.size()))), 1e-10);
        const std::vector<int> B{2, 3};
        const double pa = purity(st, {input_sites(A), output_sites(B)});
        const double pc = purity(st, {input_sites(complement_sites(A, L)),
                                      output_sites(complement_sites(B, L))});
        add("purity_complement", t, "in" + sites_str(A) + " out" + sites_str(B), pa, pc,
            rel_err(pa, pc), 1e-10);
      }
      for (int y = 1; y <= L; ++y) {
        const std::vector<int> Y{y};
        const std::string geo = "X" + sites_str(X) + " Y" + sites_str(Y);
        const double Fd = f_from_purity(st, input_sites(X), output_sites(Y));
        const double Fp = fxy_fast(gates, L, t, X, Y);
        add("route_pattern_fxy", t, geo, Fp, Fd, rel_err(Fp, Fd), 1e-8);
        const auto Yb = complement_sites(Y, L);
        const double Fbd = f_from_purity(st, input_sites(X), output_sites(Yb));
        const double Fbp = fxybar_fast(gates, L, t, X, Y);
        add("route_pattern_fxybar", t, geo, Fbp, Fbd, rel_err(Fbp, Fbd), 1e-8);

        const double I = opmi(st, input_sites(X), output_sites(Y));
        const double C = two_point_avg(U, t, X, Y, {c.budget.max_pauli_log4, c.budget.max_dense_L});
        const double Cref = std::exp(I) / std::pow(4.0, double(X.size() + Y.size()));
        add("two_point_vs_opmi", t, geo, C, Cref, rel_err(C, Cref), 1e-8);
        const double Ib = opmi(st, input_sites(X), output_sites(Yb));
        const double D = otoc_avg(U, t, X, Y, {c.budget.max_pauli_log4, c.budget.max_dense_L});
        const double Dref = std::exp(Ib) / std::pow(4.0, double(X.size()));
        add("otoc_vs_opmi", t, geo, D, Dref, rel_err(D, Dref), 1e-8);
      }
    }
    if (quartet) {
      QuartetOptions qo{c.budget.max_quartet_L};
      std::vector<int> ts;
      for (int t = 0; t <= tmax; ++t) ts.push_back(t);
      std::vector<DoubledState> states;
      for (int t : ts) states.push_back(doubled_state(U, t));
      for (int y = 1; y <= L; ++y) {
        const std::vector<int> Y{y};
        const auto Fq = f_xy_quartet_series(*eig, X, Y, ts, qo);
        for (int t : ts) {
          const double Fd = f_from_purity(states[t], input_sites(X), output_sites(Y));
          const std::string geo = "X" + sites_str(X) + " Y" + sites_str(Y);
          add("quartet_vs_purity", t, geo, Fq[t].real(), Fd, rel_err(Fq[t].real(), Fd), 1e-8);
          add("quartet_imaginary", t, geo, Fq[t].imag(), 0.0,
              std::abs(Fq[t].imag()) / std::max(1.0, std::abs(Fq[t].real())), 1e-8);
        }
      }
    }
    // macro opMI jump, asserted once the cone has passed Y (t > |d|) or for d > 0
    RunConfig mc = c;
    mc.geometry = Geometry::Macro;
    for (int d = -1; d <= 1; ++d)
      for (int t = 1; t <= tmax; ++t) {
        if (d <= 0 && t <= -d) continue;
        const Placement p = place(mc, DValue{2 * d}, t);
        if (!p.fits) continue;
        const double dI = delta_opmi_xybar(U, t, p.X, p.Y);
        const double ref = analytic::delta_opmi_macro(d);
        add("macro_opmi_jump", t, "d=" + std::to_string(d) + " X" + sites_str(p.X) + " Y" + sites_str(p.Y),
            std::exp(dI), ref, rel_err(std::exp(dI), ref), 1e-8);
      }
    (void)ln2;
  });

  rep.table.columns = {"check", "J", "sample", "seed", "t", "detail", "value", "reference", "error", "pass"};
  for (auto &s : slots)
    for (auto &r : s) {
      if (!r.pass) ++rep.failures;
      rep.table.rows.push_back({r.check, r.J, (long long)r.sample, std::to_string(r.seed),
                                (long long)r.t, r.detail, r.value, r.reference, r.error, r.pass});
      rep.rows.push_back(std::move(r));
    }
  rep.table.provenance = provenance(c, "verify");
  rep.table.provenance.emplace_back("failures", std::to_string(rep.failures));
  stamp(rep.table, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return rep;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

struct SpectrumReport {
  Table table;
  int errors = 0;
  int budget_errors = 0;
};

inline SpectrumReport cmd_spectrum(const RunConfig &c) {
  validate(c, "spectrum");
  const auto t0 = std::chrono::steady_clock::now();
  SpectrumReport rep;
  rep.table.columns = {"kind", "J", "d", "rank", "eigenvalue", "weight", "multiplicity",
                       "Lambda", "Gamma", "c", "e", "mirror_defect", "transpose_defect", "status"};
  for (const std::string &ks : c.kinds) {
    const TMKind kind = ks == "T1" ? TMKind::T1 : ks == "T2" ? TMKind::T2 : TMKind::T3;
    std::vector<DValue> ds = c.d_values;
    if (kind == TMKind::T1) ds = {DValue{0}};
    for (double J : c.j_grid())
      for (const DValue &dv : ds) {
        const int d = dv.as_int();
        std::vector<Cell> head{ks, J, (long long)d};
        try {
          if (std::abs(d) > c.budget.max_ribbon)
            throw BudgetError("|d| = " + std::to_string(std::abs(d)) + " > max_ribbon");
          const TransferMatrix T = build_transfer(kind, J, d);
          const auto lines = leading_spectrum(T, c.spectrum_k);
          const RibbonSummary s = summarize(T);
          const double mdef = hermiticity_defect(T), tdef = transpose_defect(T);
          for (std::size_t r = 0; r < lines.size(); ++r) {
            auto row = head;
            row.emplace_back((long long)(r + 1));
            row.emplace_back(lines[r].eigenvalue);
            row.emplace_back(lines[r].weight);
            row.emplace_back((long long)lines[r].multiplicity);
            auto opt = [](double x) { return x == 0.0 ? Cell{} : Cell{x}; };
            row.push_back(opt(s.Lambda));
            row.push_back(opt(s.Gamma));
            row.push_back(opt(s.c));
            row.push_back(kind == TMKind::T2 ? Cell{} : opt(s.e));
            row.emplace_back(mdef);
            row.emplace_back(tdef);
            row.emplace_back(std::string("ok"));
            rep.table.rows.push_back(std::move(row));
          }
        } catch (const BudgetError &e) {
          ++rep.errors;
          ++rep.budget_errors;
          auto row = head;
          row.resize(rep.table.columns.size());
          row.back() = std::string("skipped: budget: ") + e.what();
          rep.table.rows.push_back(std::move(row));
        } catch (const ConfigError &e) {
          ++rep.errors;
          auto row = head;
          row.resize(rep.table.columns.size());
          row.back() = std::string("error: ") + e.what();
          rep.table.rows.push_back(std::move(row));
        } catch (const std::runtime_error &e) {
          ++rep.errors;
          auto row = head;
          row.resize(rep.table.columns.size());
          row.back() = std::string("non-convergence: ") + e.what();
          rep.table.rows.push_back(std::move(row));
        }
      }
  }
  rep.table.provenance = provenance(c, "spectrum");
  rep.table.provenance.emplace_back(
      "weights", "coefficient of lambda^m in r . T^m . l, summed over degenerate blocks");
  stamp(rep.table, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return rep;
}

}  // namespace dusc

#endif  // DUSC_CLI_HPP
