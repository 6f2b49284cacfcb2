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

// dusc verify|scan|spectrum --config run.cfg [--output f] [--format csv|json]
//                           [--threads N] [--seed S]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dusc/cli.hpp"

namespace {

struct Flags {
  std::string config;
  std::string output;
  std::string format;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App *sub, Flags &f) {
  sub->add_option("--config", f.config, "flat key = value config file")->required();
  sub->add_option("--output", f.output, "output path (default: stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", f.seed, "master seed, overrides the config");
}

dusc::RunConfig load(const Flags &f) {
  dusc::RunConfig c = dusc::load_config(f.config);
  if (!f.output.empty()) c.output = f.output;
  if (!f.format.empty()) c.format = dusc::parse_format(f.format);
  if (f.threads) c.threads = *f.threads;
  if (f.seed) {
    c.master_seed = *f.seed;
    c.echo.emplace_back("seed_override", std::to_string(*f.seed));
  }
  return c;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"dual-unitary scrambling laboratory"};
  app.require_subcommand(1);
  Flags fv, fs, fp;
  auto *verify = app.add_subcommand("verify", "per-instance identity suite");
  auto *scan = app.add_subcommand("scan", "Monte-Carlo scan over the (d, t) plane");
  auto *spectrum = app.add_subcommand("spectrum", "transfer-matrix eigenvalues and boundary weights");
  add_flags(verify, fv);
  add_flags(scan, fs);
  add_flags(spectrum, fp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? dusc::kOk : dusc::kConfig;
  }

  try {
    if (*verify) {
      const auto c = load(fv);
      const auto rep = dusc::cmd_verify(c);
      dusc::emit(rep.table, c, std::cout);
      if (rep.failures) {
        for (const auto &r : rep.rows)
          if (!r.pass)
            std::cerr << "FAIL " << r.check << " J=" << r.J << " sample=" << r.sample
                      << " seed=" << r.seed << " t=" << r.t << " " << r.detail
                      << " error=" << r.error << "\n";
        return dusc::kAssertion;
      }
      return dusc::kOk;
    }
    if (*scan) {
      const auto c = load(fs);
      const auto res = dusc::cmd_scan(c);
      dusc::emit(res.table, c, std::cout);
      if (res.all_skipped_budget) return dusc::kBudget;
      return res.any_failed ? dusc::kAssertion : dusc::kOk;
    }
    if (*spectrum) {
      const auto c = load(fp);
      const auto rep = dusc::cmd_spectrum(c);
      dusc::emit(rep.table, c, std::cout);
      if (rep.errors && rep.errors == rep.budget_errors && rep.table.rows.size() == std::size_t(rep.errors))
        return dusc::kBudget;
      return rep.errors ? dusc::kAssertion : dusc::kOk;
    }
  } catch (const dusc::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dusc::kConfig;
  } catch (const dusc::BudgetError &e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return dusc::kBudget;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return dusc::kAssertion;
  }
  return dusc::kOk;
}
