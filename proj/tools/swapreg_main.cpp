// Copyright 2026 The swapreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swapreg/cli.hpp"
#include "swapreg/errors.hpp"

namespace {

namespace fs = std::filesystem;
using swapreg::io::Json;

// Inline JSON or a path to a JSON file.
Json load_json(const std::string& arg) {
  try {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return Json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw swapreg::ConfigError("cannot read " + arg);
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw swapreg::ConfigError(arg + ": " + e.what());
  }
}

std::string parent_of(const std::string& path) {
  const fs::path p = fs::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear swap regret via approachability"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string sweep;
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  run->add_option("--config", config, "JSON config");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--sweep", sweep, "JSON list of (config, seed) cells");

  std::string history;
  std::string set_spec;
  std::string loss_spec;
  std::string eval_out;
  auto* eval = app.add_subcommand("eval", "Re-evaluate a recorded transcript");
  eval->add_option("--history", history, "Transcript CSV (t, p_1.., l_1..)")->required();
  eval->add_option("--set", set_spec, "Strategy set JSON or file")->required();
  eval->add_option("--loss-set", loss_spec, "Loss set JSON or file (default: polar)");
  eval->add_option("--out", eval_out, "Output directory for report.json");

  Eigen::Index dim = 4;
  std::optional<long> horizon;
  auto* lower = app.add_subcommand("lowerbound", "Preconditioned run against the combined adversary");
  lower->add_option("--d", dim, "Dimension of each factor")->check(CLI::Range(2, 64));
  lower->add_option("--T", horizon, "Horizon (default 16 d^2 (d+1)^2)");
  lower->add_option("--seed", seed, "Seed");
  lower->add_option("--out", out_dir, "Output directory");

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : swapreg::cli::kConfigError;
  }

  if (*run) {
    if (!sweep.empty()) {
      return swapreg::cli::guarded(std::cerr, [&] {
        return swapreg::cli::cmd_sweep(load_json(sweep), out_dir, std::cout, std::cerr, parent_of(sweep));
      });
    }
    if (config.empty()) {
      std::cerr << "error: ConfigError: run needs --config or --sweep\n";
      return swapreg::cli::kConfigError;
    }
    return swapreg::cli::guarded(std::cerr, [&] {
      return swapreg::cli::cmd_run(load_json(config), out_dir, seed, std::cout, std::cerr, parent_of(config));
    });
  }
  if (*eval) {
    return swapreg::cli::guarded(std::cerr, [&] {
      std::optional<Json> loss;
      if (!loss_spec.empty()) loss = load_json(loss_spec);
      return swapreg::cli::cmd_eval(history, load_json(set_spec), loss, eval_out, std::cout, std::cerr);
    });
  }
  if (*lower) {
    return swapreg::cli::cmd_lowerbound(dim, horizon, seed.value_or(0), out_dir, std::cout, std::cerr);
  }
  if (*self) return swapreg::cli::cmd_selftest(std::cout, std::cerr);
  return swapreg::cli::kConfigError;
}
