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

// Experiment runner behind the swapreg executable.

#ifndef SWAPREG_CLI_HPP_
#define SWAPREG_CLI_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "swapreg/adversary.hpp"
#include "swapreg/engine.hpp"
#include "swapreg/io.hpp"
#include "swapreg/polydim.hpp"

namespace swapreg::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeFault = 3 };

enum class LogLevel { Error, Info, Debug };

// From SWAPREG_LOG; defaults to info.
LogLevel log_level();

enum class Algorithm { Alg1, Alg2Preconditioned, Alg4Approx, Alg3Poly };

struct ExperimentConfig {
  ConvexSet pset = ConvexSet::ball(Norm::Linf, 1);
  ConvexSet lset = ConvexSet::ball(Norm::L1, 1);
  Algorithm algorithm = Algorithm::Alg1;
  StepOptions step;
  PolyOptions poly;
  int degree = 2;
  std::string adversary = "iid";
  Eigen::Index adversary_d = 0;
  std::vector<Eigen::VectorXd> replay;
  long horizon = 1;
  std::uint64_t seed = 0;
  std::vector<long> checkpoints;
};

// Throws ConfigError. `seed` overrides the config's seed. Relative replay
// paths resolve against `base_dir`.
ExperimentConfig parse_config(const io::Json& j, std::optional<std::uint64_t> seed = {},
                              const std::string& base_dir = ".");

std::shared_ptr<Adversary> make_adversary(const ExperimentConfig& cfg);

// Powers of two below T, then T.
std::vector<long> default_checkpoints(long horizon);

// Maps library errors to exit codes and prints "error: <Kind>: <what>".
int guarded(std::ostream& err, const std::function<int()>& body);

int cmd_run(const io::Json& config, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err, const std::string& base_dir = ".");
int cmd_eval(const std::string& history_csv, const io::Json& set_spec,
             const std::optional<io::Json>& loss_spec, const std::string& out_dir, std::ostream& out,
             std::ostream& err);
int cmd_lowerbound(Eigen::Index d, std::optional<long> horizon, std::uint64_t seed,
                   const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_selftest(std::ostream& out, std::ostream& err);
// {"cells":[{"config": {...} | "path", "seed": n}, ...]}; cell i writes to
// out_dir/cell_i. Cells run on up to hardware_concurrency threads.
int cmd_sweep(const io::Json& sweep, const std::string& out_dir, std::ostream& out, std::ostream& err,
              const std::string& base_dir = ".");

}  // namespace swapreg::cli

#endif  // SWAPREG_CLI_HPP_
