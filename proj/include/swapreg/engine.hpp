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

// Response-based approachability for linear swap regret.

#ifndef SWAPREG_ENGINE_HPP_
#define SWAPREG_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "swapreg/geometry.hpp"
#include "swapreg/john.hpp"
#include "swapreg/saddle.hpp"

namespace swapreg {

// A point (l (x) p, l) of the approachability space. `mat` is l p^T.
struct Csp {
  Eigen::MatrixXd mat;
  Eigen::VectorXd vec;

  static Csp zero(Eigen::Index d);
  static Csp profile(const Eigen::VectorXd& l, const Eigen::VectorXd& p);

  double norm() const;
  // <U, (mat, vec)> for U = [U_mat | U_vec] of shape d x (d+1).
  double dot(const Eigen::MatrixXd& u) const;
  // [mat | vec]
  Eigen::MatrixXd stacked() const;
  Csp& operator+=(const Csp& other);
  Csp& operator-=(const Csp& other);
  Csp& operator*=(double s);
};

Csp operator-(Csp a, const Csp& b);

struct ApproachState {
  long t = 0;
  Eigen::MatrixXd u;  // sum of kappa_tau - s_tau, d x (d+1)
  Csp kappa_bar;
  Csp s_bar;
  double norm_bound = 0.0;  // max round norm seen so far

  explicit ApproachState(Eigen::Index d = 0);
  Eigen::Index dim() const { return u.rows(); }
  double certificate() const { return (kappa_bar - s_bar).norm(); }
};

enum class GameSolver { Exact, Fpl };
enum class Mode { Exact, Approximate };

// Target duality gaps for the approximate mode. FPL iterations are doubled
// (at most `max_doublings` times) until the measured gap meets the target.
struct EpsSchedule {
  enum class Kind { None, Constant, InvSqrt };
  Kind kind = Kind::None;
  double value = 0.0;
  int max_doublings = 4;

  std::optional<double> target(long t) const;
};

struct StepOptions {
  Mode mode = Mode::Exact;
  GameSolver solver = GameSolver::Exact;
  int fpl_iters = 2000;
  std::uint64_t seed = 0;
  EpsSchedule eps;
};

struct RoundLog {
  long t = 0;
  Eigen::VectorXd p_played;  // original coordinates
  Eigen::VectorXd loss;      // original coordinates
  Eigen::VectorXd p_working;
  Eigen::VectorXd loss_working;
  Eigen::VectorXd l_star;
  Eigen::VectorXd best_response;  // b(l_star)
  Csp kappa;
  Csp s_target;
  double invariant_value = 0.0;
  double game_gap = 0.0;
  double game_value = 0.0;
  double inst_loss = 0.0;
  double cert_norm = 0.0;
  int fpl_iters = 0;
};

// The adversary sees the round index and the played strategy.
using LossOracle = std::function<Eigen::VectorXd(long t, const Eigen::VectorXd& p)>;

// One round. Throws AdversaryFault when the oracle's loss leaves `lset`.
RoundLog step(ApproachState& state, const ConvexSet& pset, const ConvexSet& lset,
              const StepOptions& options, const LossOracle& adversary);

struct RunConfig {
  ConvexSet pset;
  ConvexSet lset;
  long horizon = 1;
  StepOptions options;
};

struct Trajectory {
  std::vector<RoundLog> rounds;
  ApproachState state;
  std::optional<Preconditioner> preconditioner;

  // max_l ||l|| * max_p sqrt(||p||^2 + 1) over the working sets.
  double set_bound = 0.0;
  double certificate() const { return state.certificate(); }
  double mean_gap() const;
  double max_round_norm() const { return state.norm_bound; }
};

Trajectory run(const RunConfig& config, const LossOracle& adversary);

// Runs in John's position: P' = A P + c, L' = A^{-T} L. The oracle still
// receives and returns original-frame vectors.
Trajectory run_preconditioned(const RunConfig& config, const LossOracle& adversary);

double csp_bound(const ConvexSet& pset, const ConvexSet& lset);

struct PythagoreanResult {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Checks ||sum v_t|| <= sqrt(T B^2 + 2 sum (t-1) eps_t) after verifying
// ||v_t|| <= B and <mean of v_1..v_{t-1}, v_t> <= eps_t. Throws
// PremiseViolated with the first failing round (1-based).
PythagoreanResult pythagorean_check(const std::vector<Eigen::VectorXd>& vectors, double bound,
                                    const std::vector<double>& eps, double tol = 1e-12);

}  // namespace swapreg

#endif  // SWAPREG_ENGINE_HPP_
