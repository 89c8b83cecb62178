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

// Small dense linear-program solver (two-phase tableau simplex).
//
//   minimize    c^T x
//   subject to  A_ub x <= b_ub
//               A_eq x  = b_eq
//               lower <= x <= upper
//
// Bounds default to [0, +inf) when left empty; use LpProblem::free_variables
// for the unconstrained case. Problems are expected to be desk scale
// (hundreds to a few thousand rows).

#ifndef SWAPREG_LP_HPP_
#define SWAPREG_LP_HPP_

#include <limits>
#include <memory>

#include <Eigen/Dense>

namespace swapreg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// All solver tolerances live here.
struct Tolerances {
  double feasibility = 1e-7;
  double pivot = 1e-9;
  double optimality = 1e-9;
};
inline constexpr Tolerances kTolerances{};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

enum class PivotRule {
  // Smallest-index entering and leaving variables throughout.
  Bland,
  // Most negative reduced cost; falls back to Bland's rule while a run of
  // degenerate pivots is in progress, which keeps the method cycle free.
  DantzigWithBlandFallback,
};

struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  explicit LpProblem(Eigen::Index num_vars = 0);

  Eigen::Index num_vars() const { return objective.size(); }

  // Marks every variable as unbounded in both directions.
  LpProblem& free_variables();
  LpProblem& add_ineq(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs);
  LpProblem& add_eq(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs);

  // Throws InvalidArgument on inconsistent shapes or non-finite data.
  void validate() const;
};

struct SolveOptions {
  PivotRule rule = PivotRule::DantzigWithBlandFallback;
  Tolerances tol = kTolerances;
  // Zero selects an automatic cap proportional to the tableau size.
  long max_iterations = 0;
};

struct LpSolution {
  Status status = Status::Infeasible;
  Eigen::VectorXd point;
  double value = 0.0;
  long iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

LpSolution solve_lp(const LpProblem& problem, const SolveOptions& options = {});

// LP that grows by inequality rows. Each addition re-optimizes from the
// previous optimal basis with dual simplex pivots and falls back to a cold
// solve when that fails.
class IncrementalLp {
 public:
  explicit IncrementalLp(const LpProblem& problem, const SolveOptions& options = {});
  ~IncrementalLp();
  IncrementalLp(IncrementalLp&&) noexcept;
  IncrementalLp& operator=(IncrementalLp&&) noexcept;

  const LpSolution& solution() const;
  // The accumulated problem.
  const LpProblem& problem() const;
  const LpSolution& add_ineq(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Largest violation of the problem's constraints at x (0 when feasible).
double max_violation(const LpProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace swapreg::lp

#endif  // SWAPREG_LP_HPP_
