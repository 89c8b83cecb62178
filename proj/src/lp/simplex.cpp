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

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swapreg/errors.hpp"
#include "swapreg/lp.hpp"

namespace swapreg::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "Optimal";
    case Status::Infeasible:
      return "Infeasible";
    case Status::Unbounded:
      return "Unbounded";
  }
  return "?";
}

LpProblem::LpProblem(Eigen::Index num_vars)
    : objective(Eigen::VectorXd::Zero(num_vars)),
      ineq(0, num_vars),
      ineq_rhs(0),
      eq(0, num_vars),
      eq_rhs(0) {}

LpProblem& LpProblem::free_variables() {
  lower = Eigen::VectorXd::Constant(num_vars(), -kInf);
  upper = Eigen::VectorXd::Constant(num_vars(), kInf);
  return *this;
}

LpProblem& LpProblem::add_ineq(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs) {
  ineq.conservativeResize(ineq.rows() + 1, num_vars());
  ineq.row(ineq.rows() - 1) = row;
  ineq_rhs.conservativeResize(ineq_rhs.size() + 1);
  ineq_rhs(ineq_rhs.size() - 1) = rhs;
  return *this;
}

LpProblem& LpProblem::add_eq(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs) {
  eq.conservativeResize(eq.rows() + 1, num_vars());
  eq.row(eq.rows() - 1) = row;
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs(eq_rhs.size() - 1) = rhs;
  return *this;
}

void LpProblem::validate() const {
  const Eigen::Index n = num_vars();
  auto fail = [](const std::string& what) { throw InvalidArgument("solve_lp: " + what); };
  if (ineq.cols() != n && ineq.rows() > 0) fail("inequality matrix has wrong column count");
  if (eq.cols() != n && eq.rows() > 0) fail("equality matrix has wrong column count");
  if (ineq.rows() != ineq_rhs.size()) fail("inequality rhs size mismatch");
  if (eq.rows() != eq_rhs.size()) fail("equality rhs size mismatch");
  if (lower.size() != 0 && lower.size() != n) fail("lower bound size mismatch");
  if (upper.size() != 0 && upper.size() != n) fail("upper bound size mismatch");
  if (!objective.allFinite() || !ineq.allFinite() || !ineq_rhs.allFinite() || !eq.allFinite() ||
      !eq_rhs.allFinite()) {
    fail("non-finite data");
  }
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (std::isnan(lower(j))) fail("NaN lower bound");
  }
  for (Eigen::Index j = 0; j < upper.size(); ++j) {
    if (std::isnan(upper(j))) fail("NaN upper bound");
  }
}

double max_violation(const LpProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& x) {
  double worst = 0.0;
  if (problem.ineq.rows() > 0) {
    worst = std::max(worst, (problem.ineq * x - problem.ineq_rhs).maxCoeff());
  }
  if (problem.eq.rows() > 0) {
    worst = std::max(worst, (problem.eq * x - problem.eq_rhs).cwiseAbs().maxCoeff());
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = problem.lower.size() ? problem.lower(j) : 0.0;
    const double hi = problem.upper.size() ? problem.upper(j) : kInf;
    worst = std::max({worst, lo - x(j), x(j) - hi});
  }
  return worst;
}

namespace {

// Original variable x_j expressed through nonnegative standard-form columns:
//   x_j = offset + sign * y[col] (- y[col_neg] when free).
struct VarMap {
  double offset = 0.0;
  Eigen::Index col = -1;
  double sign = 1.0;
  Eigen::Index col_neg = -1;
};

class Tableau {
 public:
  Tableau(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::Index num_structural,
          const SolveOptions& options)
      : a_(std::move(a)), b_(std::move(b)), num_structural_(num_structural), opt_(options) {}

  // Runs both phases with cost vector c (over structural + slack columns).
  // With `perturb`, every right-hand side is raised by tiny
  // distinct amounts to break degeneracy; the returned point is recomputed
  // from the unperturbed data and rejected (status Infeasible) when the
  // final basis is not feasible for it.
  LpSolution solve(const Eigen::VectorXd& cost, bool perturb);

  // Appends rows ay y + s = by with fresh slacks to an optimal tableau and
  // restores optimality with dual simplex pivots.
  LpSolution append_rows(const Eigen::MatrixXd& ay, const Eigen::VectorXd& by);

 private:
  // Basic solution recomputed from the unperturbed data.
  LpSolution recover(long iterations);
  double perturbation(Eigen::Index row) const;
  // Rebuilds the phase 2 tableau from a fresh factorization of the basis.
  bool reinvert();
  void pivot(Eigen::Index row, Eigen::Index col);
  // Returns false when the LP is unbounded in the current phase.
  bool iterate(Eigen::Index allowed_cols, long& iterations);
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  Eigen::Index obj_row() const { return t_.rows() - 1; }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::Index num_structural_;
  SolveOptions opt_;

  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  Eigen::VectorXd cost_;
  bool perturb_ = false;
  bool phase2_ = false;
};

double Tableau::perturbation(Eigen::Index row) const {
  if (!perturb_) return 0.0;
  // Deterministic spread in [0.5, 1) keeps the perturbations distinct.
  const double u = 0.5 + 0.5 * std::fmod(0.6180339887498949 * static_cast<double>(row + 1), 1.0);
  return 1e-7 * u * (1.0 + std::abs(b_(row)));
}

bool Tableau::reinvert() {
  const Eigen::Index rows = obj_row();
  const Eigen::Index n = a_.cols();
  if (rows == 0 || t_.cols() != n + 1) return true;
  Eigen::MatrixXd basis_matrix(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) basis_matrix.col(i) = a_.col(basis_[static_cast<size_t>(i)]);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
  Eigen::VectorXd rhs = b_;
  for (Eigen::Index i = 0; i < rows; ++i) rhs(i) += perturbation(i);
  const Eigen::MatrixXd body = lu.solve(a_);
  const Eigen::VectorXd xb = lu.solve(rhs);
  if (!body.allFinite() || !xb.allFinite() ||
      (basis_matrix * xb - rhs).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
    return false;
  }
  t_.topLeftCorner(rows, n) = body;
  t_.col(n).head(rows) = xb;
  Eigen::VectorXd cb(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index col = basis_[static_cast<size_t>(i)];
    t_.col(col).head(rows).setZero();
    t_(i, col) = 1.0;
    cb(i) = cost_(col);
  }
  t_.row(rows).head(n) = cost_.transpose() - cb.transpose() * t_.topLeftCorner(rows, n);
  for (Eigen::Index i = 0; i < rows; ++i) t_(rows, basis_[static_cast<size_t>(i)]) = 0.0;
  t_(rows, n) = -cb.dot(xb);
  return true;
}

void Tableau::pivot(Eigen::Index row, Eigen::Index col) {
  const double piv = t_(row, col);
  t_.row(row) /= piv;
  Eigen::VectorXd factors = t_.col(col);
  factors(row) = 0.0;
  t_.noalias() -= factors * t_.row(row);
  t_.col(col).setZero();
  t_(row, col) = 1.0;
  basis_[static_cast<size_t>(row)] = col;
}

bool Tableau::iterate(Eigen::Index allowed_cols, long& iterations) {
  const Eigen::Index m = obj_row();
  const double opt_tol = opt_.tol.optimality;
  const double piv_tol = opt_.tol.pivot;
  const long cap = opt_.max_iterations > 0
                       ? opt_.max_iterations
                       : 200L * static_cast<long>(t_.rows() + t_.cols()) + 5000L;
  int degenerate_run = 0;
  bool sticky_bland = false;
  constexpr int kBlandAfter = 12;
  const long refresh = std::max<long>(50, static_cast<long>(m));
  long since_refresh = 1;
  int final_checks = 0;

  while (true) {
    if (iterations >= cap) {
      throw NumericalFailure("solve_lp: iteration cap reached (" + std::to_string(cap) + ")");
    }
    // Once a long degenerate run shows up, stay on Bland's rule: tiny
    // round-off steps would otherwise reset the run and allow cycling.
    sticky_bland = sticky_bland || degenerate_run >= kBlandAfter;
    const bool bland = opt_.rule == PivotRule::Bland || sticky_bland;

    Eigen::Index enter = -1;
    double best = -opt_tol;
    for (Eigen::Index j = 0; j < allowed_cols; ++j) {
      const double rc = t_(m, j);
      if (rc < best) {
        enter = j;
        if (bland) break;
        best = rc;
      }
    }
    if (enter < 0) {
      // Confirm optimality against a fresh factorization.
      if (!phase2_ || since_refresh == 0 || final_checks >= 3 || !reinvert()) return true;
      since_refresh = 0;
      ++final_checks;
      continue;
    }

    Eigen::Index leave = -1;
    double best_ratio = kInf;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double coef = t_(i, enter);
      if (coef <= piv_tol) continue;
      const double ratio = std::max(t_(i, rhs_col()), 0.0) / coef;
      if (leave < 0 || ratio < best_ratio - 1e-12 * (1.0 + std::abs(best_ratio))) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + std::abs(best_ratio))) {
        const bool better = bland ? basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)]
                                  : coef > t_(leave, enter);
        if (better) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leave < 0) return false;

    degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
    pivot(leave, enter);
    ++iterations;
    if (phase2_ && ++since_refresh >= refresh && reinvert()) since_refresh = 0;
  }
}

LpSolution Tableau::solve(const Eigen::VectorXd& cost, bool perturb) {
  const Eigen::Index m = a_.rows();
  const Eigen::Index n = a_.cols();  // structural + slack columns
  LpSolution out;

  // Rows with a usable +1 slack start basic on it; the rest get artificials.
  std::vector<Eigen::Index> slack_of_row(static_cast<size_t>(m), -1);
  for (Eigen::Index j = num_structural_; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (a_(i, j) == 1.0) slack_of_row[static_cast<size_t>(i)] = j;
    }
  }
  std::vector<Eigen::Index> artificial_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (slack_of_row[static_cast<size_t>(i)] < 0) artificial_rows.push_back(i);
  }
  const auto num_art = static_cast<Eigen::Index>(artificial_rows.size());

  t_.setZero(m + 1, n + num_art + 1);
  t_.topLeftCorner(m, n) = a_;
  t_.block(0, n + num_art, m, 1) = b_;
  perturb_ = perturb;
  phase2_ = false;
  cost_ = cost;
  for (Eigen::Index i = 0; i < m; ++i) t_(i, n + num_art) += perturbation(i);
  basis_.assign(static_cast<size_t>(m), -1);
  for (Eigen::Index i = 0; i < m; ++i) {
    basis_[static_cast<size_t>(i)] = slack_of_row[static_cast<size_t>(i)];
  }
  for (Eigen::Index k = 0; k < num_art; ++k) {
    const Eigen::Index i = artificial_rows[static_cast<size_t>(k)];
    t_(i, n + k) = 1.0;
    basis_[static_cast<size_t>(i)] = n + k;
  }

  long iterations = 0;
  if (num_art > 0) {
    // Phase 1: minimize the sum of artificials.
    for (Eigen::Index k = 0; k < num_art; ++k) {
      t_.row(m) -= t_.row(artificial_rows[static_cast<size_t>(k)]);
      t_(m, n + k) = 0.0;
    }
    iterate(n + num_art, iterations);
    const double infeas = -t_(m, rhs_col());
    const double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
    if (infeas > opt_.tol.feasibility * scale) {
      out.status = Status::Infeasible;
      out.iterations = iterations;
      return out;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    std::vector<Eigen::Index> keep_rows;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis_[static_cast<size_t>(i)] < n) {
        keep_rows.push_back(i);
        continue;
      }
      Eigen::Index col = -1;
      double best = 1e-9;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        keep_rows.push_back(i);
      }
    }
    Eigen::MatrixXd reduced(static_cast<Eigen::Index>(keep_rows.size()) + 1, n + 1);
    std::vector<Eigen::Index> new_basis;
    Eigen::MatrixXd a_kept(static_cast<Eigen::Index>(keep_rows.size()), n);
    Eigen::VectorXd b_kept(static_cast<Eigen::Index>(keep_rows.size()));
    for (size_t r = 0; r < keep_rows.size(); ++r) {
      const auto i = keep_rows[r];
      const auto rr = static_cast<Eigen::Index>(r);
      reduced.row(rr).head(n) = t_.row(i).head(n);
      reduced(rr, n) = t_(i, rhs_col());
      new_basis.push_back(basis_[static_cast<size_t>(i)]);
      a_kept.row(rr) = a_.row(i);
      b_kept(rr) = b_(i);
    }
    reduced.row(reduced.rows() - 1).setZero();
    t_ = std::move(reduced);
    basis_ = std::move(new_basis);
    a_ = std::move(a_kept);
    b_ = std::move(b_kept);
  } else {
    Eigen::MatrixXd trimmed(m + 1, n + 1);
    trimmed.leftCols(n) = t_.leftCols(n);
    trimmed.col(n) = t_.col(rhs_col());
    t_ = std::move(trimmed);
  }

  // Phase 2 reduced costs.
  const Eigen::Index rows = obj_row();
  t_.row(rows).setZero();
  t_.row(rows).head(n) = cost.transpose();
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double cb = cost(basis_[static_cast<size_t>(i)]);
    if (cb != 0.0) t_.row(rows) -= cb * t_.row(i);
  }
  phase2_ = true;
  if (!iterate(n, iterations)) {
    out.status = Status::Unbounded;
    out.iterations = iterations;
    return out;
  }

  return recover(iterations);
}

LpSolution Tableau::recover(long iterations) {
  const Eigen::Index rows = obj_row();
  const Eigen::Index n = a_.cols();
  LpSolution out;
  out.iterations = iterations;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  if (rows > 0) {
    Eigen::MatrixXd basis_matrix(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) basis_matrix.col(i) = a_.col(basis_[static_cast<size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    Eigen::VectorXd xb = lu.solve(b_);
    const bool ok = xb.allFinite() && (basis_matrix * xb - b_).cwiseAbs().maxCoeff() <=
                                          1e-9 * std::max(1.0, b_.cwiseAbs().maxCoeff());
    if (perturb_) {
      const double tol = opt_.tol.feasibility * std::max(1.0, b_.cwiseAbs().maxCoeff());
      if (!ok || xb.minCoeff() < -tol) {
        out.status = Status::Infeasible;
        return out;
      }
      xb = xb.cwiseMax(0.0);
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      y(basis_[static_cast<size_t>(i)]) = ok ? xb(i) : t_(i, rhs_col());
    }
  }
  out.status = Status::Optimal;
  out.point = y;
  return out;
}

LpSolution Tableau::append_rows(const Eigen::MatrixXd& ay, const Eigen::VectorXd& by) {
  const Eigen::Index m = obj_row();
  const Eigen::Index n = a_.cols();
  const Eigen::Index k = ay.rows();
  const Eigen::Index ny = ay.cols();

  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(m + k, n + k);
  a2.topLeftCorner(m, n) = a_;
  a2.block(m, 0, k, ny) = ay;
  a2.block(m, n, k, k).setIdentity();
  Eigen::VectorXd b2(m + k);
  b2 << b_, by;
  a_ = std::move(a2);
  b_ = std::move(b2);
  cost_.conservativeResize(n + k);
  cost_.tail(k).setZero();

  Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(m + k + 1, n + k + 1);
  t2.topLeftCorner(m, n) = t_.topLeftCorner(m, n);
  t2.block(0, n + k, m, 1) = t_.block(0, n, m, 1);
  t2.block(m + k, 0, 1, n) = t_.block(m, 0, 1, n);
  t2(m + k, n + k) = t_(m, n);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index row = m + r;
    t2.block(row, 0, 1, ny) = ay.row(r);
    t2(row, n + r) = 1.0;
    t2(row, n + k) = by(r) + perturbation(row);
    // Express the new row in the current basis.
    for (Eigen::Index i = 0; i < m; ++i) {
      const double f = t2(row, basis_[static_cast<size_t>(i)]);
      if (f != 0.0) t2.row(row) -= f * t2.row(i);
    }
    basis_.push_back(n + r);
  }
  t_ = std::move(t2);

  const Eigen::Index obj = obj_row();
  const Eigen::Index cols = a_.cols();
  const long cap = opt_.max_iterations > 0
                       ? opt_.max_iterations
                       : 200L * static_cast<long>(t_.rows() + t_.cols()) + 5000L;
  long iterations = 0;
  while (true) {
    Eigen::Index leave = -1;
    double most = -1e-12;
    for (Eigen::Index i = 0; i < obj; ++i) {
      const double v = t_(i, rhs_col()) / (1.0 + std::abs(b_(i)));
      if (v < most) {
        most = v;
        leave = i;
      }
    }
    if (leave < 0) break;
    if (iterations >= cap) {
      throw NumericalFailure("solve_lp: dual simplex iteration cap reached");
    }
    Eigen::Index enter = -1;
    double best = kInf;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double coef = t_(leave, j);
      if (coef >= -opt_.tol.pivot) continue;
      const double ratio = std::max(t_(obj, j), 0.0) / -coef;
      if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && enter >= 0 && -coef > -t_(leave, enter))) {
        best = std::min(best, ratio);
        enter = j;
      }
    }
    if (enter < 0) {
      LpSolution out;
      out.status = Status::Infeasible;
      out.iterations = iterations;
      return out;
    }
    pivot(leave, enter);
    ++iterations;
  }
  if (!iterate(cols, iterations)) {
    LpSolution out;
    out.status = Status::Unbounded;
    out.iterations = iterations;
    return out;
  }
  return recover(iterations);
}

// LpProblem rewritten over nonnegative columns y with one slack per
// inequality: a [y; s] = b.
struct StandardForm {
  std::vector<VarMap> map;
  Eigen::Index ny = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;
  bool bounds_conflict = false;

  // Row over y for an inequality row over x; shifts rhs by the offsets.
  Eigen::RowVectorXd to_y(const Eigen::RowVectorXd& row, double& rhs) const {
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(ny);
    for (size_t j = 0; j < map.size(); ++j) {
      const VarMap& v = map[j];
      const double c = row(static_cast<Eigen::Index>(j));
      rhs -= c * v.offset;
      out(v.col) += v.sign * c;
      if (v.col_neg >= 0) out(v.col_neg) -= c;
    }
    return out;
  }

  Eigen::VectorXd to_x(const Eigen::VectorXd& y) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(map.size()));
    for (size_t j = 0; j < map.size(); ++j) {
      const VarMap& v = map[j];
      double val = v.offset + v.sign * y(v.col);
      if (v.col_neg >= 0) val -= y(v.col_neg);
      x(static_cast<Eigen::Index>(j)) = val;
    }
    return x;
  }
};

StandardForm standardize(const LpProblem& problem) {
  StandardForm sf;
  const Eigen::Index n = problem.num_vars();
  const Eigen::VectorXd lower =
      problem.lower.size() ? problem.lower : Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd upper =
      problem.upper.size() ? problem.upper : Eigen::VectorXd::Constant(n, kInf);

  // Map original variables onto nonnegative columns.
  sf.map.resize(static_cast<size_t>(n));
  Eigen::Index ny = 0;
  std::vector<std::pair<Eigen::Index, double>> bound_rows;  // (y col, ub)
  for (Eigen::Index j = 0; j < n; ++j) {
    VarMap& v = sf.map[static_cast<size_t>(j)];
    const double lo = lower(j);
    const double hi = upper(j);
    if (lo > hi) sf.bounds_conflict = true;
    if (std::isfinite(lo)) {
      v.offset = lo;
      v.col = ny++;
      if (std::isfinite(hi)) bound_rows.emplace_back(v.col, hi - lo);
    } else if (std::isfinite(hi)) {
      v.offset = hi;
      v.col = ny++;
      v.sign = -1.0;
    } else {
      v.col = ny++;
      v.col_neg = ny++;
    }
  }
  sf.ny = ny;

  auto to_y = [&](const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::MatrixXd& ay,
                  Eigen::VectorXd& by) {
    ay.setZero(a.rows(), ny);
    by = b;
    for (Eigen::Index j = 0; j < n; ++j) {
      const VarMap& v = sf.map[static_cast<size_t>(j)];
      if (a.rows() == 0) continue;
      by -= a.col(j) * v.offset;
      ay.col(v.col) += v.sign * a.col(j);
      if (v.col_neg >= 0) ay.col(v.col_neg) -= a.col(j);
    }
  };

  Eigen::MatrixXd ub_y;
  Eigen::VectorXd ub_b;
  to_y(problem.ineq, problem.ineq_rhs, ub_y, ub_b);
  Eigen::MatrixXd eq_y;
  Eigen::VectorXd eq_b;
  to_y(problem.eq, problem.eq_rhs, eq_y, eq_b);

  const Eigen::Index m_ub = ub_y.rows() + static_cast<Eigen::Index>(bound_rows.size());
  const Eigen::Index m_eq = eq_y.rows();
  const Eigen::Index m = m_ub + m_eq;
  const Eigen::Index ncols = ny + m_ub;

  Eigen::MatrixXd& a = sf.a;
  Eigen::VectorXd& b = sf.b;
  a = Eigen::MatrixXd::Zero(m, ncols);
  b.resize(m);
  if (ub_y.rows() > 0) {
    a.topLeftCorner(ub_y.rows(), ny) = ub_y;
    b.head(ub_y.rows()) = ub_b;
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    const Eigen::Index r = ub_y.rows() + static_cast<Eigen::Index>(k);
    a(r, bound_rows[k].first) = 1.0;
    b(r) = bound_rows[k].second;
  }
  for (Eigen::Index r = 0; r < m_ub; ++r) a(r, ny + r) = 1.0;
  if (m_eq > 0) {
    a.block(m_ub, 0, m_eq, ny) = eq_y;
    b.tail(m_eq) = eq_b;
  }
  // Equilibrate rows and make the right-hand side nonnegative.
  for (Eigen::Index r = 0; r < m; ++r) {
    const double scale = a.row(r).head(ny).cwiseAbs().maxCoeff();
    if (scale > 0.0 && (scale > 4.0 || scale < 0.25)) {
      a.row(r).head(ny) /= scale;
      b(r) /= scale;
    }
    if (b(r) < 0.0) {
      a.row(r) *= -1.0;
      b(r) = -b(r);
    }
  }

  sf.cost = Eigen::VectorXd::Zero(ncols);
  for (Eigen::Index j = 0; j < n; ++j) {
    const VarMap& v = sf.map[static_cast<size_t>(j)];
    const double cj = problem.objective(j);
    sf.cost(v.col) += v.sign * cj;
    if (v.col_neg >= 0) sf.cost(v.col_neg) -= cj;
  }
  return sf;
}

// Perturbed first; the unperturbed run settles infeasibility, unboundedness
// and bases that do not survive removing the perturbation.
// Rejects an "optimal" basic point that does not satisfy the full
// standard form; round-off can prune a row that is not redundant.
bool consistent(const StandardForm& sf, const LpSolution& sol, const SolveOptions& options) {
  const Eigen::VectorXd& y = sol.point;
  if (y.size() != sf.a.cols() || !y.allFinite()) return false;
  if (y.size() == 0) return true;
  const double scale = std::max(1.0, sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0) *
                       std::max(1.0, y.cwiseAbs().maxCoeff());
  if (y.minCoeff() < -options.tol.feasibility * scale) return false;
  return sf.a.rows() == 0 || (sf.a * y - sf.b).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

LpSolution solve_standard(const StandardForm& sf, const SolveOptions& options,
                          std::unique_ptr<Tableau>& tableau) {
  SolveOptions bland = options;
  bland.rule = PivotRule::Bland;
  const std::pair<const SolveOptions*, bool> attempts[] = {
      {&options, true}, {&options, false}, {&bland, true}, {&bland, false}};
  long iterations = 0;
  int index = 0;
  bool suspect = false;
  std::optional<LpSolution> fallback;
  for (const auto& [opts, perturb] : attempts) {
    tableau = std::make_unique<Tableau>(sf.a, sf.b, sf.ny, *opts);
    LpSolution sol = tableau->solve(sf.cost, perturb);
    iterations += sol.iterations;
    sol.iterations = iterations;
    ++index;
    if (sol.status == Status::Optimal) {
      if (consistent(sf, sol, options)) return sol;
      suspect = true;
    } else if (index >= 2 && !suspect) {
      return sol;
    } else {
      fallback = sol;
    }
  }
  if (fallback) return *fallback;
  throw NumericalFailure("solve_lp: no attempt produced a consistent basis");
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SolveOptions& options) {
  problem.validate();
  const StandardForm sf = standardize(problem);
  if (sf.bounds_conflict) return LpSolution{};
  std::unique_ptr<Tableau> tableau;
  LpSolution sol = solve_standard(sf, options, tableau);
  if (sol.status != Status::Optimal) return sol;
  sol.point = sf.to_x(sol.point);
  sol.value = problem.objective.dot(sol.point);
  return sol;
}

struct IncrementalLp::Impl {
  LpProblem problem;
  SolveOptions options;
  StandardForm sf;
  std::unique_ptr<Tableau> tableau;
  LpSolution solution;

  void finish() {
    if (solution.status != Status::Optimal) return;
    solution.point = sf.to_x(solution.point);
    solution.value = problem.objective.dot(solution.point);
  }
};

IncrementalLp::IncrementalLp(const LpProblem& problem, const SolveOptions& options)
    : impl_(std::make_unique<Impl>()) {
  problem.validate();
  impl_->problem = problem;
  impl_->options = options;
  impl_->sf = standardize(problem);
  if (impl_->sf.bounds_conflict) return;
  impl_->solution = solve_standard(impl_->sf, options, impl_->tableau);
  impl_->finish();
}

IncrementalLp::~IncrementalLp() = default;
IncrementalLp::IncrementalLp(IncrementalLp&&) noexcept = default;
IncrementalLp& IncrementalLp::operator=(IncrementalLp&&) noexcept = default;

const LpSolution& IncrementalLp::solution() const { return impl_->solution; }
const LpProblem& IncrementalLp::problem() const { return impl_->problem; }

const LpSolution& IncrementalLp::add_ineq(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs) {
  Impl& s = *impl_;
  if (rows.cols() != s.problem.num_vars() || rows.rows() != rhs.size() || !rows.allFinite() ||
      !rhs.allFinite()) {
    throw InvalidArgument("IncrementalLp::add_ineq: malformed rows");
  }
  if (rows.rows() == 0) return s.solution;
  const Eigen::Index r0 = s.problem.ineq.rows();
  s.problem.ineq.conservativeResize(r0 + rows.rows(), s.problem.num_vars());
  s.problem.ineq.bottomRows(rows.rows()) = rows;
  s.problem.ineq_rhs.conservativeResize(r0 + rows.rows());
  s.problem.ineq_rhs.tail(rows.rows()) = rhs;
  if (s.solution.status != Status::Optimal) {
    // Adding rows cannot repair infeasibility; an unbounded problem may now
    // be bounded, so start over.
    if (s.solution.status == Status::Unbounded) {
      s.sf = standardize(s.problem);
      s.solution = solve_standard(s.sf, s.options, s.tableau);
      s.finish();
    }
    return s.solution;
  }

  Eigen::MatrixXd ay(rows.rows(), s.sf.ny);
  Eigen::VectorXd by(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    double b = rhs(r);
    ay.row(r) = s.sf.to_y(rows.row(r), b);
    const double scale = ay.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0 && (scale > 4.0 || scale < 0.25)) {
      ay.row(r) /= scale;
      b /= scale;
    }
    by(r) = b;
  }
  const long before = s.solution.iterations;
  LpSolution sol = s.tableau->append_rows(ay, by);
  if (sol.status == Status::Optimal) {
    sol.iterations += before;
    const LpSolution kept = s.solution;
    s.solution = std::move(sol);
    s.finish();
    const double scale = std::max(1.0, s.solution.point.cwiseAbs().maxCoeff());
    if (max_violation(s.problem, s.solution.point) <= 1e-7 * scale) return s.solution;
    sol = kept;
    sol.iterations = 0;
  }
  // Fall back to a cold solve of the accumulated problem.
  s.sf = standardize(s.problem);
  s.solution = solve_standard(s.sf, s.options, s.tableau);
  s.solution.iterations += before + sol.iterations;
  s.finish();
  return s.solution;
}

}  // namespace swapreg::lp
