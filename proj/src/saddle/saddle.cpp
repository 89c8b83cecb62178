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

#include "swapreg/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swapreg/errors.hpp"
#include "swapreg/lp.hpp"

namespace swapreg {

void BilinearGame::validate() const {
  const Eigen::Index dp = pset.dim();
  const Eigen::Index dl = lset.dim();
  if (u_mat.rows() != dl || u_mat.cols() != dp || u_vec.size() != dl) {
    throw InvalidArgument("bilinear game: payoff shape does not match the sets");
  }
  if (!u_mat.allFinite() || !u_vec.allFinite()) {
    throw InvalidArgument("bilinear game: non-finite payoff");
  }
}

double duality_gap_unchecked(const BilinearGame& game, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& l) {
  const double best_l = support(game.lset, game.u_mat * p + game.u_vec);
  const double best_p = l.dot(game.u_vec) - support(game.pset, -game.u_mat.transpose() * l);
  return best_l - best_p;
}

double duality_gap(const BilinearGame& game, const Eigen::VectorXd& p, const Eigen::VectorXd& l) {
  game.validate();
  if (!membership(game.pset, p, 1e-7)) {
    throw MembershipViolation("duality_gap: p is not in the strategy set");
  }
  if (!membership(game.lset, l, 1e-7)) {
    throw MembershipViolation("duality_gap: l is not in the loss set");
  }
  return duality_gap_unchecked(game, p, l);
}

namespace {

bool zero_game(const BilinearGame& game) {
  return game.u_mat.isZero(0.0) && game.u_vec.isZero(0.0);
}

SaddlePoint trivial_saddle(const BilinearGame& game) {
  SaddlePoint s;
  s.p_star = lmo(game.pset, Eigen::VectorXd::Zero(game.pset.dim()));
  s.l_star = argmax(game.lset, Eigen::VectorXd::Zero(game.lset.dim()));
  return s;
}

// Player LP:  min over (x, z_x, lambda >= 0, nu) of  b_o^T lambda + e_o^T nu
// (+ lin^T x) subject to x in its own formulation and
//   A_o^T lambda + C_o^T nu - coupling x = rhs,  A_zo^T lambda + C_zo^T nu = 0.
lp::LpSolution player_lp(const Formulation& own, const Formulation& opp,
                         const Eigen::MatrixXd& coupling, const Eigen::VectorXd& rhs,
                         const Eigen::VectorXd& lin) {
  const Eigen::Index d = own.dim;
  const Eigen::Index nz = own.num_aux;
  const Eigen::Index ml = opp.ineq_x.rows();
  const Eigen::Index me = opp.eq_x.rows();
  const Eigen::Index n = d + nz + ml + me;
  const Eigen::Index dl = opp.dim;
  const Eigen::Index nzo = opp.num_aux;

  lp::LpProblem prob(n);
  prob.free_variables();
  prob.lower.segment(d + nz, ml).setZero();
  prob.objective.head(d) = lin;
  prob.objective.segment(d + nz, ml) = opp.ineq_rhs;
  prob.objective.tail(me) = opp.eq_rhs;

  prob.ineq = Eigen::MatrixXd::Zero(own.ineq_x.rows(), n);
  prob.ineq.leftCols(d) = own.ineq_x;
  if (nz > 0) prob.ineq.middleCols(d, nz) = own.ineq_z;
  prob.ineq_rhs = own.ineq_rhs;

  const Eigen::Index neq = own.eq_x.rows() + dl + nzo;
  prob.eq = Eigen::MatrixXd::Zero(neq, n);
  prob.eq_rhs = Eigen::VectorXd::Zero(neq);
  Eigen::Index r = 0;
  if (own.eq_x.rows() > 0) {
    prob.eq.block(r, 0, own.eq_x.rows(), d) = own.eq_x;
    if (nz > 0) prob.eq.block(r, d, own.eq_x.rows(), nz) = own.eq_z;
    prob.eq_rhs.segment(r, own.eq_x.rows()) = own.eq_rhs;
    r += own.eq_x.rows();
  }
  prob.eq.block(r, 0, dl, d) = -coupling;
  if (ml > 0) prob.eq.block(r, d + nz, dl, ml) = opp.ineq_x.transpose();
  if (me > 0) prob.eq.block(r, d + nz + ml, dl, me) = opp.eq_x.transpose();
  prob.eq_rhs.segment(r, dl) = rhs;
  r += dl;
  if (nzo > 0) {
    if (ml > 0) prob.eq.block(r, d + nz, nzo, ml) = opp.ineq_z.transpose();
    if (me > 0) prob.eq.block(r, d + nz + ml, nzo, me) = opp.eq_z.transpose();
  }
  auto sol = lp::solve_lp(prob);
  if (!sol.optimal()) {
    throw SolverFailure(std::string("saddle: player LP returned ") + lp::to_string(sol.status));
  }
  return sol;
}

}  // namespace

SaddlePoint solve_exact(const BilinearGame& game) {
  game.validate();
  if (zero_game(game)) return trivial_saddle(game);
  const Formulation fp = formulation(game.pset);
  const Formulation fl = formulation(game.lset);
  const Eigen::Index dp = fp.dim;
  const Eigen::Index dl = fl.dim;

  // Saddle points are invariant under positive scaling; unit-size payoffs
  // keep the LP bases well conditioned as U grows with t.
  const double scale = std::max(game.u_mat.cwiseAbs().maxCoeff(), game.u_vec.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd u_mat = game.u_mat / scale;
  const Eigen::VectorXd u_vec = game.u_vec / scale;
  // min_p max_l: dualize the inner max over L.
  const auto pmin = player_lp(fp, fl, u_mat, u_vec, Eigen::VectorXd::Zero(dp));
  // max_l min_p: dualize the inner min over P, written as a minimization.
  const auto lmax = player_lp(fl, fp, -u_mat.transpose(), Eigen::VectorXd::Zero(dp), -u_vec);

  SaddlePoint s;
  s.p_star = pmin.point.head(dp);
  s.l_star = lmax.point.head(dl);
  s.value = scale * pmin.value;
  s.gap = duality_gap_unchecked(game, s.p_star, s.l_star);
  return s;
}

MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& pay) {
  const Eigen::Index n = pay.rows();
  const Eigen::Index m = pay.cols();
  if (n == 0 || m == 0 || !pay.allFinite()) {
    throw InvalidArgument("solve_matrix_game: empty or non-finite payoff");
  }
  // Row player: min v s.t. pay^T x <= v, x in simplex.
  lp::LpProblem rowp(n + 1);
  rowp.lower = Eigen::VectorXd::Zero(n + 1);
  rowp.lower(n) = -lp::kInf;
  rowp.upper = Eigen::VectorXd::Constant(n + 1, lp::kInf);
  rowp.objective(n) = 1.0;
  rowp.ineq.resize(m, n + 1);
  rowp.ineq.leftCols(n) = pay.transpose();
  rowp.ineq.col(n).setConstant(-1.0);
  rowp.ineq_rhs = Eigen::VectorXd::Zero(m);
  Eigen::RowVectorXd ones = Eigen::RowVectorXd::Zero(n + 1);
  ones.head(n).setOnes();
  rowp.add_eq(ones, 1.0);
  const auto xs = lp::solve_lp(rowp);

  // Column player: max w s.t. pay y >= w, y in simplex.
  lp::LpProblem colp(m + 1);
  colp.lower = Eigen::VectorXd::Zero(m + 1);
  colp.lower(m) = -lp::kInf;
  colp.upper = Eigen::VectorXd::Constant(m + 1, lp::kInf);
  colp.objective(m) = -1.0;
  colp.ineq.resize(n, m + 1);
  colp.ineq.leftCols(m) = -pay;
  colp.ineq.col(m).setConstant(1.0);
  colp.ineq_rhs = Eigen::VectorXd::Zero(n);
  Eigen::RowVectorXd ones_c = Eigen::RowVectorXd::Zero(m + 1);
  ones_c.head(m).setOnes();
  colp.add_eq(ones_c, 1.0);
  const auto ys = lp::solve_lp(colp);
  if (!xs.optimal() || !ys.optimal()) throw SolverFailure("saddle: matrix game LP failed");

  MatrixGameSolution out;
  out.row = xs.point.head(n).cwiseMax(0.0);
  out.row /= out.row.sum();
  out.col = ys.point.head(m).cwiseMax(0.0);
  out.col /= out.col.sum();
  out.value = xs.value;
  return out;
}

SaddlePoint solve_vertex_game(const BilinearGame& game, Eigen::Index cap) {
  game.validate();
  if (zero_game(game)) return trivial_saddle(game);
  const Eigen::MatrixXd vp = vertices(game.pset, cap);
  const Eigen::MatrixXd vl = vertices(game.lset, cap);
  // g(i, j) = l_j^T (U p_i + u)
  const Eigen::MatrixXd g =
      (vp * game.u_mat.transpose()).rowwise() + game.u_vec.transpose();
  const auto mg = solve_matrix_game(g * vl.transpose());

  SaddlePoint s;
  s.p_star = vp.transpose() * mg.row;
  s.l_star = vl.transpose() * mg.col;
  s.value = mg.value;
  s.gap = duality_gap_unchecked(game, s.p_star, s.l_star);
  return s;
}

SaddlePoint solve_fpl(const BilinearGame& game, int iters, std::uint64_t seed) {
  game.validate();
  if (iters < 1) throw InvalidArgument("solve_fpl: iters must be positive");
  if (zero_game(game)) return trivial_saddle(game);
  const Eigen::Index dp = game.pset.dim();
  const Eigen::Index dl = game.lset.dim();
  Rng rng(seed);

  // Gradient bounds for each player, used to size the perturbations.
  const double rp = max_norm(game.pset);
  const double rl = max_norm(game.lset);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(game.u_mat);
  const double op = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double grad_p = op * rl;
  const double grad_l = op * rp + game.u_vec.norm();
  const double root = std::sqrt(static_cast<double>(iters));
  const double scale_p = std::max(grad_p, 1e-12) * root / std::sqrt(static_cast<double>(dp));
  const double scale_l = std::max(grad_l, 1e-12) * root / std::sqrt(static_cast<double>(dl));

  Eigen::VectorXd cum_p = Eigen::VectorXd::Zero(dp);  // sum U^T l_k
  Eigen::VectorXd cum_l = Eigen::VectorXd::Zero(dl);  // sum U p_k + u
  Eigen::VectorXd sum_p = Eigen::VectorXd::Zero(dp);
  Eigen::VectorXd sum_l = Eigen::VectorXd::Zero(dl);
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXd p = lmo(game.pset, cum_p + uniform_box(rng, dp, -scale_p, scale_p));
    const Eigen::VectorXd l = argmax(game.lset, cum_l + uniform_box(rng, dl, -scale_l, scale_l));
    cum_p.noalias() += game.u_mat.transpose() * l;
    cum_l.noalias() += game.u_mat * p;
    cum_l += game.u_vec;
    sum_p += p;
    sum_l += l;
  }
  SaddlePoint s;
  s.p_star = sum_p / static_cast<double>(iters);
  s.l_star = sum_l / static_cast<double>(iters);
  s.value = game.payoff(s.p_star, s.l_star);
  s.gap = duality_gap_unchecked(game, s.p_star, s.l_star);
  return s;
}

}  // namespace swapreg
