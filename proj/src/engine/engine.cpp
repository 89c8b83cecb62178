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

#include "swapreg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swapreg/errors.hpp"

namespace swapreg {

Csp Csp::zero(Eigen::Index d) {
  return Csp{Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};
}

Csp Csp::profile(const Eigen::VectorXd& l, const Eigen::VectorXd& p) {
  return Csp{l * p.transpose(), l};
}

double Csp::norm() const {
  return std::sqrt(mat.squaredNorm() + vec.squaredNorm());
}

double Csp::dot(const Eigen::MatrixXd& u) const {
  const Eigen::Index d = vec.size();
  return (u.leftCols(d).array() * mat.array()).sum() + u.col(d).dot(vec);
}

Eigen::MatrixXd Csp::stacked() const {
  Eigen::MatrixXd out(vec.size(), vec.size() + 1);
  out << mat, vec;
  return out;
}

Csp& Csp::operator+=(const Csp& other) {
  mat += other.mat;
  vec += other.vec;
  return *this;
}

Csp& Csp::operator-=(const Csp& other) {
  mat -= other.mat;
  vec -= other.vec;
  return *this;
}

Csp& Csp::operator*=(double s) {
  mat *= s;
  vec *= s;
  return *this;
}

Csp operator-(Csp a, const Csp& b) {
  a -= b;
  return a;
}

ApproachState::ApproachState(Eigen::Index d)
    : u(Eigen::MatrixXd::Zero(d, d + 1)), kappa_bar(Csp::zero(d)), s_bar(Csp::zero(d)) {}

std::optional<double> EpsSchedule::target(long t) const {
  switch (kind) {
    case Kind::None:
      return std::nullopt;
    case Kind::Constant:
      return value;
    case Kind::InvSqrt:
      return value / std::sqrt(static_cast<double>(std::max(1L, t)));
  }
  return std::nullopt;
}

namespace {

std::uint64_t round_seed(std::uint64_t seed, long t) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(t + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SaddlePoint solve_round(const BilinearGame& game, const StepOptions& options, long t,
                        int* iters_used) {
  *iters_used = 0;
  if (options.solver == GameSolver::Exact) return solve_exact(game);
  int iters = options.fpl_iters;
  SaddlePoint s = solve_fpl(game, iters, round_seed(options.seed, t));
  const auto target = options.eps.target(t);
  for (int k = 0; target && s.gap > *target && k < options.eps.max_doublings; ++k) {
    iters *= 2;
    s = solve_fpl(game, iters, round_seed(options.seed, t) + static_cast<std::uint64_t>(k) + 1);
  }
  *iters_used = iters;
  return s;
}

}  // namespace

RoundLog step(ApproachState& state, const ConvexSet& pset, const ConvexSet& lset,
              const StepOptions& options, const LossOracle& adversary) {
  const Eigen::Index d = state.dim();
  if (pset.dim() != d || lset.dim() != d) {
    throw InvalidArgument("step: set dimensions do not match the state");
  }
  const long t = state.t + 1;

  Eigen::MatrixXd u_game = state.u;
  if (options.mode == Mode::Approximate && t > 1) u_game /= static_cast<double>(t - 1);
  BilinearGame game{u_game.leftCols(d), u_game.col(d), pset, lset};

  RoundLog log;
  log.t = t;
  const SaddlePoint sp = solve_round(game, options, t, &log.fpl_iters);
  log.game_value = sp.value;
  log.game_gap = sp.gap;
  log.l_star = sp.l_star;
  log.best_response = lmo(pset, sp.l_star);
  log.s_target = Csp::profile(sp.l_star, log.best_response);

  log.p_working = sp.p_star;
  log.loss_working = adversary(t, sp.p_star);
  if (log.loss_working.size() != d || !log.loss_working.allFinite()) {
    throw AdversaryFault("step: malformed loss at round " + std::to_string(t));
  }
  if (!membership(lset, log.loss_working, 1e-7)) {
    throw AdversaryFault("step: loss outside the loss set at round " + std::to_string(t));
  }
  log.p_played = log.p_working;
  log.loss = log.loss_working;
  log.kappa = Csp::profile(log.loss_working, log.p_working);
  log.inst_loss = log.loss_working.dot(log.p_working);

  const Csp diff = log.kappa - log.s_target;
  log.invariant_value = diff.dot(state.u);

  state.u += diff.stacked();
  state.t = t;
  const double w = 1.0 / static_cast<double>(t);
  Csp k = log.kappa;
  k -= state.kappa_bar;
  k *= w;
  state.kappa_bar += k;
  Csp s = log.s_target;
  s -= state.s_bar;
  s *= w;
  state.s_bar += s;
  state.norm_bound = std::max({state.norm_bound, log.kappa.norm(), log.s_target.norm()});
  log.cert_norm = state.certificate();
  return log;
}

double csp_bound(const ConvexSet& pset, const ConvexSet& lset) {
  const double rp = max_norm(pset);
  return max_norm(lset) * std::sqrt(rp * rp + 1.0);
}

double Trajectory::mean_gap() const {
  if (rounds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rounds) sum += r.game_gap;
  return sum / static_cast<double>(rounds.size());
}

Trajectory run(const RunConfig& config, const LossOracle& adversary) {
  if (config.horizon < 1) throw InvalidArgument("run: horizon must be positive");
  if (config.pset.dim() != config.lset.dim()) {
    throw InvalidArgument("run: strategy and loss sets differ in dimension");
  }
  Trajectory traj{{}, ApproachState(config.pset.dim()), std::nullopt, 0.0};
  traj.set_bound = csp_bound(config.pset, config.lset);
  traj.rounds.reserve(static_cast<size_t>(config.horizon));
  for (long t = 0; t < config.horizon; ++t) {
    traj.rounds.push_back(step(traj.state, config.pset, config.lset, config.options, adversary));
  }
  return traj;
}

Trajectory run_preconditioned(const RunConfig& config, const LossOracle& adversary) {
  if (config.horizon < 1) throw InvalidArgument("run: horizon must be positive");
  if (config.pset.dim() != config.lset.dim()) {
    throw InvalidArgument("run: strategy and loss sets differ in dimension");
  }
  Preconditioner pre = john_precondition(config.pset).first;
  const ConvexSet pwork = pre.target;
  const ConvexSet lwork = ConvexSet::linear_image(pre.inverse_transpose, config.lset);

  Trajectory traj{{}, ApproachState(config.pset.dim()), pre, 0.0};
  traj.set_bound = csp_bound(pwork, lwork);
  traj.rounds.reserve(static_cast<size_t>(config.horizon));
  Eigen::VectorXd p_orig;
  Eigen::VectorXd l_orig;
  const LossOracle working = [&](long t, const Eigen::VectorXd& p) -> Eigen::VectorXd {
    p_orig = pre.to_original(p);
    l_orig = adversary(t, p_orig);
    if (l_orig.size() != config.lset.dim() || !l_orig.allFinite()) {
      throw AdversaryFault("run: malformed loss at round " + std::to_string(t));
    }
    if (!membership(config.lset, l_orig, 1e-7)) {
      throw AdversaryFault("run: loss outside the loss set at round " + std::to_string(t));
    }
    return pre.loss_to_working(l_orig);
  };
  for (long t = 0; t < config.horizon; ++t) {
    RoundLog log = step(traj.state, pwork, lwork, config.options, working);
    log.p_played = p_orig;
    log.loss = l_orig;
    traj.rounds.push_back(std::move(log));
  }
  return traj;
}

PythagoreanResult pythagorean_check(const std::vector<Eigen::VectorXd>& vectors, double bound,
                                    const std::vector<double>& eps, double tol) {
  const size_t n = vectors.size();
  if (!eps.empty() && eps.size() != n) {
    throw InvalidArgument("pythagorean_check: eps must be empty or match the sequence length");
  }
  PythagoreanResult out;
  if (n == 0) {
    out.holds = true;
    return out;
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vectors[0].size());
  double slack = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const int round = static_cast<int>(i) + 1;
    const Eigen::VectorXd& v = vectors[i];
    if (v.size() != sum.size()) throw InvalidArgument("pythagorean_check: ragged sequence");
    if (v.norm() > bound + tol) {
      throw PremiseViolated(round, "pythagorean_check: norm exceeds the bound at round " +
                                       std::to_string(round));
    }
    const double e = eps.empty() ? 0.0 : eps[i];
    if (e < 0.0) throw InvalidArgument("pythagorean_check: negative eps");
    if (i > 0) {
      const double k = static_cast<double>(i);
      if (sum.dot(v) / k > e + tol) {
        throw PremiseViolated(round, "pythagorean_check: inner-product premise fails at round " +
                                         std::to_string(round));
      }
      slack += 2.0 * k * e;
    }
    sum += v;
  }
  out.lhs = sum.norm();
  out.rhs = std::sqrt(static_cast<double>(n) * bound * bound + slack);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-15) + tol;
  return out;
}

}  // namespace swapreg
