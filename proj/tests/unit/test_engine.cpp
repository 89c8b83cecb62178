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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "swapreg/engine.hpp"
#include "swapreg/errors.hpp"
#include "test_support.hpp"

using swapreg::ConvexSet;
using swapreg::Norm;

namespace {

swapreg::LossOracle random_member(const ConvexSet& lset, std::uint64_t seed) {
  auto rng = std::make_shared<swapreg::Rng>(seed);
  return [lset, rng](long, const Eigen::VectorXd&) { return swapreg::sample(lset, *rng); };
}

swapreg::LossOracle random_vertex(const ConvexSet& lset, std::uint64_t seed) {
  auto rng = std::make_shared<swapreg::Rng>(seed);
  const Eigen::MatrixXd v = swapreg::vertices(lset);
  return [v, rng](long, const Eigen::VectorXd&) -> Eigen::VectorXd {
    std::uniform_int_distribution<Eigen::Index> pick(0, v.rows() - 1);
    return v.row(pick(*rng)).transpose();
  };
}

// U = t (kappa_bar - s_bar), recomputed from the logs.
void check_consistency(const swapreg::Trajectory& traj) {
  const Eigen::Index d = traj.state.dim();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d + 1);
  for (const auto& r : traj.rounds) u += (r.kappa - r.s_target).stacked();
  const double t = static_cast<double>(traj.state.t);
  CHECK((u - traj.state.u).norm() <= 1e-8);
  CHECK((t * (traj.state.kappa_bar - traj.state.s_bar).stacked() - traj.state.u).norm() <= 1e-8);
}

}  // namespace

TEST_CASE("engine: one-dimensional constant loss keeps U at zero") {
  swapreg::RunConfig cfg{ConvexSet::ball(Norm::Linf, 1), ConvexSet::ball(Norm::L1, 1), 20, {}};
  auto traj = swapreg::run(cfg, [](long, const Eigen::VectorXd&) {
    return Eigen::VectorXd::Ones(1).eval();
  });
  for (const auto& r : traj.rounds) {
    CHECK(r.p_played(0) == doctest::Approx(-1.0));
    CHECK(r.best_response(0) == doctest::Approx(-1.0));
  }
  CHECK(traj.state.u.norm() <= 1e-12);
  CHECK(traj.certificate() <= 1e-12);
}

TEST_CASE("engine: first round has a zero invariant") {
  swapreg::ApproachState st(2);
  auto log = swapreg::step(st, ConvexSet::ball(Norm::Linf, 2), ConvexSet::ball(Norm::L1, 2), {},
                           [](long, const Eigen::VectorXd&) {
                             return Eigen::Vector2d(0.3, -0.2).eval();
                           });
  CHECK(log.t == 1);
  CHECK(log.invariant_value == 0.0);
  CHECK(log.p_played.isApprox(Eigen::Vector2d(-1, -1)));
}

TEST_CASE("engine: exact invariant and certificate on random instances") {
  struct Case {
    ConvexSet p, l;
    long horizon;
  };
  Eigen::MatrixXd tri(3, 2);
  tri << 1, 0, 0, 1, -1, -1;
  std::vector<Case> cases = {
      {ConvexSet::ball(Norm::Linf, 2), ConvexSet::ball(Norm::L1, 2), 100},
      {ConvexSet::ball(Norm::Linf, 3), ConvexSet::ball(Norm::L1, 3), 400},
      {ConvexSet::simplex(3), ConvexSet::ball(Norm::Linf, 3), 150},
      {ConvexSet::vpolytope(tri), ConvexSet::scaled(ConvexSet::ball(Norm::L1, 2), 0.5), 150},
  };
  std::uint64_t seed = 11;
  for (const auto& c : cases) {
    const std::string name = c.p.describe();
    CAPTURE(name);
    swapreg::RunConfig cfg{c.p, c.l, c.horizon, {}};
    auto traj = swapreg::run(cfg, random_member(c.l, seed++));
    for (const auto& r : traj.rounds) {
      CHECK(r.invariant_value <= 1e-7);
      CHECK(r.game_gap <= 1e-7);
    }
    check_consistency(traj);
    const double b = traj.max_round_norm();
    CHECK(b <= traj.set_bound + 1e-9);
    CHECK(traj.certificate() <= 2.0 * b / std::sqrt(static_cast<double>(c.horizon)) + 1e-9);
  }
}

TEST_CASE("engine: single round certificate") {
  swapreg::RunConfig cfg{ConvexSet::ball(Norm::Linf, 3), ConvexSet::ball(Norm::L1, 3), 1, {}};
  auto traj = swapreg::run(cfg, random_member(cfg.lset, 4));
  CHECK(traj.certificate() <= 2.0 * traj.max_round_norm() + 1e-12);
}

TEST_CASE("engine: approximate mode with an exact solver plays like the exact mode") {
  auto p = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  swapreg::RunConfig exact{p, l, 120, {}};
  swapreg::RunConfig approx = exact;
  approx.options.mode = swapreg::Mode::Approximate;
  auto a = swapreg::run(exact, random_member(l, 3));
  auto b = swapreg::run(approx, random_member(l, 3));
  for (size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK((a.rounds[i].p_played - b.rounds[i].p_played).norm() <= 1e-7);
  }
}

TEST_CASE("engine: FPL mode certificate") {
  auto p = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  swapreg::RunConfig cfg{p, l, 400, {}};
  cfg.options.mode = swapreg::Mode::Approximate;
  cfg.options.solver = swapreg::GameSolver::Fpl;
  cfg.options.fpl_iters = 2000;
  cfg.options.seed = 9;
  auto traj = swapreg::run(cfg, random_member(l, 5));
  const double t = static_cast<double>(cfg.horizon);
  for (const auto& r : traj.rounds) {
    CHECK(r.game_gap >= -1e-12);
    CHECK(r.invariant_value <= r.game_gap * static_cast<double>(r.t - 1) + 1e-7);
  }
  check_consistency(traj);
  CHECK(traj.certificate() <= 2.0 * traj.max_round_norm() / std::sqrt(t) + traj.mean_gap() + 1e-6);
}

TEST_CASE("engine: eps schedule doubles FPL iterations") {
  auto p = ConvexSet::ball(Norm::Linf, 2);
  auto l = ConvexSet::ball(Norm::L1, 2);
  swapreg::RunConfig cfg{p, l, 30, {}};
  cfg.options.mode = swapreg::Mode::Approximate;
  cfg.options.solver = swapreg::GameSolver::Fpl;
  cfg.options.fpl_iters = 50;
  cfg.options.eps.kind = swapreg::EpsSchedule::Kind::Constant;
  cfg.options.eps.value = 1e-6;
  cfg.options.eps.max_doublings = 2;
  auto traj = swapreg::run(cfg, random_member(l, 5));
  CHECK(traj.rounds.back().fpl_iters == 200);
  CHECK(cfg.options.eps.target(7).value() == 1e-6);
  swapreg::EpsSchedule inv{swapreg::EpsSchedule::Kind::InvSqrt, 0.2, 1};
  CHECK(inv.target(4).value() == doctest::Approx(0.1));
  CHECK_FALSE(swapreg::EpsSchedule{}.target(3).has_value());
}

TEST_CASE("engine: identity preconditioner reproduces the plain run") {
  auto p = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  swapreg::RunConfig cfg{p, l, 100, {}};
  auto a = swapreg::run(cfg, random_member(l, 21));
  auto b = swapreg::run_preconditioned(cfg, random_member(l, 21));
  REQUIRE(b.preconditioner.has_value());
  CHECK(b.preconditioner->forward.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  for (size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK((a.rounds[i].p_played - b.rounds[i].p_played).norm() <= 1e-9);
  }
}

TEST_CASE("engine: John-positioned runs keep round norms below sqrt(d+1)") {
  std::uint64_t seed = 40;
  Eigen::MatrixXd g(6, 3);
  g << 1, 0.2, 0, -1, -0.2, 0, 0, 1, 0.5, 0, -1, -0.5, 0.3, 0, 2, -0.3, 0, -2;
  const ConvexSet h = ConvexSet::hpolytope(g, Eigen::VectorXd::Ones(6));
  for (const auto& p : {ConvexSet::ball(Norm::L1, 3), ConvexSet::ball(Norm::Linf, 4, 2.0), h}) {
    const std::string name = p.describe();
    CAPTURE(name);
    const ConvexSet l = swapreg::polar(p);
    swapreg::RunConfig cfg{p, l, 150, {}};
    auto traj = swapreg::run_preconditioned(cfg, random_vertex(l, seed++));
    const double d = static_cast<double>(p.dim());
    for (const auto& r : traj.rounds) {
      CHECK(r.kappa.norm() <= std::sqrt(d + 1.0) + 1e-6);
      CHECK(r.s_target.norm() <= std::sqrt(d + 1.0) + 1e-6);
      CHECK(r.invariant_value <= 1e-7);
      // The instantaneous loss is frame independent.
      CHECK(std::abs(r.loss_working.dot(r.p_working) - r.loss.dot(r.p_played)) <= 1e-9);
      CHECK(swapreg::membership(p, r.p_played, 1e-7));
    }
    CHECK(traj.certificate() <=
          2.0 * traj.max_round_norm() / std::sqrt(static_cast<double>(cfg.horizon)) + 1e-9);
  }
}

TEST_CASE("engine: loss outside the loss set is an adversary fault") {
  swapreg::RunConfig cfg{ConvexSet::ball(Norm::Linf, 2), ConvexSet::ball(Norm::L1, 2), 5, {}};
  auto bad = [](long, const Eigen::VectorXd&) { return Eigen::Vector2d(1.0, 1.0).eval(); };
  CHECK_THROWS_AS(swapreg::run(cfg, bad), swapreg::AdversaryFault);
  CHECK_THROWS_AS(swapreg::run_preconditioned(cfg, bad), swapreg::AdversaryFault);
  auto wrong = [](long, const Eigen::VectorXd&) { return Eigen::Vector3d(0, 0, 0).eval(); };
  CHECK_THROWS_AS(swapreg::run(cfg, wrong), swapreg::AdversaryFault);
}

TEST_CASE("engine: preconditioning rejects non-symmetric polytopes") {
  Eigen::MatrixXd tri(3, 2);
  tri << 1, 0, 0, 1, -1, -1;
  auto p = ConvexSet::vpolytope(tri);
  swapreg::RunConfig cfg{p, ConvexSet::ball(Norm::L1, 2, 0.25), 5, {}};
  CHECK_THROWS_AS(swapreg::run_preconditioned(cfg, random_member(cfg.lset, 1)),
                  swapreg::UnsupportedSet);
}

TEST_CASE("engine: preconditioned simplex") {
  auto p = ConvexSet::simplex(3);
  auto l = ConvexSet::ball(Norm::Linf, 3);
  swapreg::RunConfig cfg{p, l, 120, {}};
  auto traj = swapreg::run_preconditioned(cfg, random_member(l, 8));
  for (const auto& r : traj.rounds) {
    CHECK(r.invariant_value <= 1e-7);
    CHECK(swapreg::membership(p, r.p_played, 1e-7));
  }
  check_consistency(traj);
}

TEST_CASE("pythagorean: examples") {
  const Eigen::Vector2d e1(1, 0), e2(0, 1);
  auto alt = swapreg::pythagorean_check({e1, -e1, e1, -e1}, 1.0, {});
  CHECK(alt.holds);
  CHECK(alt.lhs == 0.0);
  CHECK(alt.rhs == doctest::Approx(2.0));
  auto tight = swapreg::pythagorean_check({e1, e2}, 1.0, {0.0, 0.0});
  CHECK(tight.holds);
  CHECK(std::abs(tight.lhs - tight.rhs) <= 1e-12);
  CHECK(swapreg::pythagorean_check({}, 1.0, {}).holds);
}

TEST_CASE("pythagorean: premise violations report the round") {
  const Eigen::Vector2d e1(1, 0);
  try {
    swapreg::pythagorean_check({e1, e1, -e1}, 1.0, {});
    FAIL("expected PremiseViolated");
  } catch (const swapreg::PremiseViolated& e) {
    CHECK(e.round() == 2);
  }
  try {
    swapreg::pythagorean_check({e1, 3.0 * e1}, 1.0, {});
    FAIL("expected PremiseViolated");
  } catch (const swapreg::PremiseViolated& e) {
    CHECK(e.round() == 2);
  }
  CHECK_NOTHROW(swapreg::pythagorean_check({e1, e1}, 1.0, {0.0, 1.0}));
  CHECK_THROWS_AS(swapreg::pythagorean_check({e1, e1}, 1.0, {0.0}), swapreg::InvalidArgument);
}

TEST_CASE("pythagorean: random sequences with enforced premises") {
  swapreg::testing::Rng rng(77);
  std::uniform_int_distribution<int> len(1, 60), dim(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = len(rng);
    const int d = dim(rng);
    const double b = 0.5 + 2.0 * unit(rng);
    std::vector<Eigen::VectorXd> vs;
    std::vector<double> eps;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < n; ++t) {
      const double e = trial % 2 ? 0.1 * unit(rng) : 0.0;
      Eigen::VectorXd v = swapreg::testing::gaussian(rng, d);
      v *= b * unit(rng) / v.norm();
      if (t > 0 && sum.dot(v) / t > e) {
        // Remove the offending component along the running sum.
        const Eigen::VectorXd dir = sum.normalized();
        v -= (dir.dot(v) - e * t / sum.norm()) * dir;
        if (v.norm() > b) v *= b / v.norm();
      }
      vs.push_back(v);
      eps.push_back(e);
      sum += v;
    }
    auto res = swapreg::pythagorean_check(vs, b, eps);
    CHECK(res.holds);
    CHECK(res.lhs <= res.rhs + 1e-12);
  }
}
