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

#include "doctest.h"
#include "swapreg/errors.hpp"
#include "swapreg/lp.hpp"
#include "test_support.hpp"

using swapreg::lp::LpProblem;
using swapreg::lp::PivotRule;
using swapreg::lp::Status;
using swapreg::lp::solve_lp;

TEST_CASE("lp: unit interval") {
  LpProblem p(1);
  p.objective << 1.0;
  p.lower = Eigen::VectorXd::Zero(1);
  p.upper = Eigen::VectorXd::Ones(1);
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.point(0) == doctest::Approx(0.0));
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("lp: simplex face") {
  LpProblem p(2);
  p.objective << -1.0, -1.0;
  p.add_ineq(Eigen::RowVector2d(1.0, 1.0), 1.0);
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(-1.0));
}

TEST_CASE("lp: infeasible") {
  LpProblem p(1);
  p.objective << 1.0;
  p.add_ineq(Eigen::RowVectorXd::Constant(1, 1.0), -1.0);
  CHECK(solve_lp(p).status == Status::Infeasible);
}

TEST_CASE("lp: unbounded and free variables") {
  LpProblem p(1);
  p.objective << -1.0;
  CHECK(solve_lp(p).status == Status::Unbounded);

  LpProblem q(2);
  q.free_variables();
  q.objective << 1.0, 0.0;
  q.add_ineq(Eigen::RowVector2d(-1.0, 0.0), 3.0);
  q.add_eq(Eigen::RowVector2d(1.0, 1.0), 0.0);
  auto s = solve_lp(q);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.point(0) == doctest::Approx(-3.0));
  CHECK(s.point(1) == doctest::Approx(3.0));
}

TEST_CASE("lp: redundant equalities and upper-only bounds") {
  LpProblem p(2);
  p.objective << 1.0, 2.0;
  p.lower = Eigen::Vector2d(-swapreg::lp::kInf, -swapreg::lp::kInf);
  p.upper = Eigen::Vector2d(5.0, 5.0);
  p.add_eq(Eigen::RowVector2d(1.0, 1.0), 2.0);
  p.add_eq(Eigen::RowVector2d(2.0, 2.0), 4.0);
  p.add_ineq(Eigen::RowVector2d(-1.0, 0.0), 1.0);
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.point(0) == doctest::Approx(5.0));
  CHECK(s.point(1) == doctest::Approx(-3.0));
  CHECK(s.value == doctest::Approx(-1.0));
}

TEST_CASE("lp: rejects malformed input") {
  LpProblem p(2);
  p.objective << 1.0, std::nan("");
  CHECK_THROWS_AS(solve_lp(p), swapreg::InvalidArgument);
}

TEST_CASE("lp: random instances agree with vertex enumeration") {
  swapreg::testing::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd a = swapreg::testing::gaussian(rng, m, n);
    // Feasible by construction: a random interior point satisfies the rows.
    Eigen::VectorXd x0 = swapreg::testing::uniform(rng, n, 0.0, 1.0);
    Eigen::VectorXd b = a * x0 + swapreg::testing::uniform(rng, m, 0.1, 1.0);
    Eigen::VectorXd c = swapreg::testing::gaussian(rng, n);

    LpProblem p(n);
    p.objective = c;
    p.ineq = a;
    p.ineq_rhs = b;
    p.upper = Eigen::VectorXd::Constant(n, 3.0);
    p.lower = Eigen::VectorXd::Zero(n);

    // Full H-description for the oracle.
    Eigen::MatrixXd g(m + 2 * n, n);
    Eigen::VectorXd h(m + 2 * n);
    g.topRows(m) = a;
    h.head(m) = b;
    g.middleRows(m, n) = -Eigen::MatrixXd::Identity(n, n);
    h.segment(m, n).setZero();
    g.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
    h.tail(n).setConstant(3.0);
    auto oracle = swapreg::testing::brute_force_min(c, g, h);
    REQUIRE(oracle.has_value());

    for (PivotRule rule : {PivotRule::Bland, PivotRule::DantzigWithBlandFallback}) {
      swapreg::lp::SolveOptions opt;
      opt.rule = rule;
      auto s = solve_lp(p, opt);
      REQUIRE(s.status == Status::Optimal);
      CHECK(s.value == doctest::Approx(*oracle).epsilon(1e-6).scale(1.0));
      CHECK(swapreg::lp::max_violation(p, s.point) <= 1e-7);
    }
  }
}

TEST_CASE("lp: strong duality on random instances") {
  swapreg::testing::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int m = 2 + static_cast<int>(rng() % 6);
    // Primal: min c^T x, A x >= b, x >= 0.  Dual: max b^T y, A^T y <= c, y >= 0.
    Eigen::MatrixXd a = swapreg::testing::gaussian(rng, m, n).cwiseAbs();
    Eigen::VectorXd b = swapreg::testing::uniform(rng, m, 0.1, 1.0);
    Eigen::VectorXd c = swapreg::testing::uniform(rng, n, 0.1, 1.0);

    LpProblem primal(n);
    primal.objective = c;
    primal.ineq = -a;
    primal.ineq_rhs = -b;
    LpProblem dual(m);
    dual.objective = -b;
    dual.ineq = a.transpose();
    dual.ineq_rhs = c;

    auto ps = solve_lp(primal);
    auto ds = solve_lp(dual);
    REQUIRE(ps.status == Status::Optimal);
    REQUIRE(ds.status == Status::Optimal);
    CHECK(ps.value == doctest::Approx(-ds.value).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("lp: degenerate cycling-prone instance terminates") {
  // Beale's example, which cycles under the textbook largest-coefficient rule.
  LpProblem p(4);
  p.objective << -0.75, 150.0, -0.02, 6.0;
  p.add_ineq((Eigen::RowVectorXd(4) << 0.25, -60.0, -0.04, 9.0).finished(), 0.0);
  p.add_ineq((Eigen::RowVectorXd(4) << 0.5, -90.0, -0.02, 3.0).finished(), 0.0);
  p.add_ineq((Eigen::RowVectorXd(4) << 0.0, 0.0, 1.0, 0.0).finished(), 1.0);
  for (PivotRule rule : {PivotRule::Bland, PivotRule::DantzigWithBlandFallback}) {
    swapreg::lp::SolveOptions opt;
    opt.rule = rule;
    auto s = solve_lp(p, opt);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(-0.05));
  }
}

TEST_CASE("lp: incremental rows match cold solves") {
  swapreg::testing::Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    LpProblem p(n);
    p.objective = swapreg::testing::gaussian(rng, n);
    if (trial % 2 == 0) {
      p.free_variables();
      p.lower(0) = -2.0;
    } else {
      p.upper = Eigen::VectorXd::Constant(n, 4.0);
    }
    const Eigen::VectorXd x0 = swapreg::testing::uniform(rng, n, 0.0, 1.0);
    // Box rows keep every stage bounded.
    for (int j = 0; j < n; ++j) {
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
      e(j) = 1.0;
      p.add_ineq(e, 5.0);
      p.add_ineq(-e, 5.0);
    }
    if (trial % 3 == 0) {
      const Eigen::RowVectorXd r = swapreg::testing::gaussian(rng, n).transpose();
      p.add_eq(r, r.dot(x0));
    }
    swapreg::lp::IncrementalLp inc(p);
    REQUIRE(inc.solution().status == Status::Optimal);
    for (int stage = 0; stage < 6; ++stage) {
      const int k = 1 + static_cast<int>(rng() % 3);
      Eigen::MatrixXd rows = swapreg::testing::gaussian(rng, k, n);
      Eigen::VectorXd rhs = rows * x0 + swapreg::testing::uniform(rng, k, 0.0, 0.5);
      const auto& s = inc.add_ineq(rows, rhs);
      const auto cold = solve_lp(inc.problem());
      REQUIRE(cold.status == Status::Optimal);
      REQUIRE(s.status == Status::Optimal);
      CHECK(s.value == doctest::Approx(cold.value).epsilon(1e-7).scale(1.0));
      CHECK(swapreg::lp::max_violation(inc.problem(), s.point) <= 1e-7);
    }
    // An impossible row.
    Eigen::MatrixXd bad(2, n);
    bad.row(0) = Eigen::RowVectorXd::Ones(n);
    bad.row(1) = -Eigen::RowVectorXd::Ones(n);
    CHECK(inc.add_ineq(bad, Eigen::Vector2d(-1.0, -1.0)).status == Status::Infeasible);
  }
}

TEST_CASE("lp: matrix games agree with their duals") {
  swapreg::testing::Rng rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 15 + static_cast<int>(rng() % 20);
    const int n = 15 + static_cast<int>(rng() % 20);
    Eigen::MatrixXd a = swapreg::testing::gaussian(rng, m, n);
    if (trial % 3 == 0) a = a.array().round() / 4.0;
    // Row player: min v s.t. a^T x <= v, x in the simplex. Column player:
    // max w s.t. a y >= w, y in the simplex.
    auto game = [](const Eigen::MatrixXd& payoff, double sign) {
      const Eigen::Index k = payoff.rows();
      LpProblem p(k + 1);
      p.lower = Eigen::VectorXd::Zero(k + 1);
      p.lower(k) = -swapreg::lp::kInf;
      p.upper = Eigen::VectorXd::Constant(k + 1, swapreg::lp::kInf);
      p.objective(k) = 1.0;
      for (Eigen::Index j = 0; j < payoff.cols(); ++j) {
        Eigen::RowVectorXd row(k + 1);
        row << sign * payoff.col(j).transpose(), -1.0;
        p.add_ineq(row, 0.0);
      }
      Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(k + 1);
      ones(k) = 0.0;
      p.add_eq(ones, 1.0);
      return p;
    };
    const LpProblem row = game(a, 1.0);
    const LpProblem col = game(a.transpose(), -1.0);
    for (double piv : {1e-9, 1e-12}) {
      swapreg::lp::SolveOptions opt;
      opt.tol.pivot = piv;
      auto rs = solve_lp(row, opt);
      auto cs = solve_lp(col, opt);
      REQUIRE(rs.status == Status::Optimal);
      REQUIRE(cs.status == Status::Optimal);
      CHECK(swapreg::lp::max_violation(row, rs.point) <= 1e-9);
      CHECK(swapreg::lp::max_violation(col, cs.point) <= 1e-9);
      CHECK(rs.value == doctest::Approx(-cs.value).epsilon(1e-8).scale(1.0));
    }
  }
}
