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
#include <vector>

#include "doctest.h"
#include "swapreg/errors.hpp"
#include "swapreg/evaluate.hpp"
#include "swapreg/john.hpp"
#include "test_support.hpp"

using swapreg::ConvexSet;
using swapreg::Norm;

namespace {

swapreg::PlayHistory random_history(const ConvexSet& p, const ConvexSet& l, int n, std::uint64_t seed) {
  swapreg::Rng rng(seed);
  swapreg::PlayHistory h{p, l, {}, {}, {}};
  for (int t = 0; t < n; ++t) {
    h.plays.push_back(swapreg::sample(p, rng));
    h.losses.push_back(swapreg::sample(l, rng));
  }
  return h;
}

// Box rows: |M_i p + a_i| <= 1 on the box iff ||M_i||_1 + |a_i| <= 1, so
// each row minimizes to -max(|K_i|_inf, |c_i|).
double box_endomorphism_min(const Eigen::MatrixXd& k, const Eigen::VectorXd& c) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    v -= std::max(k.row(i).cwiseAbs().maxCoeff(), std::abs(c(i)));
  }
  return v;
}

// Largest |q(x)| on [-1, 1] for q(x) = c1 x + c2 x^2 + c0.
double quadratic_sup(double c1, double c2, double c0) {
  auto q = [&](double x) { return c1 * x + c2 * x * x + c0; };
  double m = std::max(std::abs(q(-1.0)), std::abs(q(1.0)));
  if (c2 != 0.0) {
    const double x = -c1 / (2.0 * c2);
    if (std::abs(x) <= 1.0) m = std::max(m, std::abs(q(x)));
  }
  return m;
}

swapreg::LossOracle random_member(const ConvexSet& lset, std::uint64_t seed) {
  auto rng = std::make_shared<swapreg::Rng>(seed);
  return [lset, rng](long, const Eigen::VectorXd&) { return swapreg::sample(lset, *rng); };
}

}  // namespace

TEST_CASE("evaluate: external regret arithmetic") {
  auto seg = ConvexSet::ball(Norm::Linf, 1);
  swapreg::PlayHistory h{seg, ConvexSet::ball(Norm::L1, 1), {}, {}, {}};
  for (int t = 0; t < 2; ++t) {
    h.plays.push_back(Eigen::VectorXd::Zero(1));
    h.losses.push_back(Eigen::VectorXd::Ones(1));
  }
  CHECK(swapreg::external_regret(h) == doctest::Approx(2.0));
  CHECK(swapreg::linear_swap_regret(h).value == doctest::Approx(2.0));

  auto box = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  auto best = random_history(box, l, 30, 4);
  const Eigen::VectorXd p = swapreg::lmo(box, best.loss_sum());
  for (auto& q : best.plays) q = p;
  CHECK(std::abs(swapreg::external_regret(best)) <= 1e-12);
}

TEST_CASE("evaluate: identity is always feasible") {
  for (const auto& p : {ConvexSet::ball(Norm::Linf, 3), ConvexSet::ball(Norm::L1, 3), ConvexSet::simplex(3),
                        ConvexSet::product({ConvexSet::ball(Norm::Linf, 1), ConvexSet::ball(Norm::L1, 2)})}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::string desc = p.describe();
      CAPTURE(desc);
      auto h = random_history(p, ConvexSet::ball(Norm::L1, 3), 25, seed);
      const auto r = swapreg::linear_swap_regret(h);
      CHECK(r.value >= -1e-7);
      CHECK(r.dev.certified);
      CHECK(swapreg::endomorphism_violation(p, r.dev) <= 1e-7);
      CHECK(swapreg::external_regret(h) <= r.value + 1e-7);
      const auto lin = swapreg::linear_swap_regret(h, false);
      CHECK(lin.value >= -1e-7);
      CHECK(lin.value <= r.value + 1e-7);
      CHECK(lin.dev.a.norm() == 0.0);
    }
  }
}

TEST_CASE("evaluate: constant play gives the external regret") {
  auto box = ConvexSet::ball(Norm::Linf, 3);
  auto h = random_history(box, ConvexSet::ball(Norm::L1, 3), 40, 8);
  const Eigen::VectorXd p = h.plays.front();
  for (auto& q : h.plays) q = p;
  CHECK(swapreg::linear_swap_regret(h).value == doctest::Approx(swapreg::external_regret(h)).epsilon(1e-9));
}

TEST_CASE("evaluate: box endomorphisms match the closed form") {
  swapreg::testing::Rng rng(11);
  for (int d = 1; d <= 5; ++d) {
    auto box = ConvexSet::ball(Norm::Linf, d);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd k = swapreg::testing::gaussian(rng, d, d);
      const Eigen::VectorXd c = swapreg::testing::gaussian(rng, d);
      const auto lp = swapreg::optimize_endomorphism(box, k, c);
      CHECK(lp.value == doctest::Approx(box_endomorphism_min(k, c)).epsilon(1e-9));
      CHECK(lp.dev.certified);
    }
  }
}

TEST_CASE("evaluate: rotation deviation matches a grid search") {
  auto box = ConvexSet::ball(Norm::Linf, 2);
  swapreg::PlayHistory h{box, ConvexSet::ball(Norm::L1, 2), {}, {}, {}};
  // The rotation (x, y) -> (y, -x) sends (1, 1) to (1, -1) and (1, -1) to
  // (-1, -1), so these losses reward it.
  for (int t = 0; t < 6; ++t) {
    if (t % 2 == 0) {
      h.plays.push_back(Eigen::Vector2d(1, 1));
      h.losses.push_back(Eigen::Vector2d(0.25, 0.75));
    } else {
      h.plays.push_back(Eigen::Vector2d(1, -1));
      h.losses.push_back(Eigen::Vector2d(0.5, -0.5));
    }
  }
  const auto r = swapreg::linear_swap_regret(h);

  const Eigen::MatrixXd k = h.loss_play_sum();
  const Eigen::VectorXd c = h.loss_sum();
  const Eigen::MatrixXd verts = swapreg::vertices(box);
  double grid_min = 0.0;
  std::vector<double> g;
  for (int i = 0; i <= 8; ++i) g.push_back(-1.0 + 0.25 * i);
  Eigen::MatrixXd m(2, 2);
  Eigen::Vector2d a;
  for (double m00 : g) for (double m01 : g) for (double m10 : g)
  for (double m11 : g) for (double a0 : g) for (double a1 : g) {
    m << m00, m01, m10, m11;
    a << a0, a1;
    bool ok = true;
    for (Eigen::Index v = 0; v < verts.rows() && ok; ++v) {
      ok = (m * verts.row(v).transpose() + a).lpNorm<Eigen::Infinity>() <= 1.0 + 1e-12;
    }
    if (ok) grid_min = std::min(grid_min, (m.array() * k.array()).sum() + a.dot(c));
  }
  const double grid_regret = h.total_loss() - grid_min;
  CHECK(std::abs(r.value - grid_regret) <= 2e-2);
  CHECK(r.value >= grid_regret - 1e-9);
  CHECK(r.value > swapreg::external_regret(h) + 1.0);
}

TEST_CASE("evaluate: linear swap regret is frame invariant") {
  swapreg::testing::Rng rng(21);
  int done = 0;
  for (const auto& p : {ConvexSet::ball(Norm::Linf, 3), ConvexSet::ball(Norm::L1, 3), ConvexSet::simplex(3)}) {
    const auto l = ConvexSet::ball(p.as<swapreg::set_node::Ball>() &&
                                           p.as<swapreg::set_node::Ball>()->norm == Norm::L1
                                       ? Norm::Linf
                                       : Norm::L1,
                                   3);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::MatrixXd a = swapreg::testing::gaussian(rng, 3, 3);
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
      const double cond = svd.singularValues()(0) / svd.singularValues()(2);
      if (cond > 1e3) continue;
      const Eigen::MatrixXd ait = a.inverse().transpose();
      auto h = random_history(p, l, 30, 100 + static_cast<std::uint64_t>(trial));
      swapreg::PlayHistory g{ConvexSet::linear_image(a, p), ConvexSet::linear_image(ait, l), {}, {}, {}};
      for (size_t t = 0; t < h.size(); ++t) {
        g.plays.push_back(a * h.plays[t]);
        g.losses.push_back(ait * h.losses[t]);
      }
      const double r = swapreg::linear_swap_regret(h).value;
      const double rg = swapreg::linear_swap_regret(g).value;
      const std::string desc = p.describe();
      CAPTURE(desc);
      CAPTURE(trial);
      CHECK(std::abs(r - rg) <= 1e-6 * (1.0 + std::abs(r)));
      ++done;
    }
  }
  CHECK(done >= 8);
}

TEST_CASE("evaluate: extremal endomorphisms in John position obey the Frobenius bound") {
  swapreg::testing::Rng rng(5);
  const Eigen::Index d = 4;
  auto pre = swapreg::john_precondition(ConvexSet::ball(Norm::Linf, d)).first;
  const Eigen::MatrixXd verts = swapreg::vertices(pre.target);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lp = swapreg::optimize_endomorphism(pre.target, swapreg::testing::gaussian(rng, d, d),
                                                   swapreg::testing::gaussian(rng, d));
    CHECK(lp.dev.certified);
    CHECK(lp.dev.m.norm() <= std::sqrt(2.0 * d) + 1e-6);
    CHECK(lp.dev.a.norm() <= std::sqrt(static_cast<double>(d)) + 1e-6);
    for (Eigen::Index v = 0; v < verts.rows(); ++v) {
      CHECK(swapreg::membership(pre.target, lp.dev.m * verts.row(v).transpose() + lp.dev.a, 1e-7));
    }
  }
}

TEST_CASE("evaluate: Euclidean balls have no facet description") {
  auto ball = ConvexSet::ball(Norm::L2, 2);
  auto h = random_history(ball, ConvexSet::ball(Norm::L2, 2), 5, 1);
  CHECK_THROWS_AS(swapreg::linear_swap_regret(h), swapreg::RepresentationMissing);
  CHECK(swapreg::external_regret(h) >= 0.0);
}

TEST_CASE("evaluate: history validation") {
  auto box = ConvexSet::ball(Norm::Linf, 2);
  auto h = random_history(box, ConvexSet::ball(Norm::L1, 2), 3, 1);
  h.plays[1] = Eigen::Vector2d(2, 0);
  CHECK_THROWS_AS(h.validate(), swapreg::MembershipViolation);
  h.plays.pop_back();
  CHECK_THROWS_AS(h.validate(), swapreg::InvalidArgument);
}

TEST_CASE("evaluate: degree-one deviation bound equals linear swap regret") {
  for (const auto& p : {ConvexSet::ball(Norm::Linf, 2), ConvexSet::simplex(2)}) {
    auto h = random_history(p, ConvexSet::ball(Norm::L1, 2), 30, 9);
    const auto lb = swapreg::polydim_regret_lower(h, swapreg::monomial_map(2, 1));
    CHECK(lb.certified);
    CHECK(lb.value == doctest::Approx(swapreg::linear_swap_regret(h).value).epsilon(1e-6));
  }
}

TEST_CASE("evaluate: quadratic deviations on the segment") {
  auto seg = ConvexSet::ball(Norm::Linf, 1);
  auto map = swapreg::monomial_map(1, 2);
  auto check_against_grid = [&](const swapreg::PlayHistory& h, double tol) {
    const auto lb = swapreg::polydim_regret_lower(h, map);
    REQUIRE(lb.certified);
    // Features are (p, p^2, 1).
    Eigen::Vector3d k = Eigen::Vector3d::Zero();
    for (size_t t = 0; t < h.size(); ++t) k += h.losses[t](0) * map(h.plays[t]);
    double best = 0.0;
    for (int i = -100; i <= 100; ++i) {
      for (int j = -50; j <= 50; ++j) {
        for (int z = -50; z <= 50; ++z) {
          const double c2 = 0.02 * i, c1 = 0.02 * j, c0 = 0.02 * z;
          if (quadratic_sup(c1, c2, c0) > 1.0 + 1e-12) continue;
          best = std::min(best, c1 * k(0) + c2 * k(1) + c0 * k(2));
        }
      }
    }
    const double grid = h.total_loss() - best;
    CHECK(lb.value >= grid - 1e-7);
    CHECK(std::abs(lb.value - grid) <= tol);
    CHECK(quadratic_sup(lb.m(0, 0), lb.m(0, 1), lb.m(0, 2)) <= 1.0 + 1e-7);
    CHECK(lb.value >= swapreg::linear_swap_regret(h).value - 1e-7);
    return lb.value;
  };

  // 1 - 2p^2 sends 0 to 1 and both endpoints to -1; no affine map does.
  swapreg::PlayHistory h{seg, ConvexSet::ball(Norm::L1, 1), {}, {}, {}};
  const double plays[] = {1.0, -1.0, 0.0};
  const double losses[] = {1.0, 1.0, -1.0};
  for (int t = 0; t < 3; ++t) {
    h.plays.push_back(Eigen::VectorXd::Constant(1, plays[t]));
    h.losses.push_back(Eigen::VectorXd::Constant(1, losses[t]));
  }
  CHECK(check_against_grid(h, 2e-2) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(swapreg::linear_swap_regret(h).value == doctest::Approx(1.0));

  auto r = random_history(seg, ConvexSet::ball(Norm::L1, 1), 6, 3);
  check_against_grid(r, 0.5);
}

TEST_CASE("evaluate: regret is bounded by the certificate on preconditioned runs") {
  const Eigen::Index d = 3;
  auto p = ConvexSet::ball(Norm::Linf, d);
  auto l = ConvexSet::ball(Norm::L1, d);
  swapreg::RunConfig cfg{p, l, 300, {}};
  auto traj = swapreg::run_preconditioned(cfg, random_member(l, 12));
  const auto orig = swapreg::history_of(traj, p, l);
  const auto work = swapreg::working_history(traj, l);
  const double cert = swapreg::app_loss_certificate(traj);
  const auto rep = swapreg::regret_report(orig, cert);
  const auto rw = swapreg::linear_swap_regret(work);
  const double t = static_cast<double>(cfg.horizon);
  const double dd = static_cast<double>(d);

  CHECK(rep.linear_swap == doctest::Approx(rw.value).epsilon(1e-6));
  CHECK(rep.external <= rep.linear_swap + 1e-7);
  CHECK(rep.app_loss_cert == rep.profile_swap_dist_cert);
  CHECK(rep.bound_8d_sqrt_t == doctest::Approx(8.0 * dd * std::sqrt(t)));
  CHECK(rw.value <= t * (std::sqrt(dd) + std::sqrt(2.0 * dd) + std::sqrt(dd)) * cert + 1e-7);
  Eigen::MatrixXd delta(d, d + 1);
  delta << Eigen::MatrixXd::Identity(d, d) - rw.dev.m, -rw.dev.a;
  CHECK(rw.value <= t * delta.norm() * cert + 1e-7);
  CHECK(rep.linear_swap <= rep.bound_8d_sqrt_t);
}

TEST_CASE("evaluate: polydim lower bound stays below the certificate bound") {
  auto p = ConvexSet::ball(Norm::Linf, 2);
  auto l = ConvexSet::ball(Norm::L1, 2);
  swapreg::PolyConfig cfg{p, l, 2, 150, {}};
  auto traj = swapreg::poly_run(cfg, random_member(l, 6));
  const auto h = swapreg::history_of(traj, p, l);
  const auto lb = swapreg::polydim_regret_lower(h, traj.map);
  CHECK(lb.certified);
  CHECK(lb.value >= -1e-7);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, traj.map.dim);
  j.leftCols(2).setIdentity();
  const double t = static_cast<double>(cfg.horizon);
  CHECK(lb.value <= t * (j - lb.m).norm() * swapreg::app_loss_certificate(traj) + 1e-7);
}
