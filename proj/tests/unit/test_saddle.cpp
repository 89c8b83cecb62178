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
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "swapreg/errors.hpp"
#include "swapreg/saddle.hpp"
#include "test_support.hpp"

using swapreg::BilinearGame;
using swapreg::ConvexSet;
using swapreg::Norm;

namespace {

BilinearGame random_game(swapreg::testing::Rng& rng, const ConvexSet& p, const ConvexSet& l) {
  return BilinearGame{swapreg::testing::gaussian(rng, l.dim(), p.dim()),
                      swapreg::testing::gaussian(rng, l.dim()), p, l};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("saddle: one-dimensional matching game") {
  auto seg = ConvexSet::ball(Norm::Linf, 1);
  BilinearGame g{Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), seg, seg};
  auto s = swapreg::solve_exact(g);
  CHECK(s.value == doctest::Approx(0.0));
  CHECK(s.p_star(0) == doctest::Approx(0.0));
  CHECK(s.gap <= 1e-7);
}

TEST_CASE("saddle: constant payoff drops the strategy") {
  auto p = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  Eigen::Vector3d u(0.3, -2.0, 1.0);
  BilinearGame g{Eigen::MatrixXd::Zero(3, 3), u, p, l};
  auto s = swapreg::solve_exact(g);
  CHECK(s.value == doctest::Approx(2.0));
  CHECK(s.gap <= 1e-7);
}

TEST_CASE("saddle: zero game picks the deterministic tie") {
  auto p = ConvexSet::ball(Norm::Linf, 2);
  auto l = ConvexSet::ball(Norm::L1, 2);
  BilinearGame g{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), p, l};
  for (const auto& s : {swapreg::solve_exact(g), swapreg::solve_fpl(g, 10, 1)}) {
    CHECK(s.p_star.isApprox(Eigen::Vector2d(-1, -1)));
    CHECK(s.l_star.isApprox(Eigen::Vector2d(1, 0)));
    CHECK(s.value == 0.0);
    CHECK(s.gap == 0.0);
  }
}

TEST_CASE("saddle: value matches a grid search") {
  swapreg::testing::Rng rng(101);
  auto p = ConvexSet::ball(Norm::Linf, 2);
  auto l = ConvexSet::ball(Norm::L1, 2);
  for (int trial = 0; trial < 5; ++trial) {
    BilinearGame g = random_game(rng, p, l);
    // Coarse grid, then a fine grid around the best coarse cell.
    auto f = [&](const Eigen::Vector2d& x) {
      return (g.u_mat * x + g.u_vec).lpNorm<Eigen::Infinity>();
    };
    double grid = 1e300;
    Eigen::Vector2d best;
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; j <= 200; ++j) {
        const Eigen::Vector2d x(-1.0 + 0.01 * i, -1.0 + 0.01 * j);
        if (f(x) < grid) grid = f(x), best = x;
      }
    }
    const Eigen::Vector2d centre = best;
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; j <= 200; ++j) {
        const Eigen::Vector2d x = (centre + Eigen::Vector2d(-0.01 + 1e-4 * i, -0.01 + 1e-4 * j))
                                      .cwiseMax(-1.0)
                                      .cwiseMin(1.0);
        grid = std::min(grid, f(x));
      }
    }
    auto s = swapreg::solve_exact(g);
    CHECK(std::abs(s.value - grid) <= 1e-3 * (1.0 + std::abs(grid)));
  }
}

TEST_CASE("saddle: formulation solver agrees with the vertex-mixture solver") {
  swapreg::testing::Rng rng(7);
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 1, 1, -1, -1, -1;
  Eigen::Matrix2d a;
  a << 2, 1, 0, 1;
  std::vector<std::pair<ConvexSet, ConvexSet>> pairs = {
      {ConvexSet::ball(Norm::Linf, 3), ConvexSet::ball(Norm::L1, 3)},
      {ConvexSet::ball(Norm::L1, 3), ConvexSet::ball(Norm::Linf, 3, 0.5)},
      {ConvexSet::simplex(2), ConvexSet::vpolytope(tri)},
      {ConvexSet::product({ConvexSet::ball(Norm::L1, 2), ConvexSet::ball(Norm::Linf, 2)}),
       ConvexSet::product({ConvexSet::ball(Norm::Linf, 2, 0.5), ConvexSet::ball(Norm::L1, 2, 0.5)})},
      {ConvexSet::linear_image(a, ConvexSet::ball(Norm::L1, 2), Eigen::Vector2d(0.1, 0.2)),
       ConvexSet::hpolytope((Eigen::MatrixXd(4, 2) << 1, 0, -1, 0, 0, 1, -1, -1).finished(),
                            Eigen::Vector4d(1, 1, 1, 1))},
  };
  for (const auto& [p, l] : pairs) {
    const std::string name = p.describe();
    CAPTURE(name);
    for (int trial = 0; trial < 20; ++trial) {
      BilinearGame g = random_game(rng, p, l);
      auto s = swapreg::solve_exact(g);
      auto v = swapreg::solve_vertex_game(g);
      CHECK(s.value == doctest::Approx(v.value).epsilon(1e-7).scale(1.0));
      CHECK(s.gap <= 1e-7);
      CHECK(s.gap >= -1e-9);
      CHECK(v.gap <= 1e-7);
      CHECK(swapreg::membership(p, s.p_star, 1e-7));
      CHECK(swapreg::membership(l, s.l_star, 1e-7));
      // Max-min value through the opponent's best response.
      const double maxmin =
          s.l_star.dot(g.u_vec) - swapreg::support(p, -g.u_mat.transpose() * s.l_star);
      CHECK(maxmin == doctest::Approx(s.value).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("saddle: scale invariance") {
  swapreg::testing::Rng rng(19);
  auto p = ConvexSet::ball(Norm::Linf, 3);
  auto l = ConvexSet::ball(Norm::L1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    BilinearGame g = random_game(rng, p, l);
    const double c = std::exp(swapreg::testing::uniform(rng, 1, -3.0, 3.0)(0));
    BilinearGame gc{c * g.u_mat, c * g.u_vec, p, l};
    auto s = swapreg::solve_exact(g);
    auto sc = swapreg::solve_exact(gc);
    CHECK(sc.value == doctest::Approx(c * s.value).epsilon(1e-7).scale(1.0));
    CHECK(swapreg::duality_gap(gc, s.p_star, s.l_star) <= 1e-7 * std::max(1.0, c));
  }
}

TEST_CASE("saddle: Euclidean balls need the approximate solver") {
  auto b = ConvexSet::ball(Norm::L2, 2);
  BilinearGame g{Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), b, b};
  CHECK_THROWS_AS(swapreg::solve_exact(g), swapreg::NonPolyhedral);
  auto s = swapreg::solve_fpl(g, 2000, 3);
  CHECK(s.gap >= 0.0);
  CHECK(s.gap <= 0.2);
}

TEST_CASE("saddle: vertex solver caps its enumeration") {
  auto p = ConvexSet::ball(Norm::Linf, 14);
  auto l = ConvexSet::ball(Norm::L1, 14);
  BilinearGame g{Eigen::MatrixXd::Identity(14, 14), Eigen::VectorXd::Zero(14), p, l};
  CHECK_THROWS_AS(swapreg::solve_vertex_game(g), swapreg::VertexBlowup);
}

TEST_CASE("saddle: duality gap") {
  auto b = ConvexSet::ball(Norm::L2, 2);
  BilinearGame g{Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), b, b};
  const Eigen::Vector2d e1(1, 0);
  CHECK(swapreg::duality_gap(g, e1, e1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(swapreg::duality_gap(g, 2.0 * e1, e1), swapreg::MembershipViolation);
  swapreg::Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    CHECK(swapreg::duality_gap(g, swapreg::sample(b, rng), swapreg::sample(b, rng)) >= -1e-12);
  }
}

TEST_CASE("saddle: FPL tracks the exact value") {
  swapreg::testing::Rng rng(101);
  auto p = ConvexSet::ball(Norm::Linf, 2);
  auto l = ConvexSet::ball(Norm::L1, 2);
  BilinearGame g = random_game(rng, p, l);
  auto exact = swapreg::solve_exact(g);
  auto fpl = swapreg::solve_fpl(g, 10000, 5);
  CHECK(std::abs(fpl.value - exact.value) <= 0.05);
  CHECK(fpl.gap >= -1e-12);

  std::vector<double> small, large;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    small.push_back(swapreg::solve_fpl(g, 10000, seed).gap);
    large.push_back(swapreg::solve_fpl(g, 40000, 1000 + seed).gap);
  }
  CHECK(median(large) <= median(small));
}
