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

// Regret evaluators for recorded play.

#ifndef SWAPREG_EVALUATE_HPP_
#define SWAPREG_EVALUATE_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "swapreg/engine.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/polydim.hpp"

namespace swapreg {

struct PlayHistory {
  ConvexSet pset;
  ConvexSet lset;
  std::vector<Eigen::VectorXd> plays;
  std::vector<Eigen::VectorXd> losses;
  std::vector<MixedStrategy> mixtures;

  std::size_t size() const { return plays.size(); }
  // Checks lengths, memberships and |<p_t, l_t>| <= 1. Throws
  // MembershipViolation or InvalidArgument.
  void validate(double tol = 1e-7) const;
  // sum_t l_t p_t^T and sum_t l_t.
  Eigen::MatrixXd loss_play_sum() const;
  Eigen::VectorXd loss_sum() const;
  double total_loss() const;
};

PlayHistory history_of(const Trajectory& traj, const ConvexSet& pset, const ConvexSet& lset);
// Working-frame history of a preconditioned run.
PlayHistory working_history(const Trajectory& traj, const ConvexSet& lset);
PlayHistory history_of(const PolyTrajectory& traj, const ConvexSet& pset, const ConvexSet& lset);

// p -> M p + a
struct AffineDeviation {
  Eigen::MatrixXd m;
  Eigen::VectorXd a;
  bool certified = false;

  double frobenius() const { return std::sqrt(m.squaredNorm() + a.squaredNorm()); }
};

struct EndomorphismLp {
  double value = 0.0;  // min <M, K> + <a, c>
  AffineDeviation dev;
  int rounds = 0;
  int cuts = 0;
};

// Minimizes <M, K> + <a, c> over affine endomorphisms of a polytope by
// cutting planes: rows g^T (M v + a) <= h for facets (g, h) of each product
// factor and separating vertices v = argmax_P (M^T g). Drops `a` when
// `include_affine` is false. Throws RepresentationMissing for sets without
// a facet description.
EndomorphismLp optimize_endomorphism(const ConvexSet& pset, const Eigen::MatrixXd& k,
                                     const Eigen::VectorXd& c, bool include_affine = true);

// Largest violation of M v + a in P over all v in P, measured in facet
// slack units.
double endomorphism_violation(const ConvexSet& pset, const AffineDeviation& dev);

struct LinearSwapResult {
  double value = 0.0;
  AffineDeviation dev;
};

// sum <l_t, p_t> - min over affine endomorphisms phi of sum <l_t, phi(p_t)>.
LinearSwapResult linear_swap_regret(const PlayHistory& h, bool include_affine = true);

// sum <l_t, p_t> - min_p <sum l_t, p>.
double external_regret(const PlayHistory& h);

// ||kappa_bar - s_bar||_F, an upper bound on the distance to the target set.
double app_loss_certificate(const Trajectory& traj);
double app_loss_certificate(const PolyTrajectory& traj);

struct RegretReport {
  double linear_swap = 0.0;
  AffineDeviation best_deviation;
  double external = 0.0;
  double app_loss_cert = 0.0;
  double profile_swap_dist_cert = 0.0;
  double bound_8d_sqrt_t = 0.0;
  double frobenius_max_observed = 0.0;
};

RegretReport regret_report(const PlayHistory& h, double app_loss_cert);

struct PolyLowerBound {
  double value = 0.0;
  Eigen::MatrixXd m;  // d x D
  bool certified = false;
  int rounds = 0;
};

// Certified lower bound on the regret against p -> M m(p): an LP over M
// with M m(q) in P imposed on a growing sample set, extended by a
// violation search and accepted only after 1000 random probes pass.
PolyLowerBound polydim_regret_lower(const PlayHistory& h, const FeatureMap& map,
                                    int rounds_cap = 20, std::uint64_t seed = 0);

}  // namespace swapreg

#endif  // SWAPREG_EVALUATE_HPP_
