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

// Approachability against swap deviations p -> M m(p) for a polynomial
// feature map m, with finite-support mixed strategies.

#ifndef SWAPREG_POLYDIM_HPP_
#define SWAPREG_POLYDIM_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "swapreg/engine.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/random.hpp"

namespace swapreg {

// Monomials of degree 1..degree in graded lexicographic order followed by
// the constant. The first d features are the coordinates.
struct FeatureMap {
  Eigen::Index d = 0;
  Eigen::Index dim = 0;  // D
  int degree = 0;
  std::vector<std::vector<int>> exponents;

  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const;
};

// Throws DimBlowup when the feature dimension exceeds `max_dim`.
FeatureMap monomial_map(Eigen::Index d, int degree, Eigen::Index max_dim = 500);

struct MixedStrategy {
  std::vector<Eigen::VectorXd> support;
  Eigen::VectorXd weights;

  Eigen::VectorXd mean() const;
  Eigen::VectorXd expected_features(const FeatureMap& map) const;
  // Weights nonnegative and summing to one, support inside `pset`.
  bool valid(const ConvexSet& pset, double tol = 1e-7) const;
};

// Heuristic argmin over p in pset of l^T U m(p). Candidates are the pool,
// the vertices (when there are at most 256), the minimizer of the linear
// part, 64 random members, and coordinate-descent refinements of the best
// three. The winner is appended to the pool.
Eigen::VectorXd best_response_point(const Eigen::MatrixXd& u, const Eigen::VectorXd& l,
                                    const ConvexSet& pset, const FeatureMap& map,
                                    std::vector<Eigen::VectorXd>& pool, Rng& rng);

struct PolyState {
  long t = 0;
  Eigen::MatrixXd u;  // d x D
  Eigen::MatrixXd kappa_bar;
  Eigen::MatrixXd s_bar;
  double norm_bound = 0.0;
  std::vector<Eigen::VectorXd> pool;
  std::vector<double> pool_weight;  // accumulated mixture weight per point
  std::vector<Eigen::VectorXd> loss_pool;

  PolyState(Eigen::Index d, Eigen::Index dim);
  double certificate() const { return (kappa_bar - s_bar).norm(); }
};

struct PolyOptions {
  int do_iters = 20;
  double improve_tol = 1e-4;
  std::size_t pool_cap = 256;
  std::uint64_t seed = 0;
  // Play a sample of the mixture instead of its mean when reporting to the
  // adversary. The regret accounting always uses the mixture expectation.
  bool sample_play = false;
};

struct PolyRoundLog {
  long t = 0;
  MixedStrategy mixture;
  Eigen::VectorXd p_played;
  Eigen::VectorXd loss;
  Eigen::VectorXd l_star;
  Eigen::VectorXd best_response;
  Eigen::MatrixXd kappa;
  Eigen::MatrixXd s_target;
  double invariant_value = 0.0;
  double game_gap = 0.0;  // measured eps_t, normalized by t - 1
  double game_value = 0.0;
  double inst_loss = 0.0;
  double cert_norm = 0.0;
  std::size_t pool_size = 0;
};

// Degree-one maps are solved exactly as a bilinear game over P x L.
PolyRoundLog poly_step(PolyState& state, const ConvexSet& pset, const ConvexSet& lset,
                       const FeatureMap& map, const PolyOptions& options, Rng& rng,
                       const LossOracle& adversary);

struct PolyConfig {
  ConvexSet pset;
  ConvexSet lset;
  int degree = 2;
  long horizon = 1;
  PolyOptions options;
};

struct PolyTrajectory {
  std::vector<PolyRoundLog> rounds;
  PolyState state;
  FeatureMap map;
  // max_p ||m(p)|| * max_l ||l||.
  double set_bound = 0.0;

  double certificate() const { return state.certificate(); }
  double mean_gap() const;
};

PolyTrajectory poly_run(const PolyConfig& config, const LossOracle& adversary);

// max over pset of ||m(p)||_2. Exact for degree one; otherwise the largest
// value over small vertex lists and 2000 boundary samples.
double feature_norm_bound(const ConvexSet& pset, const FeatureMap& map);

}  // namespace swapreg

#endif  // SWAPREG_POLYDIM_HPP_
