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

// Bilinear zero-sum games  min_{p in P} max_{l in L}  l^T (U_mat p + U_vec).

#ifndef SWAPREG_SADDLE_HPP_
#define SWAPREG_SADDLE_HPP_

#include <cstdint>

#include <Eigen/Dense>

#include "swapreg/geometry.hpp"

namespace swapreg {

struct BilinearGame {
  Eigen::MatrixXd u_mat;
  Eigen::VectorXd u_vec;
  ConvexSet pset;
  ConvexSet lset;

  double payoff(const Eigen::VectorXd& p, const Eigen::VectorXd& l) const {
    return l.dot(u_mat * p + u_vec);
  }
  // Throws InvalidArgument on shape mismatch or non-finite entries.
  void validate() const;
};

struct SaddlePoint {
  Eigen::VectorXd p_star;
  Eigen::VectorXd l_star;
  double value = 0.0;
  double gap = 0.0;
};

// Mixed equilibrium of the matrix game min_x max_y x^T pay y over simplices.
struct MatrixGameSolution {
  Eigen::VectorXd row;
  Eigen::VectorXd col;
  double value = 0.0;
};
MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& pay);

// Exact saddle point of a polyhedral game. Each player's LP embeds the dual
// of the opponent's best-response LP over its extended formulation, so the
// size is linear in the formulation sizes. Throws NonPolyhedral for sets
// with Euclidean-ball parts.
SaddlePoint solve_exact(const BilinearGame& game);

// Exact saddle point through the matrix game over vertex mixtures. Throws
// VertexBlowup when either vertex list exceeds `cap`.
SaddlePoint solve_vertex_game(const BilinearGame& game, Eigen::Index cap = 10000);

// Both players run Follow-the-Perturbed-Leader against each other; returns
// the average iterates with their exact duality gap.
SaddlePoint solve_fpl(const BilinearGame& game, int iters, std::uint64_t seed);

// max_l' g(p, l') - min_p' g(p', l). Checks p in P and l in L.
double duality_gap(const BilinearGame& game, const Eigen::VectorXd& p, const Eigen::VectorXd& l);
double duality_gap_unchecked(const BilinearGame& game, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& l);

}  // namespace swapreg

#endif  // SWAPREG_SADDLE_HPP_
