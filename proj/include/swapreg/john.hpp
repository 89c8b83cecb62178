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

// Minimum-volume enclosing ellipsoids and John-position preconditioning.

#ifndef SWAPREG_JOHN_HPP_
#define SWAPREG_JOHN_HPP_

#include <utility>

#include <Eigen/Dense>

#include "swapreg/geometry.hpp"

namespace swapreg {

struct MveeResult {
  // Ellipsoid {x : x^T H x <= 1}, scaled so that the farthest point touches.
  Eigen::MatrixXd h;
  // One weight per input point, summing to d.
  Eigen::VectorXd weights;
  int iterations = 0;
};

// Minimum-volume origin-centered ellipsoid containing the rows of `points`
// and their negatives. Stops once max_i x_i^T M^{-1} x_i <= d (1 + tol).
MveeResult mvee_symmetric(const Eigen::MatrixXd& points, double tol = 1e-6,
                          int max_iterations = 100000);

// Affine change of coordinates p' = forward * p + shift. Losses transform
// by inverse_transpose.
struct Preconditioner {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd inverse;
  Eigen::MatrixXd inverse_transpose;
  Eigen::VectorXd shift;
  ConvexSet source;
  ConvexSet target;

  Eigen::VectorXd to_working(const Eigen::VectorXd& p) const { return forward * p + shift; }
  Eigen::VectorXd to_original(const Eigen::VectorXd& q) const { return inverse * (q - shift); }
  Eigen::VectorXd loss_to_working(const Eigen::VectorXd& l) const { return inverse_transpose * l; }
  Eigen::VectorXd loss_to_original(const Eigen::VectorXd& l) const {
    return forward.transpose() * l;
  }
};

// Contact points (rows, unit vectors) and weights with
// sum_i c_i xi_i xi_i^T = I.
struct JohnDecomposition {
  Eigen::MatrixXd contacts;
  Eigen::VectorXd weights;
};

// Linear (affine for the simplex) map placing the set in John's position.
std::pair<Preconditioner, JohnDecomposition> john_precondition(const ConvexSet& set);

// Identity-preconditioner wrapper.
Preconditioner identity_preconditioner(const ConvexSet& set);

// ||sum c_i xi_i xi_i^T - I||_F and |sum c_i - d|.
std::pair<double, double> john_residuals(const JohnDecomposition& john);

struct Lopsided {
  ConvexSet set;
  Eigen::VectorXd axes;
  Eigen::MatrixXd m;
};

// Ellipsoid with k = floor(d/2) long axes of length sqrt(d) and an
// endomorphism M = D U D^{-1} with Frobenius norm of order d.
Lopsided lopsided_counterexample(int d);

}  // namespace swapreg

#endif  // SWAPREG_JOHN_HPP_
