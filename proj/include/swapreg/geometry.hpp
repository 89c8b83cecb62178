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

// Convex strategy and loss sets with linear-optimization and membership
// oracles, polar duality, and conversions between representations.

#ifndef SWAPREG_GEOMETRY_HPP_
#define SWAPREG_GEOMETRY_HPP_

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "swapreg/random.hpp"

namespace swapreg {

enum class Norm { L1, L2, Linf };

class ConvexSet;

namespace set_node {

// {x : ||x||_norm <= radius}
struct Ball {
  Norm norm;
  Eigen::Index dim;
  double radius;
};

// Corner simplex {x : x >= 0, sum(x) <= 1}.
struct Simplex {
  Eigen::Index dim;
};

struct Product {
  std::vector<ConvexSet> factors;
};

// Convex hull of the rows of `vertices`.
struct VPolytope {
  Eigen::MatrixXd vertices;
};

// {x : normals * x <= offsets}
struct HPolytope {
  Eigen::MatrixXd normals;
  Eigen::VectorXd offsets;
};

// {forward * x + shift : x in inner}
struct LinearImage {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd inverse;
  Eigen::VectorXd shift;
  std::shared_ptr<const ConvexSet> inner;
  // Spectral norm of `inverse`; scales membership tolerances.
  double inverse_norm = 1.0;
};

}  // namespace set_node

// Immutable, cheaply copyable handle to a compact convex set with nonempty
// interior.
class ConvexSet {
 public:
  using Variant = std::variant<set_node::Ball, set_node::Simplex, set_node::Product,
                               set_node::VPolytope, set_node::HPolytope, set_node::LinearImage>;

  static ConvexSet ball(Norm norm, Eigen::Index dim, double radius = 1.0);
  static ConvexSet simplex(Eigen::Index dim);
  static ConvexSet product(std::vector<ConvexSet> factors);
  static ConvexSet vpolytope(Eigen::MatrixXd vertices);
  static ConvexSet hpolytope(Eigen::MatrixXd normals, Eigen::VectorXd offsets);
  static ConvexSet linear_image(Eigen::MatrixXd forward, const ConvexSet& inner,
                                Eigen::VectorXd shift = Eigen::VectorXd());
  // Axis-aligned ellipsoid {x : sum (x_i / axes_i)^2 <= 1}.
  static ConvexSet ellipsoid(const Eigen::VectorXd& axes);
  // Uniform rescaling of a set about the origin.
  static ConvexSet scaled(const ConvexSet& inner, double factor);

  Eigen::Index dim() const { return dim_; }
  const Variant& node() const { return *node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(node_.get());
  }
  std::string describe() const;

 private:
  ConvexSet(Variant node, Eigen::Index dim);
  std::shared_ptr<const Variant> node_;
  Eigen::Index dim_ = 0;
};

// H-description {x : normals * x <= offsets}.
struct Facets {
  Eigen::MatrixXd normals;
  Eigen::VectorXd offsets;
};

// Extended formulation {x : exists z, ineq_x x + ineq_z z <= ineq_rhs,
// eq_x x + eq_z z = eq_rhs}, with z free. Polynomial size for every
// polyhedral variant.
struct Formulation {
  Eigen::Index dim = 0;
  Eigen::Index num_aux = 0;
  Eigen::MatrixXd ineq_x;
  Eigen::MatrixXd ineq_z;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_x;
  Eigen::MatrixXd eq_z;
  Eigen::VectorXd eq_rhs;
};

inline constexpr double kMembershipTol = 1e-9;

// argmin over the set of <direction, p>. Deterministic lowest-index ties.
Eigen::VectorXd lmo(const ConvexSet& set, const Eigen::VectorXd& direction);
// argmax over the set of <direction, p>.
Eigen::VectorXd argmax(const ConvexSet& set, const Eigen::VectorXd& direction);
// max over the set of <direction, p>.
double support(const ConvexSet& set, const Eigen::VectorXd& direction);

bool membership(const ConvexSet& set, const Eigen::VectorXd& p, double tol = kMembershipTol);

// Polar {l : <p, l> <= 1 for all p in set}. Products map to the product of
// factor polars, each shrunk by the number of factors.
ConvexSet polar(const ConvexSet& set);

// Vertex list (rows). Throws VertexBlowup beyond `cap` and NonPolyhedral for
// Euclidean balls.
Eigen::MatrixXd vertices(const ConvexSet& set, Eigen::Index cap = 10000);
// Facet description with unit-norm normals.
Facets facets(const ConvexSet& set, Eigen::Index cap = 10000);
Formulation formulation(const ConvexSet& set);

bool is_polyhedral(const ConvexSet& set);
bool is_symmetric(const ConvexSet& set);
bool contains_origin_in_interior(const ConvexSet& set);

// max over the set of ||p||_2 (exact for balls, polytopes and images of balls
// under diagonal maps; an upper bound otherwise).
double max_norm(const ConvexSet& set);

// Minkowski gauge inf{s > 0 : x in s * set}; requires 0 in the interior.
double gauge(const ConvexSet& set, const Eigen::VectorXd& x);

// A random member of the set (not necessarily uniform).
Eigen::VectorXd sample(const ConvexSet& set, Rng& rng);
// Radial projection of a random direction onto the boundary.
Eigen::VectorXd sample_boundary(const ConvexSet& set, Rng& rng);

}  // namespace swapreg

#endif  // SWAPREG_GEOMETRY_HPP_
