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
#include <sstream>
#include <string>
#include <utility>

#include "swapreg/errors.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/lp.hpp"

namespace swapreg {

ConvexSet::ConvexSet(Variant node, Eigen::Index dim)
    : node_(std::make_shared<const Variant>(std::move(node))), dim_(dim) {}

ConvexSet ConvexSet::ball(Norm norm, Eigen::Index dim, double radius) {
  if (dim < 1) throw InvalidArgument("ball: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("ball: radius must be positive and finite");
  }
  return ConvexSet(set_node::Ball{norm, dim, radius}, dim);
}

ConvexSet ConvexSet::simplex(Eigen::Index dim) {
  if (dim < 1) throw InvalidArgument("simplex: dimension must be positive");
  return ConvexSet(set_node::Simplex{dim}, dim);
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> factors) {
  if (factors.empty()) throw InvalidArgument("product: needs at least one factor");
  Eigen::Index dim = 0;
  for (const auto& f : factors) dim += f.dim();
  return ConvexSet(set_node::Product{std::move(factors)}, dim);
}

ConvexSet ConvexSet::vpolytope(Eigen::MatrixXd vertices) {
  const Eigen::Index d = vertices.cols();
  if (d < 1 || vertices.rows() < d + 1) {
    throw InvalidArgument("vpolytope: needs at least d+1 vertices");
  }
  if (!vertices.allFinite()) throw InvalidArgument("vpolytope: non-finite vertex");
  const Eigen::MatrixXd diffs = vertices.bottomRows(vertices.rows() - 1).rowwise() -
                                vertices.row(0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) throw InvalidArgument("vpolytope: vertices are not full dimensional");
  return ConvexSet(set_node::VPolytope{std::move(vertices)}, d);
}

ConvexSet ConvexSet::hpolytope(Eigen::MatrixXd normals, Eigen::VectorXd offsets) {
  const Eigen::Index d = normals.cols();
  if (d < 1 || normals.rows() != offsets.size() || normals.rows() < d + 1) {
    throw InvalidArgument("hpolytope: inconsistent normals/offsets");
  }
  if (!normals.allFinite() || !offsets.allFinite()) {
    throw InvalidArgument("hpolytope: non-finite data");
  }
  // Chebyshev ball radius must be positive (full dimensional) and every
  // coordinate bounded.
  lp::LpProblem cheb(d + 1);
  cheb.free_variables();
  cheb.lower(d) = 0.0;
  cheb.upper(d) = 1e6;
  cheb.objective(d) = -1.0;
  cheb.ineq.resize(normals.rows(), d + 1);
  cheb.ineq.leftCols(d) = normals;
  cheb.ineq.col(d) = normals.rowwise().norm();
  cheb.ineq_rhs = offsets;
  const auto sol = lp::solve_lp(cheb);
  if (!sol.optimal() || sol.point(d) <= 1e-9) {
    throw InvalidArgument("hpolytope: empty or not full dimensional");
  }
  if (sol.point(d) >= 1e6 - 1.0) throw InvalidArgument("hpolytope: unbounded");
  lp::LpProblem box(d);
  box.free_variables();
  box.ineq = normals;
  box.ineq_rhs = offsets;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (double sign : {1.0, -1.0}) {
      box.objective.setZero();
      box.objective(j) = sign;
      if (lp::solve_lp(box).status != lp::Status::Optimal) {
        throw InvalidArgument("hpolytope: unbounded");
      }
    }
  }
  return ConvexSet(set_node::HPolytope{std::move(normals), std::move(offsets)}, d);
}

ConvexSet ConvexSet::linear_image(Eigen::MatrixXd forward, const ConvexSet& inner,
                                  Eigen::VectorXd shift) {
  const Eigen::Index d = inner.dim();
  if (forward.rows() != d || forward.cols() != d) {
    throw InvalidArgument("linear_image: matrix must be square of the inner dimension");
  }
  if (!forward.allFinite()) throw InvalidArgument("linear_image: non-finite matrix");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(forward);
  if (!lu.isInvertible()) throw InvalidArgument("linear_image: matrix is singular");
  if (shift.size() == 0) shift = Eigen::VectorXd::Zero(d);
  if (shift.size() != d) throw InvalidArgument("linear_image: shift has wrong size");
  set_node::LinearImage node;
  node.inverse = lu.inverse();
  node.forward = std::move(forward);
  node.shift = std::move(shift);
  node.inner = std::make_shared<const ConvexSet>(inner);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(node.inverse);
  node.inverse_norm = svd.singularValues()(0);
  return ConvexSet(std::move(node), d);
}

ConvexSet ConvexSet::ellipsoid(const Eigen::VectorXd& axes) {
  if (axes.size() < 1 || !(axes.array() > 0.0).all()) {
    throw InvalidArgument("ellipsoid: axes must be positive");
  }
  return linear_image(axes.asDiagonal().toDenseMatrix(), ball(Norm::L2, axes.size()));
}

ConvexSet ConvexSet::scaled(const ConvexSet& inner, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("scaled: factor must be positive");
  }
  if (const auto* b = inner.as<set_node::Ball>()) return ball(b->norm, b->dim, b->radius * factor);
  const Eigen::Index d = inner.dim();
  return linear_image(factor * Eigen::MatrixXd::Identity(d, d), inner);
}

namespace {

const char* norm_name(Norm n) {
  switch (n) {
    case Norm::L1:
      return "1";
    case Norm::L2:
      return "2";
    case Norm::Linf:
      return "inf";
  }
  return "?";
}

}  // namespace

std::string ConvexSet::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, set_node::Ball>) {
          os << "B" << norm_name(n.norm) << "(d=" << n.dim << ",r=" << n.radius << ")";
        } else if constexpr (std::is_same_v<T, set_node::Simplex>) {
          os << "Simplex(d=" << n.dim << ")";
        } else if constexpr (std::is_same_v<T, set_node::Product>) {
          os << "Product(";
          for (size_t i = 0; i < n.factors.size(); ++i) {
            os << (i ? "," : "") << n.factors[i].describe();
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, set_node::VPolytope>) {
          os << "VPolytope(d=" << dim_ << ",n=" << n.vertices.rows() << ")";
        } else if constexpr (std::is_same_v<T, set_node::HPolytope>) {
          os << "HPolytope(d=" << dim_ << ",m=" << n.normals.rows() << ")";
        } else {
          os << "LinearImage(" << n.inner->describe() << ")";
        }
      },
      *node_);
  return os.str();
}

}  // namespace swapreg
