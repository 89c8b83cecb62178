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

#include "swapreg/john.hpp"

#include <cmath>
#include <vector>

#include "swapreg/errors.hpp"

namespace swapreg {

namespace {

struct Kappa {
  Eigen::MatrixXd minv;
  Eigen::VectorXd kappa;
};

Kappa recompute(const Eigen::MatrixXd& x, const Eigen::VectorXd& u) {
  const Eigen::MatrixXd m = x.transpose() * u.asDiagonal() * x;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DegenerateSpan("mvee: weighted scatter became singular");
  Kappa k;
  k.minv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  k.kappa = (x * k.minv).cwiseProduct(x).rowwise().sum();
  return k;
}

}  // namespace

MveeResult mvee_symmetric(const Eigen::MatrixXd& points, double tol, int max_iterations) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (!(tol > 0.0)) throw InvalidArgument("mvee: tolerance must be positive");
  if (!points.allFinite()) throw InvalidArgument("mvee: non-finite point");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(points);
  lu.setThreshold(1e-10);
  if (d < 1 || n < d || lu.rank() < d) throw DegenerateSpan("mvee: points do not span R^d");

  const double dd = static_cast<double>(d);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Kappa k = recompute(points, u);
  int it = 0;
  for (; it < max_iterations; ++it) {
    Eigen::Index up = 0;
    k.kappa.maxCoeff(&up);
    Eigen::Index down = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (u(i) > 0.0 && (down < 0 || k.kappa(i) < k.kappa(down))) down = i;
    }
    const double up_gap = k.kappa(up) / dd - 1.0;
    const double down_gap = 1.0 - k.kappa(down) / dd;
    if (up_gap <= tol && down_gap <= tol) break;

    // Move weight along e_i: u <- (1 - tau) u + tau e_i.
    Eigen::Index i = up;
    double tau = 0.0;
    if (up_gap >= down_gap) {
      tau = up_gap / (k.kappa(up) - 1.0);
    } else {
      i = down;
      const double floor = -u(i) / (1.0 - u(i));
      tau = k.kappa(i) > 1.0 ? std::max(floor, -down_gap / (k.kappa(i) - 1.0)) : floor;
    }
    u *= (1.0 - tau);
    u(i) += tau;
    if (u(i) < 1e-300) u(i) = 0.0;

    if (it % 64 == 63) {
      k = recompute(points, u);
    } else {
      const Eigen::VectorXd xi = points.row(i).transpose();
      const Eigen::VectorXd w = k.minv * xi;
      const double denom = (1.0 - tau) + tau * k.kappa(i);
      const Eigen::VectorXd proj = points * w;
      k.minv = (k.minv - (tau / denom) * w * w.transpose()) / (1.0 - tau);
      k.kappa = (k.kappa - (tau / denom) * proj.cwiseAbs2()) / (1.0 - tau);
    }
  }
  if (it >= max_iterations) {
    throw NoConvergence("mvee: iteration cap reached (" + std::to_string(max_iterations) + ")");
  }
  k = recompute(points, u);
  MveeResult out;
  out.h = k.minv / k.kappa.maxCoeff();
  out.weights = dd * u;
  out.iterations = it;
  return out;
}

Preconditioner identity_preconditioner(const ConvexSet& set) {
  const Eigen::Index d = set.dim();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  return Preconditioner{eye, eye, eye, Eigen::VectorXd::Zero(d), set, set};
}

std::pair<double, double> john_residuals(const JohnDecomposition& john) {
  const Eigen::Index d = john.contacts.cols();
  const Eigen::MatrixXd s =
      john.contacts.transpose() * john.weights.asDiagonal() * john.contacts;
  return {(s - Eigen::MatrixXd::Identity(d, d)).norm(),
          std::abs(john.weights.sum() - static_cast<double>(d))};
}

namespace {

Preconditioner make(const ConvexSet& source, Eigen::MatrixXd forward, Eigen::VectorXd shift) {
  Preconditioner pc{forward,
                    Eigen::MatrixXd(),
                    Eigen::MatrixXd(),
                    shift,
                    source,
                    ConvexSet::linear_image(forward, source, shift)};
  pc.inverse = forward.fullPivLu().inverse();
  pc.inverse_transpose = pc.inverse.transpose();
  return pc;
}

JohnDecomposition axis_contacts(Eigen::Index d) {
  JohnDecomposition j{Eigen::MatrixXd(2 * d, d), Eigen::VectorXd::Constant(2 * d, 0.5)};
  j.contacts.topRows(d).setIdentity();
  j.contacts.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  return j;
}

std::pair<Preconditioner, JohnDecomposition> numeric_john(const ConvexSet& set) {
  if (!is_symmetric(set)) {
    throw UnsupportedSet("john_precondition: numeric route needs a centrally symmetric set");
  }
  if (!is_polyhedral(set)) {
    throw UnsupportedSet("john_precondition: numeric route needs a polyhedral set");
  }
  const Facets f = facets(set);
  if (f.offsets.minCoeff() <= 0.0) {
    throw UnsupportedSet("john_precondition: origin not interior");
  }
  // Polar body vertices g_i / h_i; the John ellipsoid of the set is the
  // polar of their minimum-volume enclosing ellipsoid.
  const Eigen::MatrixXd g = f.offsets.cwiseInverse().asDiagonal() * f.normals;
  const MveeResult mv = mvee_symmetric(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mv.h);
  const Eigen::MatrixXd h_half = es.operatorSqrt();
  const Eigen::MatrixXd forward = es.operatorInverseSqrt();

  // Rescale weights so that the identity holds exactly with H normalized to
  // contain every g_i.
  const Eigen::MatrixXd xi_all = g * h_half;
  const Eigen::VectorXd kappa = xi_all.rowwise().squaredNorm();
  const Eigen::MatrixXd m = g.transpose() * mv.weights.asDiagonal() * g;
  const double scale = static_cast<double>(set.dim()) / (m * mv.h).trace();

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (mv.weights(i) * scale > 1e-10) keep.push_back(i);
  }
  JohnDecomposition john{Eigen::MatrixXd(static_cast<Eigen::Index>(keep.size()), set.dim()),
                         Eigen::VectorXd(static_cast<Eigen::Index>(keep.size()))};
  for (size_t r = 0; r < keep.size(); ++r) {
    const auto i = keep[r];
    const auto rr = static_cast<Eigen::Index>(r);
    john.contacts.row(rr) = xi_all.row(i) / std::sqrt(kappa(i));
    john.weights(rr) = mv.weights(i) * scale * kappa(i);
  }
  return {make(set, forward, Eigen::VectorXd::Zero(set.dim())), std::move(john)};
}

std::pair<Preconditioner, JohnDecomposition> simplex_john(const ConvexSet& set, Eigen::Index d) {
  // Regular simplex with inradius 1 centered at the origin: vertices w_j of
  // norm d with pairwise inner products -d.
  const Eigen::Index n = d + 1;
  Eigen::MatrixXd centered = Eigen::MatrixXd::Identity(n, n);
  centered.array() -= 1.0 / static_cast<double>(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(centered.leftCols(d));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
  const double scale = std::sqrt(static_cast<double>(d) * static_cast<double>(n));
  const Eigen::MatrixXd w = scale * q;  // rows w_0..w_d
  Eigen::MatrixXd forward(d, d);
  for (Eigen::Index i = 0; i < d; ++i) forward.col(i) = (w.row(i + 1) - w.row(0)).transpose();
  const Eigen::VectorXd shift = w.row(0).transpose();

  JohnDecomposition john{-w / static_cast<double>(d),
                         Eigen::VectorXd::Constant(n, static_cast<double>(d) / static_cast<double>(n))};
  return {make(set, forward, shift), std::move(john)};
}

}  // namespace

std::pair<Preconditioner, JohnDecomposition> john_precondition(const ConvexSet& set) {
  const Eigen::Index d = set.dim();
  if (const auto* b = set.as<set_node::Ball>()) {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    if (b->norm != Norm::L1) return {make(set, eye / b->radius, Eigen::VectorXd::Zero(d)), axis_contacts(d)};
    if (d > 20) throw UnsupportedSet("john_precondition: cross-polytope dimension too large");
    const Eigen::Index n = Eigen::Index{1} << d;
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    JohnDecomposition john{Eigen::MatrixXd(n, d),
                           Eigen::VectorXd::Constant(n, static_cast<double>(d) / static_cast<double>(n))};
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index i = 0; i < d; ++i) john.contacts(k, i) = ((k >> i) & 1) ? inv : -inv;
    }
    return {make(set, std::sqrt(static_cast<double>(d)) / b->radius * eye, Eigen::VectorXd::Zero(d)),
            std::move(john)};
  }
  if (set.as<set_node::Simplex>()) return simplex_john(set, d);
  if (const auto* li = set.as<set_node::LinearImage>()) {
    if (!li->shift.isZero(0.0)) {
      throw UnsupportedSet("john_precondition: shifted images are not supported");
    }
    auto [inner_pc, john] = john_precondition(*li->inner);
    return {make(set, inner_pc.forward * li->inverse, inner_pc.shift), std::move(john)};
  }
  return numeric_john(set);
}

Lopsided lopsided_counterexample(int d) {
  if (d < 2) throw InvalidArgument("lopsided_counterexample: d must be at least 2");
  const Eigen::Index k = d / 2;
  Eigen::VectorXd axes = Eigen::VectorXd::Ones(d);
  axes.head(k).setConstant(std::sqrt(static_cast<double>(d)));
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    u(i, i) = 0.0;
    u(i + k, i + k) = 0.0;
    u(i, i + k) = 1.0;
    u(i + k, i) = 1.0;
  }
  const Eigen::MatrixXd m = axes.asDiagonal() * u * axes.cwiseInverse().asDiagonal();
  return Lopsided{ConvexSet::ellipsoid(axes), axes, m};
}

}  // namespace swapreg
