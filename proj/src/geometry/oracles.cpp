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
#include <random>

#include "swapreg/errors.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/lp.hpp"

namespace swapreg {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_vector(const ConvexSet& set, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != set.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (expected " +
                          std::to_string(set.dim()) + ", got " + std::to_string(v.size()) + ")");
  }
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite input");
}

Eigen::VectorXd ball_lmo(const set_node::Ball& b, const Eigen::VectorXd& c) {
  const Eigen::Index d = b.dim;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  switch (b.norm) {
    case Norm::Linf:
      for (Eigen::Index i = 0; i < d; ++i) x(i) = c(i) >= 0.0 ? -b.radius : b.radius;
      break;
    case Norm::L1: {
      Eigen::Index k = 0;
      for (Eigen::Index i = 1; i < d; ++i) {
        if (std::abs(c(i)) > std::abs(c(k))) k = i;
      }
      x(k) = c(k) >= 0.0 ? -b.radius : b.radius;
      break;
    }
    case Norm::L2: {
      const double n = c.norm();
      if (n == 0.0) {
        x(0) = -b.radius;
      } else {
        x = -b.radius * c / n;
      }
      break;
    }
  }
  return x;
}

Eigen::VectorXd hpolytope_lmo(const set_node::HPolytope& h, const Eigen::VectorXd& c) {
  lp::LpProblem prob(c.size());
  prob.free_variables();
  prob.objective = c;
  prob.ineq = h.normals;
  prob.ineq_rhs = h.offsets;
  const auto sol = lp::solve_lp(prob);
  if (!sol.optimal()) throw SolverFailure("lmo: H-polytope LP not optimal");
  return sol.point;
}

Eigen::VectorXd lmo_impl(const ConvexSet& set, const Eigen::VectorXd& c);

Eigen::VectorXd argmax_impl(const ConvexSet& set, const Eigen::VectorXd& c) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) -> Eigen::VectorXd { return -ball_lmo(b, c); },
          [&](const set_node::Product& p) -> Eigen::VectorXd {
            Eigen::VectorXd x(set.dim());
            Eigen::Index off = 0;
            for (const auto& f : p.factors) {
              x.segment(off, f.dim()) = argmax_impl(f, c.segment(off, f.dim()));
              off += f.dim();
            }
            return x;
          },
          [&](const set_node::LinearImage& li) -> Eigen::VectorXd {
            return li.forward * argmax_impl(*li.inner, li.forward.transpose() * c) + li.shift;
          },
          [&](const auto&) -> Eigen::VectorXd { return lmo_impl(set, -c); },
      },
      set.node());
}

Eigen::VectorXd lmo_impl(const ConvexSet& set, const Eigen::VectorXd& c) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) -> Eigen::VectorXd { return ball_lmo(b, c); },
          [&](const set_node::Simplex& s) -> Eigen::VectorXd {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(s.dim);
            Eigen::Index k = -1;
            double best = 0.0;
            for (Eigen::Index i = 0; i < s.dim; ++i) {
              if (c(i) < best) {
                best = c(i);
                k = i;
              }
            }
            if (k >= 0) x(k) = 1.0;
            return x;
          },
          [&](const set_node::Product& p) -> Eigen::VectorXd {
            Eigen::VectorXd x(set.dim());
            Eigen::Index off = 0;
            for (const auto& f : p.factors) {
              x.segment(off, f.dim()) = lmo_impl(f, c.segment(off, f.dim()));
              off += f.dim();
            }
            return x;
          },
          [&](const set_node::VPolytope& v) -> Eigen::VectorXd {
            Eigen::Index k = 0;
            const Eigen::VectorXd vals = v.vertices * c;
            for (Eigen::Index i = 1; i < vals.size(); ++i) {
              if (vals(i) < vals(k)) k = i;
            }
            return v.vertices.row(k).transpose();
          },
          [&](const set_node::HPolytope& h) -> Eigen::VectorXd { return hpolytope_lmo(h, c); },
          [&](const set_node::LinearImage& li) -> Eigen::VectorXd {
            return li.forward * lmo_impl(*li.inner, li.forward.transpose() * c) + li.shift;
          },
      },
      set.node());
}

// min over lambda in the simplex of ||V^T lambda - p||_inf.
double vpolytope_distance(const set_node::VPolytope& v, const Eigen::VectorXd& p) {
  const Eigen::Index n = v.vertices.rows();
  const Eigen::Index d = v.vertices.cols();
  lp::LpProblem prob(n + 1);
  prob.objective(n) = 1.0;
  prob.ineq.resize(2 * d, n + 1);
  prob.ineq.topLeftCorner(d, n) = v.vertices.transpose();
  prob.ineq.bottomLeftCorner(d, n) = -v.vertices.transpose();
  prob.ineq.col(n).setConstant(-1.0);
  prob.ineq_rhs.resize(2 * d);
  prob.ineq_rhs.head(d) = p;
  prob.ineq_rhs.tail(d) = -p;
  Eigen::RowVectorXd ones = Eigen::RowVectorXd::Zero(n + 1);
  ones.head(n).setOnes();
  prob.add_eq(ones, 1.0);
  const auto sol = lp::solve_lp(prob);
  if (!sol.optimal()) throw SolverFailure("membership: V-polytope LP not optimal");
  return sol.point(n);
}

bool membership_impl(const ConvexSet& set, const Eigen::VectorXd& p, double tol) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) {
            double n = 0.0;
            switch (b.norm) {
              case Norm::L1:
                n = p.lpNorm<1>();
                break;
              case Norm::L2:
                n = p.norm();
                break;
              case Norm::Linf:
                n = p.lpNorm<Eigen::Infinity>();
                break;
            }
            return n <= b.radius + tol;
          },
          [&](const set_node::Simplex&) { return p.minCoeff() >= -tol && p.sum() <= 1.0 + tol; },
          [&](const set_node::Product& prod) {
            Eigen::Index off = 0;
            for (const auto& f : prod.factors) {
              if (!membership_impl(f, p.segment(off, f.dim()), tol)) return false;
              off += f.dim();
            }
            return true;
          },
          [&](const set_node::VPolytope& v) { return vpolytope_distance(v, p) <= tol; },
          [&](const set_node::HPolytope& h) {
            const Eigen::VectorXd slack = h.normals * p - h.offsets;
            const Eigen::VectorXd norms = h.normals.rowwise().norm();
            for (Eigen::Index i = 0; i < slack.size(); ++i) {
              if (slack(i) > tol * std::max(norms(i), 1e-300)) return false;
            }
            return true;
          },
          [&](const set_node::LinearImage& li) {
            return membership_impl(*li.inner, li.inverse * (p - li.shift), tol * li.inverse_norm);
          },
      },
      set.node());
}

double ball_gauge(const set_node::Ball& b, const Eigen::VectorXd& x) {
  switch (b.norm) {
    case Norm::L1:
      return x.lpNorm<1>() / b.radius;
    case Norm::L2:
      return x.norm() / b.radius;
    case Norm::Linf:
      return x.lpNorm<Eigen::Infinity>() / b.radius;
  }
  return 0.0;
}

double bisect_boundary(const ConvexSet& set, const Eigen::VectorXd& from,
                       const Eigen::VectorXd& dir) {
  double hi = 1.0;
  while (membership(set, from + hi * dir, 0.0)) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalFailure("boundary search: set appears unbounded");
  }
  double lo = 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (membership(set, from + mid * dir, 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Eigen::VectorXd dirichlet(Rng& rng, Eigen::Index n) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = e(rng);
  return w / w.sum();
}

// Chebyshev center of an H-polytope.
Eigen::VectorXd chebyshev_center(const set_node::HPolytope& h) {
  const Eigen::Index d = h.normals.cols();
  lp::LpProblem prob(d + 1);
  prob.free_variables();
  prob.lower(d) = 0.0;
  prob.objective(d) = -1.0;
  prob.ineq.resize(h.normals.rows(), d + 1);
  prob.ineq.leftCols(d) = h.normals;
  prob.ineq.col(d) = h.normals.rowwise().norm();
  prob.ineq_rhs = h.offsets;
  const auto sol = lp::solve_lp(prob);
  if (!sol.optimal()) throw SolverFailure("sample: Chebyshev LP not optimal");
  return sol.point.head(d);
}

}  // namespace

Eigen::VectorXd lmo(const ConvexSet& set, const Eigen::VectorXd& direction) {
  check_vector(set, direction, "lmo");
  return lmo_impl(set, direction);
}

Eigen::VectorXd argmax(const ConvexSet& set, const Eigen::VectorXd& direction) {
  check_vector(set, direction, "argmax");
  return argmax_impl(set, direction);
}

double support(const ConvexSet& set, const Eigen::VectorXd& direction) {
  return direction.dot(argmax(set, direction));
}

bool membership(const ConvexSet& set, const Eigen::VectorXd& p, double tol) {
  check_vector(set, p, "membership");
  if (!(tol >= 0.0)) throw InvalidArgument("membership: tolerance must be nonnegative");
  return membership_impl(set, p, tol);
}

double gauge(const ConvexSet& set, const Eigen::VectorXd& x) {
  check_vector(set, x, "gauge");
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) { return ball_gauge(b, x); },
          [&](const set_node::Simplex&) -> double {
            throw InvalidArgument("gauge: simplex does not contain the origin in its interior");
          },
          [&](const set_node::Product& p) {
            double g = 0.0;
            Eigen::Index off = 0;
            for (const auto& f : p.factors) {
              g = std::max(g, gauge(f, x.segment(off, f.dim())));
              off += f.dim();
            }
            return g;
          },
          [&](const set_node::VPolytope& v) {
            const Eigen::Index n = v.vertices.rows();
            lp::LpProblem prob(n);
            prob.objective.setOnes();
            prob.eq = v.vertices.transpose();
            prob.eq_rhs = x;
            const auto sol = lp::solve_lp(prob);
            if (!sol.optimal()) throw InvalidArgument("gauge: origin not interior to V-polytope");
            return sol.value;
          },
          [&](const set_node::HPolytope& h) {
            if (h.offsets.minCoeff() <= 0.0) {
              throw InvalidArgument("gauge: origin not interior to H-polytope");
            }
            return std::max(0.0, (h.normals * x).cwiseQuotient(h.offsets).maxCoeff());
          },
          [&](const set_node::LinearImage& li) {
            if (li.shift.isZero(0.0)) return gauge(*li.inner, li.inverse * x);
            if (x.isZero(0.0)) return 0.0;
            if (!contains_origin_in_interior(set)) {
              throw InvalidArgument("gauge: origin not interior to the set");
            }
            return 1.0 / bisect_boundary(set, Eigen::VectorXd::Zero(x.size()), x);
          },
      },
      set.node());
}

Eigen::VectorXd sample(const ConvexSet& set, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) -> Eigen::VectorXd {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            switch (b.norm) {
              case Norm::Linf:
                return uniform_box(rng, b.dim, -b.radius, b.radius);
              case Norm::L2:
                return b.radius * std::pow(u(rng), 1.0 / static_cast<double>(b.dim)) *
                       unit_direction(rng, b.dim);
              case Norm::L1: {
                Eigen::VectorXd w = dirichlet(rng, b.dim + 1).head(b.dim);
                for (Eigen::Index i = 0; i < b.dim; ++i) {
                  if (u(rng) < 0.5) w(i) = -w(i);
                }
                return b.radius * w;
              }
            }
            return Eigen::VectorXd::Zero(b.dim);
          },
          [&](const set_node::Simplex& s) -> Eigen::VectorXd {
            return dirichlet(rng, s.dim + 1).head(s.dim);
          },
          [&](const set_node::Product& p) -> Eigen::VectorXd {
            Eigen::VectorXd x(set.dim());
            Eigen::Index off = 0;
            for (const auto& f : p.factors) {
              x.segment(off, f.dim()) = sample(f, rng);
              off += f.dim();
            }
            return x;
          },
          [&](const set_node::VPolytope& v) -> Eigen::VectorXd {
            return v.vertices.transpose() * dirichlet(rng, v.vertices.rows());
          },
          [&](const set_node::HPolytope& h) -> Eigen::VectorXd {
            // Hit-and-run from the Chebyshev center.
            Eigen::VectorXd x = chebyshev_center(h);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const int steps = 10 + 2 * static_cast<int>(x.size());
            for (int s = 0; s < steps; ++s) {
              const Eigen::VectorXd dir = unit_direction(rng, x.size());
              const Eigen::VectorXd gd = h.normals * dir;
              const Eigen::VectorXd slack = h.offsets - h.normals * x;
              double lo = -lp::kInf;
              double hi = lp::kInf;
              for (Eigen::Index i = 0; i < gd.size(); ++i) {
                if (gd(i) > 1e-14) hi = std::min(hi, slack(i) / gd(i));
                if (gd(i) < -1e-14) lo = std::max(lo, slack(i) / gd(i));
              }
              lo = std::min(lo, 0.0);
              hi = std::max(hi, 0.0);
              x += (lo + (hi - lo) * u(rng)) * dir;
            }
            return x;
          },
          [&](const set_node::LinearImage& li) -> Eigen::VectorXd {
            return li.forward * sample(*li.inner, rng) + li.shift;
          },
      },
      set.node());
}

Eigen::VectorXd sample_boundary(const ConvexSet& set, Rng& rng) {
  const Eigen::VectorXd dir = unit_direction(rng, set.dim());
  if (contains_origin_in_interior(set)) return dir / gauge(set, dir);
  // Interior reference point: average of the extreme points along +-e_j.
  Eigen::VectorXd center = Eigen::VectorXd::Zero(set.dim());
  for (Eigen::Index j = 0; j < set.dim(); ++j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(set.dim(), j);
    center += lmo(set, e) + lmo(set, -e);
  }
  center /= static_cast<double>(2 * set.dim());
  return center + bisect_boundary(set, center, dir) * dir;
}

}  // namespace swapreg
