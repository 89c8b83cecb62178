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
#include <functional>
#include <vector>

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

// Number of k-subsets of n, saturating at `limit`.
double choose(Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (Eigen::Index i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

void for_each_subset(Eigen::Index n, Eigen::Index k,
                     const std::function<void(const std::vector<Eigen::Index>&)>& f) {
  if (k > n) return;
  std::vector<Eigen::Index> idx(static_cast<size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    f(idx);
    Eigen::Index i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) {
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

constexpr double kEnumerationLimit = 2e5;

void append_unique_row(std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& r,
                       double tol = 1e-9) {
  for (const auto& q : rows) {
    if ((q - r).cwiseAbs().maxCoeff() <= tol * std::max(1.0, r.cwiseAbs().maxCoeff())) return;
  }
  rows.push_back(r);
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& rows, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

Facets normalize(Facets f) {
  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index i = 0; i < f.normals.rows(); ++i) {
    const double n = f.normals.row(i).norm();
    if (n <= 1e-14) {
      if (f.offsets(i) < -1e-12) throw InvalidArgument("facets: infeasible zero row");
      continue;
    }
    Eigen::VectorXd r(f.normals.cols() + 1);
    r.head(f.normals.cols()) = f.normals.row(i).transpose() / n;
    r(f.normals.cols()) = f.offsets(i) / n;
    append_unique_row(rows, r);
  }
  const Eigen::MatrixXd m = stack_rows(rows, f.normals.cols() + 1);
  return Facets{m.leftCols(f.normals.cols()), m.col(f.normals.cols())};
}

Eigen::MatrixXd enumerate_hpolytope_vertices(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                                             Eigen::Index cap) {
  const Eigen::Index d = g.cols();
  if (choose(g.rows(), d) > kEnumerationLimit) {
    throw VertexBlowup("vertices: H-polytope too large for brute-force enumeration");
  }
  std::vector<Eigen::VectorXd> found;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for_each_subset(g.rows(), d, [&](const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      a.row(i) = g.row(rows[static_cast<size_t>(i)]);
      b(i) = h(rows[static_cast<size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd x = lu.solve(b);
    if ((g * x - h).maxCoeff() > 1e-9 * scale) return;
    append_unique_row(found, x);
    if (static_cast<Eigen::Index>(found.size()) > cap) {
      throw VertexBlowup("vertices: vertex count exceeds cap");
    }
  });
  return stack_rows(found, d);
}

Facets enumerate_vpolytope_facets(const Eigen::MatrixXd& v, Eigen::Index cap) {
  const Eigen::Index d = v.cols();
  const Eigen::Index n = v.rows();
  if (choose(n, d) > kEnumerationLimit) {
    throw VertexBlowup("facets: V-polytope too large for brute-force enumeration");
  }
  std::vector<Eigen::VectorXd> rows;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for_each_subset(n, d, [&](const std::vector<Eigen::Index>& idx) {
    // Hyperplane through the chosen points: normal spans the null space of
    // the difference vectors.
    Eigen::MatrixXd diffs(d - 1, d);
    for (Eigen::Index i = 1; i < d; ++i) {
      diffs.row(i - 1) = v.row(idx[static_cast<size_t>(i)]) - v.row(idx[0]);
    }
    Eigen::VectorXd normal;
    if (d == 1) {
      normal = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
      lu.setThreshold(1e-10);
      if (lu.rank() < d - 1) return;
      normal = lu.kernel().col(0);
    }
    normal.normalize();
    const double off = normal.dot(v.row(idx[0]).transpose());
    const Eigen::VectorXd vals = v * normal;
    const double tol = 1e-9 * scale;
    if ((vals.array() <= off + tol).all()) {
      Eigen::VectorXd r(d + 1);
      r << normal, off;
      append_unique_row(rows, r);
    }
    if ((vals.array() >= off - tol).all()) {
      Eigen::VectorXd r(d + 1);
      r << -normal, -off;
      append_unique_row(rows, r);
    }
    if (static_cast<Eigen::Index>(rows.size()) > cap) {
      throw VertexBlowup("facets: facet count exceeds cap");
    }
  });
  const Eigen::MatrixXd m = stack_rows(rows, d + 1);
  return Facets{m.leftCols(d), m.col(d)};
}

double pow2(Eigen::Index d) { return std::ldexp(1.0, static_cast<int>(d)); }

}  // namespace

bool is_polyhedral(const ConvexSet& set) {
  return std::visit(Overloaded{
                        [](const set_node::Ball& b) { return b.norm != Norm::L2; },
                        [](const set_node::Product& p) {
                          return std::all_of(p.factors.begin(), p.factors.end(),
                                             [](const ConvexSet& f) { return is_polyhedral(f); });
                        },
                        [](const set_node::LinearImage& li) { return is_polyhedral(*li.inner); },
                        [](const auto&) { return true; },
                    },
                    set.node());
}

Eigen::MatrixXd vertices(const ConvexSet& set, Eigen::Index cap) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) -> Eigen::MatrixXd {
            const Eigen::Index d = b.dim;
            switch (b.norm) {
              case Norm::L2:
                throw NonPolyhedral("vertices: Euclidean ball has no vertex list");
              case Norm::L1: {
                Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * d, d);
                for (Eigen::Index i = 0; i < d; ++i) {
                  v(2 * i, i) = -b.radius;
                  v(2 * i + 1, i) = b.radius;
                }
                return v;
              }
              case Norm::Linf: {
                if (d > 30 || pow2(d) > static_cast<double>(cap)) {
                  throw VertexBlowup("vertices: cube has too many vertices");
                }
                const Eigen::Index n = Eigen::Index{1} << d;
                Eigen::MatrixXd v(n, d);
                for (Eigen::Index k = 0; k < n; ++k) {
                  for (Eigen::Index i = 0; i < d; ++i) {
                    v(k, i) = ((k >> i) & 1) ? b.radius : -b.radius;
                  }
                }
                return v;
              }
            }
            return {};
          },
          [&](const set_node::Simplex& s) -> Eigen::MatrixXd {
            Eigen::MatrixXd v = Eigen::MatrixXd::Zero(s.dim + 1, s.dim);
            v.bottomRows(s.dim).setIdentity();
            return v;
          },
          [&](const set_node::Product& p) -> Eigen::MatrixXd {
            std::vector<Eigen::MatrixXd> parts;
            double count = 1.0;
            for (const auto& f : p.factors) {
              parts.push_back(vertices(f, cap));
              count *= static_cast<double>(parts.back().rows());
            }
            if (count > static_cast<double>(cap)) {
              throw VertexBlowup("vertices: product has too many vertices");
            }
            Eigen::MatrixXd out(static_cast<Eigen::Index>(count), set.dim());
            std::vector<Eigen::Index> pick(parts.size(), 0);
            for (Eigen::Index r = 0; r < out.rows(); ++r) {
              Eigen::Index off = 0;
              for (size_t k = 0; k < parts.size(); ++k) {
                out.row(r).segment(off, parts[k].cols()) = parts[k].row(pick[k]);
                off += parts[k].cols();
              }
              for (size_t k = 0; k < parts.size(); ++k) {
                if (++pick[k] < parts[k].rows()) break;
                pick[k] = 0;
              }
            }
            return out;
          },
          [&](const set_node::VPolytope& v) -> Eigen::MatrixXd {
            if (v.vertices.rows() > cap) throw VertexBlowup("vertices: vertex count exceeds cap");
            return v.vertices;
          },
          [&](const set_node::HPolytope& h) -> Eigen::MatrixXd {
            return enumerate_hpolytope_vertices(h.normals, h.offsets, cap);
          },
          [&](const set_node::LinearImage& li) -> Eigen::MatrixXd {
            Eigen::MatrixXd v = vertices(*li.inner, cap) * li.forward.transpose();
            v.rowwise() += li.shift.transpose();
            return v;
          },
      },
      set.node());
}

Facets facets(const ConvexSet& set, Eigen::Index cap) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) -> Facets {
            const Eigen::Index d = b.dim;
            switch (b.norm) {
              case Norm::L2:
                throw NonPolyhedral("facets: Euclidean ball has no facet list");
              case Norm::Linf: {
                Facets f{Eigen::MatrixXd(2 * d, d), Eigen::VectorXd::Constant(2 * d, b.radius)};
                f.normals.topRows(d).setIdentity();
                f.normals.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
                return f;
              }
              case Norm::L1: {
                if (d > 30 || pow2(d) > static_cast<double>(cap)) {
                  throw VertexBlowup("facets: cross-polytope has too many facets");
                }
                const Eigen::Index n = Eigen::Index{1} << d;
                const double inv = 1.0 / std::sqrt(static_cast<double>(d));
                Facets f{Eigen::MatrixXd(n, d), Eigen::VectorXd::Constant(n, b.radius * inv)};
                for (Eigen::Index k = 0; k < n; ++k) {
                  for (Eigen::Index i = 0; i < d; ++i) f.normals(k, i) = ((k >> i) & 1) ? inv : -inv;
                }
                return f;
              }
            }
            return {};
          },
          [&](const set_node::Simplex& s) -> Facets {
            const Eigen::Index d = s.dim;
            Facets f{Eigen::MatrixXd::Zero(d + 1, d), Eigen::VectorXd::Zero(d + 1)};
            f.normals.topRows(d) = -Eigen::MatrixXd::Identity(d, d);
            const double inv = 1.0 / std::sqrt(static_cast<double>(d));
            f.normals.row(d).setConstant(inv);
            f.offsets(d) = inv;
            return f;
          },
          [&](const set_node::Product& p) -> Facets {
            std::vector<Facets> parts;
            Eigen::Index rows = 0;
            for (const auto& f : p.factors) {
              parts.push_back(facets(f, cap));
              rows += parts.back().normals.rows();
            }
            Facets out{Eigen::MatrixXd::Zero(rows, set.dim()), Eigen::VectorXd(rows)};
            Eigen::Index r = 0;
            Eigen::Index off = 0;
            for (const auto& part : parts) {
              out.normals.block(r, off, part.normals.rows(), part.normals.cols()) = part.normals;
              out.offsets.segment(r, part.offsets.size()) = part.offsets;
              r += part.normals.rows();
              off += part.normals.cols();
            }
            return out;
          },
          [&](const set_node::VPolytope& v) -> Facets {
            return enumerate_vpolytope_facets(v.vertices, cap);
          },
          [&](const set_node::HPolytope& h) -> Facets {
            return normalize(Facets{h.normals, h.offsets});
          },
          [&](const set_node::LinearImage& li) -> Facets {
            const Facets inner = facets(*li.inner, cap);
            Facets f{inner.normals * li.inverse, inner.offsets};
            f.offsets += f.normals * li.shift;
            return normalize(std::move(f));
          },
      },
      set.node());
}

Formulation formulation(const ConvexSet& set) {
  const Eigen::Index d = set.dim();
  Formulation out;
  out.dim = d;
  std::visit(
      Overloaded{
          [&](const set_node::Ball& b) {
            switch (b.norm) {
              case Norm::L2:
                throw NonPolyhedral("formulation: Euclidean ball is not polyhedral");
              case Norm::Linf:
                out.ineq_x.resize(2 * d, d);
                out.ineq_x.topRows(d).setIdentity();
                out.ineq_x.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
                out.ineq_z.resize(2 * d, 0);
                out.ineq_rhs = Eigen::VectorXd::Constant(2 * d, b.radius);
                break;
              case Norm::L1:
                // x <= z, -x <= z, sum z <= r.
                out.num_aux = d;
                out.ineq_x = Eigen::MatrixXd::Zero(2 * d + 1, d);
                out.ineq_z = Eigen::MatrixXd::Zero(2 * d + 1, d);
                out.ineq_x.topRows(d).setIdentity();
                out.ineq_x.middleRows(d, d) = -Eigen::MatrixXd::Identity(d, d);
                out.ineq_z.topRows(d) = -Eigen::MatrixXd::Identity(d, d);
                out.ineq_z.middleRows(d, d) = -Eigen::MatrixXd::Identity(d, d);
                out.ineq_z.row(2 * d).setOnes();
                out.ineq_rhs = Eigen::VectorXd::Zero(2 * d + 1);
                out.ineq_rhs(2 * d) = b.radius;
                break;
            }
          },
          [&](const set_node::Simplex&) {
            out.ineq_x.resize(d + 1, d);
            out.ineq_x.topRows(d) = -Eigen::MatrixXd::Identity(d, d);
            out.ineq_x.row(d).setOnes();
            out.ineq_z.resize(d + 1, 0);
            out.ineq_rhs = Eigen::VectorXd::Zero(d + 1);
            out.ineq_rhs(d) = 1.0;
          },
          [&](const set_node::Product& p) {
            std::vector<Formulation> parts;
            Eigen::Index ni = 0;
            Eigen::Index ne = 0;
            Eigen::Index nz = 0;
            for (const auto& f : p.factors) {
              parts.push_back(formulation(f));
              ni += parts.back().ineq_x.rows();
              ne += parts.back().eq_x.rows();
              nz += parts.back().num_aux;
            }
            out.num_aux = nz;
            out.ineq_x = Eigen::MatrixXd::Zero(ni, d);
            out.ineq_z = Eigen::MatrixXd::Zero(ni, nz);
            out.ineq_rhs = Eigen::VectorXd(ni);
            out.eq_x = Eigen::MatrixXd::Zero(ne, d);
            out.eq_z = Eigen::MatrixXd::Zero(ne, nz);
            out.eq_rhs = Eigen::VectorXd(ne);
            Eigen::Index ri = 0, re = 0, cx = 0, cz = 0;
            for (const auto& f : parts) {
              const Eigen::Index fi = f.ineq_x.rows();
              const Eigen::Index fe = f.eq_x.rows();
              out.ineq_x.block(ri, cx, fi, f.dim) = f.ineq_x;
              if (f.num_aux > 0 && fi > 0) out.ineq_z.block(ri, cz, fi, f.num_aux) = f.ineq_z;
              out.ineq_rhs.segment(ri, fi) = f.ineq_rhs;
              if (fe > 0) {
                out.eq_x.block(re, cx, fe, f.dim) = f.eq_x;
                if (f.num_aux > 0) out.eq_z.block(re, cz, fe, f.num_aux) = f.eq_z;
                out.eq_rhs.segment(re, fe) = f.eq_rhs;
              }
              ri += fi;
              re += fe;
              cx += f.dim;
              cz += f.num_aux;
            }
          },
          [&](const set_node::VPolytope& v) {
            // x = V^T lambda, sum lambda = 1, lambda >= 0.
            const Eigen::Index n = v.vertices.rows();
            out.num_aux = n;
            out.ineq_x = Eigen::MatrixXd::Zero(n, d);
            out.ineq_z = -Eigen::MatrixXd::Identity(n, n);
            out.ineq_rhs = Eigen::VectorXd::Zero(n);
            out.eq_x = Eigen::MatrixXd::Zero(d + 1, d);
            out.eq_x.topRows(d).setIdentity();
            out.eq_z = Eigen::MatrixXd::Zero(d + 1, n);
            out.eq_z.topRows(d) = -v.vertices.transpose();
            out.eq_z.row(d).setOnes();
            out.eq_rhs = Eigen::VectorXd::Zero(d + 1);
            out.eq_rhs(d) = 1.0;
          },
          [&](const set_node::HPolytope& h) {
            out.ineq_x = h.normals;
            out.ineq_z.resize(h.normals.rows(), 0);
            out.ineq_rhs = h.offsets;
          },
          [&](const set_node::LinearImage& li) {
            // Substitute x_inner = A^{-1} (x - shift).
            Formulation in = formulation(*li.inner);
            out.num_aux = in.num_aux;
            out.ineq_x = in.ineq_x * li.inverse;
            out.ineq_z = std::move(in.ineq_z);
            out.ineq_rhs = in.ineq_rhs + out.ineq_x * li.shift;
            out.eq_x = in.eq_x.rows() > 0 ? Eigen::MatrixXd(in.eq_x * li.inverse)
                                          : Eigen::MatrixXd(0, d);
            out.eq_z = std::move(in.eq_z);
            out.eq_rhs = in.eq_rhs.size() > 0 ? Eigen::VectorXd(in.eq_rhs + out.eq_x * li.shift)
                                              : Eigen::VectorXd(0);
          },
      },
      set.node());
  if (out.eq_x.rows() == 0) {
    out.eq_x.resize(0, d);
    out.eq_z.resize(0, out.num_aux);
    out.eq_rhs.resize(0);
  }
  if (out.ineq_z.cols() != out.num_aux) out.ineq_z.conservativeResize(out.ineq_x.rows(), out.num_aux);
  return out;
}

bool is_symmetric(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const set_node::Ball&) { return true; },
          [](const set_node::Simplex&) { return false; },
          [](const set_node::Product& p) {
            return std::all_of(p.factors.begin(), p.factors.end(),
                               [](const ConvexSet& f) { return is_symmetric(f); });
          },
          [&](const set_node::VPolytope& v) {
            for (Eigen::Index i = 0; i < v.vertices.rows(); ++i) {
              if (!membership(set, -v.vertices.row(i).transpose(), 1e-9)) return false;
            }
            return true;
          },
          [&](const set_node::HPolytope& h) {
            for (Eigen::Index i = 0; i < h.normals.rows(); ++i) {
              const Eigen::VectorXd g = h.normals.row(i).transpose();
              const double tol = 1e-9 * std::max(1.0, g.norm());
              if (support(set, -g) > h.offsets(i) + tol) return false;
            }
            return true;
          },
          [](const set_node::LinearImage& li) {
            return li.shift.isZero(0.0) && is_symmetric(*li.inner);
          },
      },
      set.node());
}

bool contains_origin_in_interior(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const set_node::Ball&) { return true; },
          [](const set_node::Simplex&) { return false; },
          [](const set_node::Product& p) {
            return std::all_of(p.factors.begin(), p.factors.end(),
                               [](const ConvexSet& f) { return contains_origin_in_interior(f); });
          },
          [&](const set_node::VPolytope& v) {
            // 0 is interior iff the polar {l : V l <= 1} is bounded.
            const Eigen::Index d = set.dim();
            lp::LpProblem prob(d);
            prob.free_variables();
            prob.ineq = v.vertices;
            prob.ineq_rhs = Eigen::VectorXd::Ones(v.vertices.rows());
            for (Eigen::Index j = 0; j < d; ++j) {
              for (double s : {1.0, -1.0}) {
                prob.objective.setZero();
                prob.objective(j) = s;
                if (lp::solve_lp(prob).status != lp::Status::Optimal) return false;
              }
            }
            return true;
          },
          [](const set_node::HPolytope& h) { return h.offsets.minCoeff() > 1e-12; },
          [](const set_node::LinearImage& li) {
            if (li.shift.isZero(0.0)) return contains_origin_in_interior(*li.inner);
            const Eigen::VectorXd q = -li.inverse * li.shift;
            if (li.inner->as<set_node::Simplex>()) {
              return q.minCoeff() > 1e-12 && q.sum() < 1.0 - 1e-12;
            }
            if (is_polyhedral(*li.inner)) {
              const Facets f = facets(*li.inner);
              return (f.offsets - f.normals * q).minCoeff() > 1e-12;
            }
            return contains_origin_in_interior(*li.inner) && gauge(*li.inner, q) < 1.0 - 1e-12;
          },
      },
      set.node());
}

ConvexSet polar(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [&](const set_node::Ball& b) {
            const Norm dual = b.norm == Norm::L1   ? Norm::Linf
                              : b.norm == Norm::Linf ? Norm::L1
                                                     : Norm::L2;
            return ConvexSet::ball(dual, b.dim, 1.0 / b.radius);
          },
          [&](const set_node::Simplex&) -> ConvexSet {
            throw InvalidArgument("polar: simplex does not contain the origin in its interior");
          },
          [&](const set_node::Product& p) {
            std::vector<ConvexSet> parts;
            const double k = static_cast<double>(p.factors.size());
            for (const auto& f : p.factors) parts.push_back(ConvexSet::scaled(polar(f), 1.0 / k));
            return ConvexSet::product(std::move(parts));
          },
          [&](const set_node::VPolytope& v) {
            if (!contains_origin_in_interior(set)) {
              throw InvalidArgument("polar: set does not contain the origin in its interior");
            }
            return ConvexSet::hpolytope(v.vertices, Eigen::VectorXd::Ones(v.vertices.rows()));
          },
          [&](const set_node::HPolytope& h) {
            if (h.offsets.minCoeff() <= 1e-12) {
              throw InvalidArgument("polar: set does not contain the origin in its interior");
            }
            Eigen::MatrixXd v = h.offsets.cwiseInverse().asDiagonal() * h.normals;
            return ConvexSet::vpolytope(std::move(v));
          },
          [&](const set_node::LinearImage& li) {
            if (!li.shift.isZero(0.0)) {
              if (!contains_origin_in_interior(set)) {
                throw InvalidArgument("polar: set does not contain the origin in its interior");
              }
              if (!is_polyhedral(set)) {
                throw InvalidArgument("polar: shifted non-polyhedral images are not supported");
              }
              const Facets f = facets(set);
              return polar(ConvexSet::hpolytope(f.normals, f.offsets));
            }
            return ConvexSet::linear_image(li.inverse.transpose(), polar(*li.inner));
          },
      },
      set.node());
}

double max_norm(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const set_node::Ball& b) {
            switch (b.norm) {
              case Norm::Linf:
                return b.radius * std::sqrt(static_cast<double>(b.dim));
              case Norm::L1:
              case Norm::L2:
                return b.radius;
            }
            return b.radius;
          },
          [](const set_node::Simplex&) { return 1.0; },
          [](const set_node::Product& p) {
            double s = 0.0;
            for (const auto& f : p.factors) {
              const double m = max_norm(f);
              s += m * m;
            }
            return std::sqrt(s);
          },
          [](const set_node::VPolytope& v) { return v.vertices.rowwise().norm().maxCoeff(); },
          [&](const set_node::HPolytope&) {
            try {
              return vertices(set).rowwise().norm().maxCoeff();
            } catch (const VertexBlowup&) {
              double s = 0.0;
              for (Eigen::Index j = 0; j < set.dim(); ++j) {
                const Eigen::VectorXd e = Eigen::VectorXd::Unit(set.dim(), j);
                const double m = std::max(support(set, e), support(set, -e));
                s += m * m;
              }
              return std::sqrt(s);
            }
          },
          [&](const set_node::LinearImage& li) {
            if (const auto* b = li.inner->as<set_node::Ball>();
                b && b->norm == Norm::L2 && li.shift.isZero(0.0)) {
              Eigen::JacobiSVD<Eigen::MatrixXd> svd(li.forward);
              return svd.singularValues()(0) * b->radius;
            }
            if (is_polyhedral(set)) {
              try {
                return vertices(set).rowwise().norm().maxCoeff();
              } catch (const VertexBlowup&) {
              }
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(li.forward);
            return svd.singularValues()(0) * max_norm(*li.inner) + li.shift.norm();
          },
      },
      set.node());
}

}  // namespace swapreg
