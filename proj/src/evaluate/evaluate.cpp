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

#include "swapreg/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "swapreg/errors.hpp"
#include "swapreg/lp.hpp"

namespace swapreg {

void PlayHistory::validate(double tol) const {
  if (plays.size() != losses.size()) throw InvalidArgument("history: plays and losses differ in length");
  if (!mixtures.empty() && mixtures.size() != plays.size()) {
    throw InvalidArgument("history: mixtures and plays differ in length");
  }
  for (size_t t = 0; t < plays.size(); ++t) {
    const std::string at = " at round " + std::to_string(t + 1);
    if (plays[t].size() != pset.dim() || losses[t].size() != lset.dim()) {
      throw InvalidArgument("history: dimension mismatch" + at);
    }
    if (!membership(pset, plays[t], tol)) throw MembershipViolation("history: play outside P" + at);
    if (!membership(lset, losses[t], tol)) throw MembershipViolation("history: loss outside L" + at);
    if (std::abs(plays[t].dot(losses[t])) > 1.0 + tol) {
      throw InvalidArgument("history: |<p, l>| exceeds 1" + at);
    }
  }
}

Eigen::MatrixXd PlayHistory::loss_play_sum() const {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(lset.dim(), pset.dim());
  for (size_t t = 0; t < plays.size(); ++t) k.noalias() += losses[t] * plays[t].transpose();
  return k;
}

Eigen::VectorXd PlayHistory::loss_sum() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(lset.dim());
  for (const auto& l : losses) s += l;
  return s;
}

double PlayHistory::total_loss() const {
  double s = 0.0;
  for (size_t t = 0; t < plays.size(); ++t) s += plays[t].dot(losses[t]);
  return s;
}

PlayHistory history_of(const Trajectory& traj, const ConvexSet& pset, const ConvexSet& lset) {
  PlayHistory h{pset, lset, {}, {}, {}};
  for (const auto& r : traj.rounds) {
    h.plays.push_back(r.p_played);
    h.losses.push_back(r.loss);
  }
  return h;
}

PlayHistory working_history(const Trajectory& traj, const ConvexSet& lset) {
  if (!traj.preconditioner) throw InvalidArgument("working_history: run was not preconditioned");
  const Preconditioner& pre = *traj.preconditioner;
  PlayHistory h{pre.target, ConvexSet::linear_image(pre.inverse_transpose, lset), {}, {}, {}};
  for (const auto& r : traj.rounds) {
    h.plays.push_back(r.p_working);
    h.losses.push_back(r.loss_working);
  }
  return h;
}

PlayHistory history_of(const PolyTrajectory& traj, const ConvexSet& pset, const ConvexSet& lset) {
  PlayHistory h{pset, lset, {}, {}, {}};
  for (const auto& r : traj.rounds) {
    h.plays.push_back(r.mixture.mean());
    h.losses.push_back(r.loss);
    h.mixtures.push_back(r.mixture);
  }
  return h;
}

namespace {

struct Block {
  Eigen::Index offset = 0;
  Facets facets;
  Formulation form;
};

std::vector<Block> output_blocks(const ConvexSet& pset) {
  std::vector<Block> blocks;
  try {
    if (const auto* prod = pset.as<set_node::Product>()) {
      Eigen::Index off = 0;
      for (const auto& f : prod->factors) {
        blocks.push_back({off, facets(f), formulation(f)});
        off += f.dim();
      }
    } else {
      blocks.push_back({0, facets(pset), formulation(pset)});
    }
  } catch (const NonPolyhedral& e) {
    throw RepresentationMissing(std::string("endomorphism LP needs a facet description: ") +
                                e.what());
  }
  return blocks;
}

// Vertices of pset that affinely span it.
std::vector<Eigen::VectorXd> spanning_vertices(const ConvexSet& pset) {
  const Eigen::Index d = pset.dim();
  std::vector<Eigen::VectorXd> pts;
  auto add = [&](const Eigen::VectorXd& v) {
    for (const auto& q : pts) {
      if ((q - v).lpNorm<Eigen::Infinity>() <= 1e-12) return;
    }
    pts.push_back(v);
  };
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e(j) = 1.0;
    add(lmo(pset, e));
    add(lmo(pset, -e));
  }
  // Extend along a normal of the current affine hull until it is full.
  for (Eigen::Index guard = 0; guard <= 2 * d; ++guard) {
    Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(d, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(pts.size()) - 1));
    for (size_t i = 1; i < pts.size(); ++i) diff.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts[0];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullU);
    svd.setThreshold(1e-9);
    const Eigen::Index rank = svd.rank();
    if (rank == d) break;
    const Eigen::VectorXd n = svd.matrixU().col(rank);
    const Eigen::VectorXd lo = lmo(pset, n);
    const Eigen::VectorXd hi = lmo(pset, -n);
    add(std::abs(n.dot(lo - pts[0])) >= std::abs(n.dot(hi - pts[0])) ? lo : hi);
  }
  return pts;
}

// Row coefficients of x = M_b v + a_b for a row `r` acting on x.
Eigen::RowVectorXd image_row(const Eigen::RowVectorXd& r, const Eigen::VectorXd& v,
                             bool include_affine) {
  const Eigen::Index db = r.size();
  const Eigen::Index nm = db * v.size();
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(nm + (include_affine ? db : 0));
  const Eigen::MatrixXd coef = r.transpose() * v.transpose();  // db x d
  out.head(nm) = Eigen::Map<const Eigen::RowVectorXd>(coef.data(), nm);
  if (include_affine) out.tail(db) = r;
  return out;
}

// min <M_b, K_b> + <a_b, c_b> subject to M_b v + a_b in the factor for all
// v in pset. The LP starts from M_b v + a_b in the factor at affinely
// spanning vertices v, which keeps it bounded, and then adds rows
// g^T (M_b v + a_b) <= h for violated facets g at the maximizing vertex v.
// Separation is exact, so a clean pass certifies the deviation.
double block_lp(const ConvexSet& pset, const Block& block, const Eigen::MatrixXd& k,
                const Eigen::VectorXd& c, bool include_affine, AffineDeviation& dev, int& rounds,
                int& cuts_added, bool& certified) {
  const Eigen::Index d = pset.dim();
  const Eigen::Index db = block.facets.normals.cols();
  const Eigen::Index nm = db * d;
  const Eigen::Index ncore = nm + (include_affine ? db : 0);
  const Eigen::MatrixXd& g = block.facets.normals;
  const Eigen::VectorXd& h = block.facets.offsets;
  const Formulation& form = block.form;

  const std::vector<Eigen::VectorXd> seeds = spanning_vertices(pset);
  const Eigen::Index seed_count = static_cast<Eigen::Index>(seeds.size());
  const Eigen::Index n = ncore + seed_count * form.num_aux;
  const Eigen::Index ri = form.ineq_x.rows();
  const Eigen::Index re = form.eq_x.rows();

  const Eigen::MatrixXd kb = k.middleRows(block.offset, db);
  lp::LpProblem prob(n);
  prob.lower = Eigen::VectorXd::Constant(n, -lp::kInf);
  prob.upper = Eigen::VectorXd::Constant(n, lp::kInf);
  prob.objective.head(nm) = Eigen::Map<const Eigen::VectorXd>(kb.data(), nm);
  if (include_affine) prob.objective.segment(nm, db) = c.segment(block.offset, db);
  prob.ineq = Eigen::MatrixXd::Zero(seed_count * ri, n);
  prob.ineq_rhs.resize(seed_count * ri);
  prob.eq = Eigen::MatrixXd::Zero(seed_count * re, n);
  prob.eq_rhs.resize(seed_count * re);
  for (Eigen::Index s = 0; s < seed_count; ++s) {
    const Eigen::VectorXd& v = seeds[static_cast<size_t>(s)];
    const Eigen::Index zoff = ncore + s * form.num_aux;
    for (Eigen::Index r = 0; r < ri; ++r) {
      prob.ineq.row(s * ri + r).head(ncore) = image_row(form.ineq_x.row(r), v, include_affine);
      prob.ineq.row(s * ri + r).segment(zoff, form.num_aux) = form.ineq_z.row(r);
      prob.ineq_rhs(s * ri + r) = form.ineq_rhs(r);
    }
    for (Eigen::Index r = 0; r < re; ++r) {
      prob.eq.row(s * re + r).head(ncore) = image_row(form.eq_x.row(r), v, include_affine);
      prob.eq.row(s * re + r).segment(zoff, form.num_aux) = form.eq_z.row(r);
      prob.eq_rhs(s * re + r) = form.eq_rhs(r);
    }
  }
  lp::IncrementalLp lp(prob);

  // Cut vertices already in the LP, per facet.
  std::vector<std::vector<Eigen::VectorXd>> cut_at(static_cast<size_t>(g.rows()));
  Eigen::MatrixXd mb;
  Eigen::VectorXd ab;
  certified = false;
  const int max_rounds = 4000;
  for (rounds = 0; rounds < max_rounds; ++rounds) {
    const auto& sol = lp.solution();
    if (!sol.optimal()) {
      throw SolverFailure(std::string("endomorphism LP: ") + lp::to_string(sol.status));
    }
    mb = Eigen::Map<const Eigen::MatrixXd>(sol.point.data(), db, d);
    ab = include_affine ? Eigen::VectorXd(sol.point.segment(nm, db)) : Eigen::VectorXd::Zero(db);

    struct Cut {
      double viol;
      Eigen::Index facet;
      Eigen::VectorXd v;
    };
    std::vector<Cut> fresh;
    double worst = 0.0;
    double worst_known = 0.0;
    for (Eigen::Index f = 0; f < g.rows(); ++f) {
      const Eigen::VectorXd dir = mb.transpose() * g.row(f).transpose();
      const Eigen::VectorXd v = lmo(pset, -dir);
      const double viol = (dir.dot(v) + g.row(f).dot(ab) - h(f)) / std::max(1.0, std::abs(h(f)));
      worst = std::max(worst, viol);
      if (viol <= 1e-9) continue;
      bool known = false;
      for (const auto& q : cut_at[static_cast<size_t>(f)]) {
        known = known || (q - v).lpNorm<Eigen::Infinity>() <= 1e-12;
      }
      if (known) {
        worst_known = std::max(worst_known, viol);
      } else {
        fresh.push_back({viol, f, v});
      }
    }
    if (worst <= 1e-9) {
      certified = true;
      break;
    }
    if (fresh.empty()) {
      // Every violated cut is already in the LP; the rest is round-off.
      certified = worst_known <= 1e-7;
      break;
    }
    std::sort(fresh.begin(), fresh.end(), [](const Cut& x, const Cut& y) { return x.viol > y.viol; });
    const Eigen::Index take = std::min<Eigen::Index>(static_cast<Eigen::Index>(fresh.size()), 64);
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(take, n);
    Eigen::VectorXd rhs(take);
    for (Eigen::Index i = 0; i < take; ++i) {
      const Cut& cut = fresh[static_cast<size_t>(i)];
      rows.row(i).head(ncore) = image_row(g.row(cut.facet), cut.v, include_affine);
      rhs(i) = h(cut.facet);
      cut_at[static_cast<size_t>(cut.facet)].push_back(cut.v);
    }
    lp.add_ineq(rows, rhs);
    cuts_added += static_cast<int>(take);
  }
  if (!certified) {
    const auto& sol = lp.solution();
    if (!sol.optimal()) {
      throw SolverFailure(std::string("endomorphism LP: ") + lp::to_string(sol.status));
    }
    mb = Eigen::Map<const Eigen::MatrixXd>(sol.point.data(), db, d);
    if (include_affine) ab = sol.point.segment(nm, db);
  }
  dev.m.middleRows(block.offset, db) = mb;
  dev.a.segment(block.offset, db) = ab;
  return lp.solution().value;
}

}  // namespace

EndomorphismLp optimize_endomorphism(const ConvexSet& pset, const Eigen::MatrixXd& k,
                                     const Eigen::VectorXd& c, bool include_affine) {
  const Eigen::Index d = pset.dim();
  if (k.rows() != d || k.cols() != d || c.size() != d) {
    throw InvalidArgument("optimize_endomorphism: objective shape mismatch");
  }
  const auto blocks = output_blocks(pset);
  EndomorphismLp out;
  out.dev.m = Eigen::MatrixXd::Zero(d, d);
  out.dev.a = Eigen::VectorXd::Zero(d);
  out.dev.certified = true;
  for (const auto& b : blocks) {
    int rounds = 0;
    bool certified = false;
    out.value += block_lp(pset, b, k, c, include_affine, out.dev, rounds, out.cuts, certified);
    out.rounds = std::max(out.rounds, rounds);
    out.dev.certified = out.dev.certified && certified;
  }
  return out;
}

double endomorphism_violation(const ConvexSet& pset, const AffineDeviation& dev) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& b : output_blocks(pset)) {
    const Eigen::Index db = b.facets.normals.cols();
    const Eigen::MatrixXd mb = dev.m.middleRows(b.offset, db);
    const Eigen::VectorXd ab = dev.a.segment(b.offset, db);
    for (Eigen::Index f = 0; f < b.facets.normals.rows(); ++f) {
      const Eigen::VectorXd g = b.facets.normals.row(f).transpose();
      worst = std::max(worst, support(pset, mb.transpose() * g) + g.dot(ab) - b.facets.offsets(f));
    }
  }
  return worst;
}

LinearSwapResult linear_swap_regret(const PlayHistory& h, bool include_affine) {
  h.validate();
  const EndomorphismLp lp = optimize_endomorphism(h.pset, h.loss_play_sum(), h.loss_sum(),
                                                  include_affine);
  return {h.total_loss() - lp.value, lp.dev};
}

double external_regret(const PlayHistory& h) {
  const Eigen::VectorXd s = h.loss_sum();
  return h.total_loss() - s.dot(lmo(h.pset, s));
}

double app_loss_certificate(const Trajectory& traj) { return traj.certificate(); }
double app_loss_certificate(const PolyTrajectory& traj) { return traj.certificate(); }

RegretReport regret_report(const PlayHistory& h, double app_loss_cert) {
  RegretReport r;
  const LinearSwapResult ls = linear_swap_regret(h, true);
  r.linear_swap = ls.value;
  r.best_deviation = ls.dev;
  r.external = external_regret(h);
  r.app_loss_cert = app_loss_cert;
  r.profile_swap_dist_cert = app_loss_cert;
  r.bound_8d_sqrt_t = 8.0 * static_cast<double>(h.pset.dim()) *
                      std::sqrt(static_cast<double>(h.size()));
  r.frobenius_max_observed = ls.dev.m.norm();
  return r;
}

namespace {

// Largest facet violation of M m(q) over the facets of P.
double feature_violation(const Eigen::MatrixXd& m, const FeatureMap& map, const Facets& f,
                         const Eigen::VectorXd& q) {
  return (f.normals * (m * map(q)) - f.offsets).maxCoeff();
}

Eigen::VectorXd ascend(const Eigen::VectorXd& start, const ConvexSet& pset,
                       const std::function<double(const Eigen::VectorXd&)>& f, double step0) {
  Eigen::VectorXd q = start;
  double fq = f(q);
  double step = step0;
  for (int sweep = 0; sweep < 30; ++sweep) {
    bool moved = false;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd cand = q;
        cand(i) += sgn * step;
        if (!membership(pset, cand)) continue;
        const double fc = f(cand);
        if (fc > fq) {
          q = cand;
          fq = fc;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return q;
}

}  // namespace

PolyLowerBound polydim_regret_lower(const PlayHistory& h, const FeatureMap& map, int rounds_cap,
                                    std::uint64_t seed) {
  h.validate();
  const Eigen::Index d = h.pset.dim();
  if (map.d != d) throw InvalidArgument("polydim_regret_lower: feature map dimension mismatch");
  const Eigen::Index dim = map.dim;
  Facets fac;
  try {
    fac = facets(h.pset);
  } catch (const NonPolyhedral& e) {
    throw RepresentationMissing(std::string("polydim_regret_lower: ") + e.what());
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(d, dim);
  double total = 0.0;
  for (size_t t = 0; t < h.size(); ++t) {
    const Eigen::VectorXd feat =
        h.mixtures.empty() ? map(h.plays[t]) : h.mixtures[t].expected_features(map);
    k.noalias() += h.losses[t] * feat.transpose();
    total += h.losses[t].dot(feat.head(d));
  }

  PolyLowerBound best;
  best.m = Eigen::MatrixXd::Zero(d, dim);
  best.m.leftCols(d).setIdentity();
  best.value = total - (best.m.array() * k.array()).sum();
  best.certified = true;

  Rng rng(seed);
  std::vector<Eigen::VectorXd> q;
  if (is_polyhedral(h.pset)) {
    try {
      const Eigen::MatrixXd v = vertices(h.pset, 4096);
      for (Eigen::Index i = 0; i < v.rows(); ++i) q.push_back(v.row(i).transpose());
    } catch (const VertexBlowup&) {
    }
  }
  const int grid = std::max<int>(200, static_cast<int>(2 * dim));
  for (int i = 0; i < grid; ++i) q.push_back(sample(h.pset, rng));

  const double step0 = 0.25 * std::max(max_norm(h.pset), 1e-12);
  const Eigen::Index n = d * dim;
  for (int round = 0; round < rounds_cap; ++round) {
    best.rounds = round + 1;
    lp::LpProblem prob(n);
    prob.free_variables();
    prob.objective = Eigen::Map<const Eigen::VectorXd>(k.data(), n);
    const Eigen::Index rows = static_cast<Eigen::Index>(q.size()) * fac.normals.rows();
    prob.ineq.resize(rows, n);
    prob.ineq_rhs.resize(rows);
    Eigen::Index r = 0;
    for (const auto& x : q) {
      const Eigen::VectorXd mx = map(x);
      for (Eigen::Index f = 0; f < fac.normals.rows(); ++f, ++r) {
        const Eigen::MatrixXd coef = fac.normals.row(f).transpose() * mx.transpose();
        prob.ineq.row(r) = Eigen::Map<const Eigen::RowVectorXd>(coef.data(), n);
        prob.ineq_rhs(r) = fac.offsets(f);
      }
    }
    const auto sol = lp::solve_lp(prob);
    if (sol.status == lp::Status::Unbounded) {
      for (int i = 0; i < grid; ++i) q.push_back(sample_boundary(h.pset, rng));
      continue;
    }
    if (!sol.optimal()) throw SolverFailure("polydim_regret_lower: LP failed");
    const Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(sol.point.data(), d, dim);
    const auto viol = [&](const Eigen::VectorXd& x) { return feature_violation(m, map, fac, x); };

    // Multi-start search for a violating point.
    std::vector<Eigen::VectorXd> starts;
    for (int i = 0; i < 16; ++i) starts.push_back(sample(h.pset, rng));
    bool found = false;
    for (const auto& s : starts) {
      const Eigen::VectorXd x = ascend(s, h.pset, viol, step0);
      if (viol(x) > 1e-9) {
        q.push_back(x);
        found = true;
      }
    }
    if (found) continue;

    bool clean = true;
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXd x = i % 2 ? sample(h.pset, rng) : sample_boundary(h.pset, rng);
      if (viol(x) > 1e-9) {
        q.push_back(x);
        clean = false;
      }
    }
    if (!clean) continue;
    best.m = m;
    best.value = total - sol.value;
    best.certified = true;
    break;
  }
  return best;
}

}  // namespace swapreg
