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

#include "swapreg/polydim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "swapreg/errors.hpp"
#include "swapreg/saddle.hpp"

namespace swapreg {

namespace {

// Exponent vectors of total degree k in lexicographically decreasing order.
void graded_block(Eigen::Index d, int k, std::vector<int>& cur, Eigen::Index pos,
                  std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[static_cast<size_t>(pos)] = k;
    out.push_back(cur);
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[static_cast<size_t>(pos)] = e;
    graded_block(d, k - e, cur, pos + 1, out);
  }
}

double binomial(Eigen::Index n, Eigen::Index k) {
  double r = 1.0;
  for (Eigen::Index i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

FeatureMap monomial_map(Eigen::Index d, int degree, Eigen::Index max_dim) {
  if (d < 1 || degree < 1) throw InvalidArgument("monomial_map: need d >= 1 and degree >= 1");
  const double count = binomial(d + degree, degree);
  if (count > static_cast<double>(max_dim)) {
    throw DimBlowup("monomial_map: feature dimension " + std::to_string(count) + " exceeds " +
                    std::to_string(max_dim));
  }
  FeatureMap map;
  map.d = d;
  map.degree = degree;
  std::vector<int> cur(static_cast<size_t>(d), 0);
  for (int k = 1; k <= degree; ++k) graded_block(d, k, cur, 0, map.exponents);
  map.exponents.emplace_back(static_cast<size_t>(d), 0);
  map.dim = static_cast<Eigen::Index>(map.exponents.size());
  return map;
}

Eigen::VectorXd FeatureMap::operator()(const Eigen::VectorXd& p) const {
  if (p.size() != d) throw InvalidArgument("feature map: dimension mismatch");
  Eigen::VectorXd out(dim);
  for (Eigen::Index f = 0; f < dim; ++f) {
    double v = 1.0;
    const auto& e = exponents[static_cast<size_t>(f)];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) v *= p(i);
    }
    out(f) = v;
  }
  return out;
}

Eigen::VectorXd MixedStrategy::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(support.empty() ? 0 : support[0].size());
  for (size_t j = 0; j < support.size(); ++j) m += weights(static_cast<Eigen::Index>(j)) * support[j];
  return m;
}

Eigen::VectorXd MixedStrategy::expected_features(const FeatureMap& map) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(map.dim);
  for (size_t j = 0; j < support.size(); ++j) {
    m += weights(static_cast<Eigen::Index>(j)) * map(support[j]);
  }
  return m;
}

bool MixedStrategy::valid(const ConvexSet& pset, double tol) const {
  if (support.empty() || weights.size() != static_cast<Eigen::Index>(support.size())) return false;
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9) return false;
  for (const auto& q : support) {
    if (!membership(pset, q, tol)) return false;
  }
  return true;
}

namespace {

std::optional<Eigen::MatrixXd> small_vertex_list(const ConvexSet& pset) {
  if (!is_polyhedral(pset)) return std::nullopt;
  try {
    return vertices(pset, 256);
  } catch (const VertexBlowup&) {
    return std::nullopt;
  }
}

bool in_pool(const std::vector<Eigen::VectorXd>& pool, const Eigen::VectorXd& q) {
  for (const auto& x : pool) {
    if ((x - q).lpNorm<Eigen::Infinity>() <= 1e-12) return true;
  }
  return false;
}

Eigen::VectorXd refine(const Eigen::VectorXd& start, const ConvexSet& pset,
                       const std::function<double(const Eigen::VectorXd&)>& f, double step0) {
  Eigen::VectorXd q = start;
  double fq = f(q);
  double step = step0;
  for (int sweep = 0; sweep < 20; ++sweep) {
    bool moved = false;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd cand = q;
        cand(i) += sgn * step;
        if (!membership(pset, cand)) continue;
        const double fc = f(cand);
        if (fc < fq) {
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

Eigen::VectorXd best_response_impl(const Eigen::MatrixXd& u, const Eigen::VectorXd& l,
                                   const ConvexSet& pset, const FeatureMap& map,
                                   std::vector<Eigen::VectorXd>& pool, Rng& rng,
                                   const std::optional<Eigen::MatrixXd>& verts) {
  const Eigen::VectorXd w = u.transpose() * l;
  if (w.isZero(0.0)) {
    if (pool.empty()) pool.push_back(lmo(pset, Eigen::VectorXd::Zero(pset.dim())));
    return pool.front();
  }
  const auto f = [&](const Eigen::VectorXd& q) { return w.dot(map(q)); };

  std::vector<Eigen::VectorXd> cands(pool.begin(), pool.end());
  if (verts) {
    for (Eigen::Index i = 0; i < verts->rows(); ++i) cands.push_back(verts->row(i).transpose());
  }
  cands.push_back(lmo(pset, w.head(map.d)));
  for (int k = 0; k < 64; ++k) cands.push_back(sample(pset, rng));

  std::vector<double> vals(cands.size());
  for (size_t i = 0; i < cands.size(); ++i) vals[i] = f(cands[i]);
  std::vector<size_t> order(cands.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });

  Eigen::VectorXd best = cands[order[0]];
  double best_val = vals[order[0]];
  const double step0 = 0.25 * std::max(max_norm(pset), 1e-12);
  for (size_t k = 0; k < std::min<size_t>(3, order.size()); ++k) {
    const Eigen::VectorXd q = refine(cands[order[k]], pset, f, step0);
    const double fq = f(q);
    if (fq < best_val) {
      best = q;
      best_val = fq;
    }
  }
  if (!in_pool(pool, best)) pool.push_back(best);
  return best;
}

Eigen::MatrixXd feature_rows(const std::vector<Eigen::VectorXd>& pts, const FeatureMap& map) {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(pts.size()), map.dim);
  for (size_t i = 0; i < pts.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = map(pts[i]).transpose();
  return f;
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& pts) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(pts.size()), pts.front().size());
  for (size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return out;
}

}  // namespace

Eigen::VectorXd best_response_point(const Eigen::MatrixXd& u, const Eigen::VectorXd& l,
                                    const ConvexSet& pset, const FeatureMap& map,
                                    std::vector<Eigen::VectorXd>& pool, Rng& rng) {
  if (u.rows() != l.size() || u.cols() != map.dim || pset.dim() != map.d) {
    throw InvalidArgument("best_response_point: shape mismatch");
  }
  return best_response_impl(u, l, pset, map, pool, rng, small_vertex_list(pset));
}

PolyState::PolyState(Eigen::Index d, Eigen::Index dim)
    : u(Eigen::MatrixXd::Zero(d, dim)),
      kappa_bar(Eigen::MatrixXd::Zero(d, dim)),
      s_bar(Eigen::MatrixXd::Zero(d, dim)) {}

namespace {

struct RoundGame {
  MixedStrategy mixture;
  Eigen::VectorXd l_star;
  double value = 0.0;
  double residual = 0.0;
};

RoundGame solve_linear_round(const PolyState& state, const ConvexSet& pset,
                             const ConvexSet& lset) {
  const Eigen::Index d = pset.dim();
  BilinearGame game{state.u.leftCols(d), state.u.col(d), pset, lset};
  const SaddlePoint sp = solve_exact(game);
  RoundGame out;
  out.mixture.support = {sp.p_star};
  out.mixture.weights = Eigen::VectorXd::Ones(1);
  out.l_star = sp.l_star;
  out.value = sp.value;
  out.residual = std::max(0.0, sp.gap);
  return out;
}

RoundGame solve_double_oracle(PolyState& state, const ConvexSet& pset, const ConvexSet& lset,
                              const FeatureMap& map, const PolyOptions& options, Rng& rng,
                              const std::optional<Eigen::MatrixXd>& verts) {
  const Eigen::MatrixXd& u = state.u;
  if (state.pool.empty()) {
    state.pool.push_back(lmo(pset, Eigen::VectorXd::Zero(pset.dim())));
    state.pool_weight.push_back(0.0);
  }
  if (state.loss_pool.empty()) {
    std::optional<Eigen::MatrixXd> lv = small_vertex_list(lset);
    if (lv) {
      for (Eigen::Index i = 0; i < lv->rows(); ++i) state.loss_pool.push_back(lv->row(i).transpose());
    } else {
      state.loss_pool.push_back(argmax(lset, Eigen::VectorXd::Zero(lset.dim())));
    }
  }
  RoundGame out;
  if (u.isZero(0.0)) {
    out.mixture.support = {state.pool.front()};
    out.mixture.weights = Eigen::VectorXd::Ones(1);
    out.l_star = argmax(lset, Eigen::VectorXd::Zero(lset.dim()));
    return out;
  }

  MatrixGameSolution mg;
  Eigen::VectorXd mbar;
  for (int k = 0;; ++k) {
    const Eigen::MatrixXd feats = feature_rows(state.pool, map);
    const Eigen::MatrixXd losses = stack_rows(state.loss_pool);
    mg = solve_matrix_game(feats * u.transpose() * losses.transpose());
    out.l_star = losses.transpose() * mg.col;
    mbar = feats.transpose() * mg.row;
    if (k >= options.do_iters) break;

    bool improved = false;
    const size_t before = state.pool.size();
    const Eigen::VectorXd q =
        best_response_impl(u, out.l_star, pset, map, state.pool, rng, verts);
    if (state.pool.size() > before) {
      state.pool_weight.push_back(0.0);
      if (out.l_star.dot(u * map(q)) < mg.value - options.improve_tol) improved = true;
    }
    const Eigen::VectorXd lbr = argmax(lset, u * mbar);
    if (lbr.dot(u * mbar) > mg.value + options.improve_tol && !in_pool(state.loss_pool, lbr)) {
      state.loss_pool.push_back(lbr);
      improved = true;
    }
    if (!improved) break;
  }
  out.value = mg.value;
  out.residual = std::max(0.0, support(lset, u * mbar) - mg.value);
  // Points appended after the last solve carry no weight.
  const size_t solved = static_cast<size_t>(mg.row.size());
  for (size_t i = 0; i < solved; ++i) {
    const double w = mg.row(static_cast<Eigen::Index>(i));
    if (w > 1e-12) {
      out.mixture.support.push_back(state.pool[i]);
      state.pool_weight[i] += w;
    }
  }
  out.mixture.weights.resize(static_cast<Eigen::Index>(out.mixture.support.size()));
  Eigen::Index j = 0;
  for (size_t i = 0; i < solved; ++i) {
    const double w = mg.row(static_cast<Eigen::Index>(i));
    if (w > 1e-12) out.mixture.weights(j++) = w;
  }
  out.mixture.weights /= out.mixture.weights.sum();
  return out;
}

void evict(PolyState& state, const MixedStrategy& keep, std::size_t cap) {
  while (state.pool.size() > cap) {
    size_t victim = state.pool.size();
    for (size_t i = 0; i < state.pool.size(); ++i) {
      if (in_pool(keep.support, state.pool[i])) continue;
      if (victim == state.pool.size() || state.pool_weight[i] < state.pool_weight[victim]) victim = i;
    }
    if (victim == state.pool.size()) return;
    state.pool.erase(state.pool.begin() + static_cast<std::ptrdiff_t>(victim));
    state.pool_weight.erase(state.pool_weight.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

}  // namespace

PolyRoundLog poly_step(PolyState& state, const ConvexSet& pset, const ConvexSet& lset,
                       const FeatureMap& map, const PolyOptions& options, Rng& rng,
                       const LossOracle& adversary) {
  const Eigen::Index d = pset.dim();
  if (lset.dim() != d || map.d != d || state.u.rows() != d || state.u.cols() != map.dim) {
    throw InvalidArgument("poly_step: dimension mismatch");
  }
  const long t = state.t + 1;
  RoundGame rg;
  if (map.degree == 1) {
    rg = solve_linear_round(state, pset, lset);
  } else {
    rg = solve_double_oracle(state, pset, lset, map, options, rng, small_vertex_list(pset));
  }

  PolyRoundLog log;
  log.t = t;
  log.mixture = rg.mixture;
  log.l_star = rg.l_star;
  log.game_value = rg.value;
  log.best_response = lmo(pset, rg.l_star);
  log.s_target = rg.l_star * map(log.best_response).transpose();

  const Eigen::VectorXd mbar = log.mixture.expected_features(map);
  if (options.sample_play) {
    std::discrete_distribution<size_t> pick(log.mixture.weights.data(),
                                            log.mixture.weights.data() + log.mixture.weights.size());
    log.p_played = log.mixture.support[pick(rng)];
  } else {
    log.p_played = log.mixture.mean();
  }
  log.loss = adversary(t, log.p_played);
  if (log.loss.size() != d || !log.loss.allFinite()) {
    throw AdversaryFault("poly_step: malformed loss at round " + std::to_string(t));
  }
  if (!membership(lset, log.loss, 1e-7)) {
    throw AdversaryFault("poly_step: loss outside the loss set at round " + std::to_string(t));
  }
  log.kappa = log.loss * mbar.transpose();
  log.inst_loss = log.loss.dot(mbar.head(d));

  const Eigen::MatrixXd diff = log.kappa - log.s_target;
  log.invariant_value = (state.u.array() * diff.array()).sum();
  if (t > 1) {
    log.game_gap = (std::max(0.0, log.invariant_value) + rg.residual) / static_cast<double>(t - 1);
  }

  state.u += diff;
  state.t = t;
  const double w = 1.0 / static_cast<double>(t);
  state.kappa_bar += w * (log.kappa - state.kappa_bar);
  state.s_bar += w * (log.s_target - state.s_bar);
  state.norm_bound = std::max({state.norm_bound, log.kappa.norm(), log.s_target.norm()});
  log.cert_norm = state.certificate();
  if (map.degree > 1) evict(state, log.mixture, options.pool_cap);
  log.pool_size = state.pool.size();
  return log;
}

double PolyTrajectory::mean_gap() const {
  if (rounds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rounds) s += r.game_gap;
  return s / static_cast<double>(rounds.size());
}

double feature_norm_bound(const ConvexSet& pset, const FeatureMap& map) {
  if (map.degree == 1) {
    const double r = max_norm(pset);
    return std::sqrt(r * r + 1.0);
  }
  double best = 0.0;
  if (auto v = small_vertex_list(pset)) {
    for (Eigen::Index i = 0; i < v->rows(); ++i) {
      best = std::max(best, map(v->row(i).transpose()).norm());
    }
  }
  Rng rng(0x5eed);
  for (int k = 0; k < 2000; ++k) {
    best = std::max(best, map(sample_boundary(pset, rng)).norm());
  }
  return best * (1.0 + 1e-9);
}

PolyTrajectory poly_run(const PolyConfig& config, const LossOracle& adversary) {
  if (config.horizon < 1) throw InvalidArgument("poly_run: horizon must be positive");
  if (config.pset.dim() != config.lset.dim()) {
    throw InvalidArgument("poly_run: strategy and loss sets differ in dimension");
  }
  FeatureMap map = monomial_map(config.pset.dim(), config.degree);
  PolyTrajectory traj{{}, PolyState(map.d, map.dim), map, 0.0};
  traj.set_bound = feature_norm_bound(config.pset, map) * max_norm(config.lset);
  Rng rng(config.options.seed);
  traj.rounds.reserve(static_cast<size_t>(config.horizon));
  for (long t = 0; t < config.horizon; ++t) {
    traj.rounds.push_back(
        poly_step(traj.state, config.pset, config.lset, traj.map, config.options, rng, adversary));
  }
  return traj;
}

}  // namespace swapreg
