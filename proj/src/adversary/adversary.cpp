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

#include "swapreg/adversary.hpp"

#include <cmath>
#include <utility>

#include "swapreg/errors.hpp"
#include "swapreg/evaluate.hpp"

namespace swapreg {

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::Movement:
      return "movement";
    case AdversaryKind::Punishment:
      return "punishment";
    case AdversaryKind::Combined:
      return "combined";
    case AdversaryKind::IidRandom:
      return "iid";
    case AdversaryKind::IidVertex:
      return "iid_vertex";
    case AdversaryKind::Replay:
      return "replay";
  }
  return "unknown";
}

LossOracle as_oracle(std::shared_ptr<Adversary> adversary) {
  return [adversary](long t, const Eigen::VectorXd& p) { return adversary->next(t, p); };
}

MovementAdversary::MovementAdversary(Eigen::Index d, long horizon)
    : d_(d), horizon_(horizon), period_(d > 0 ? horizon / d : 0) {
  if (d < 1 || horizon < 1 || horizon % d != 0) {
    throw InvalidArgument("movement adversary needs d >= 1 and T divisible by d");
  }
}

void MovementAdversary::check_boundary(long t) {
  PlayHistory h{ConvexSet::ball(Norm::L1, d_), ConvexSet::ball(Norm::Linf, d_), plays_, losses_, {}};
  const double regret = linear_swap_regret(h).value;
  if (regret > static_cast<double>(d_) * std::sqrt(static_cast<double>(horizon_))) {
    terminated_ = true;
    terminated_at_ = t - 1;
    regret_at_termination_ = regret;
  }
}

Eigen::VectorXd MovementAdversary::next(long t, const Eigen::VectorXd& x) {
  if (x.size() != d_) throw InvalidArgument("movement adversary: play has wrong dimension");
  if (!terminated_ && t > 1 && (t - 1) % period_ == 0) check_boundary(t);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(d_);
  if (!terminated_) {
    const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>((t - 1) / period_), d_ - 1);
    y(k) = -1.0;
    y.tail(d_ - k - 1).setConstant(-0.5);
  }
  plays_.push_back(x);
  losses_.push_back(y);
  return y;
}

PunishmentAdversary::PunishmentAdversary(Eigen::Index d, std::uint64_t seed) : d_(d), rng_(seed) {
  if (d < 2) throw InvalidArgument("punishment adversary needs d >= 2");
}

Eigen::VectorXd PunishmentAdversary::next(long, const Eigen::VectorXd&) {
  std::uniform_int_distribution<Eigen::Index> first(0, d_ - 1);
  std::uniform_int_distribution<Eigen::Index> second(0, d_ - 2);
  const Eigen::Index j = first(rng_);
  Eigen::Index k = second(rng_);
  if (k >= j) ++k;
  Eigen::VectorXd l = Eigen::VectorXd::Zero(d_);
  l(j) = 0.5;
  l(k) = -0.5;
  return l;
}

CombinedAdversary::CombinedAdversary(Eigen::Index d, long horizon, std::uint64_t seed)
    : d_(d), movement_(d, horizon), punishment_(d, seed) {}

ConvexSet CombinedAdversary::strategy_set(Eigen::Index d) {
  return ConvexSet::product({ConvexSet::ball(Norm::L1, d), ConvexSet::ball(Norm::Linf, d)});
}

ConvexSet CombinedAdversary::loss_set(Eigen::Index d) {
  return ConvexSet::product({ConvexSet::scaled(ConvexSet::ball(Norm::Linf, d), 0.5),
                             ConvexSet::scaled(ConvexSet::ball(Norm::L1, d), 0.5)});
}

Eigen::VectorXd CombinedAdversary::next(long t, const Eigen::VectorXd& p) {
  if (p.size() != 2 * d_) throw InvalidArgument("combined adversary: play has wrong dimension");
  const Eigen::VectorXd y = movement_.next(t, p.head(d_));
  const Eigen::VectorXd l = punishment_.next(t, p.tail(d_));
  punish_plays_.push_back(p.tail(d_));
  punish_losses_.push_back(l);
  Eigen::VectorXd out(2 * d_);
  out << 0.5 * y, 0.5 * l;
  return out;
}

IidAdversary::IidAdversary(ConvexSet lset, std::uint64_t seed, bool vertices)
    : lset_(std::move(lset)), rng_(seed), vertices_(vertices) {}

Eigen::VectorXd IidAdversary::next(long, const Eigen::VectorXd&) {
  if (vertices_) return lmo(lset_, unit_direction(rng_, lset_.dim()));
  return sample(lset_, rng_);
}

ReplayAdversary::ReplayAdversary(std::vector<Eigen::VectorXd> losses) : losses_(std::move(losses)) {}

Eigen::VectorXd ReplayAdversary::next(long t, const Eigen::VectorXd&) {
  if (t < 1 || t > static_cast<long>(losses_.size())) {
    throw InvalidArgument("replay adversary: round " + std::to_string(t) + " past the recording");
  }
  return losses_[static_cast<size_t>(t - 1)];
}

std::vector<Eigen::Index> vertex_coverage(const std::vector<Eigen::VectorXd>& plays, long horizon) {
  std::vector<Eigen::Index> out;
  if (plays.empty()) return out;
  const Eigen::Index d = plays.front().size();
  const double need = static_cast<double>(horizon) / (16.0 * static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    long count = 0;
    for (const auto& x : plays) count += x(i) >= 0.125 ? 1 : 0;
    if (static_cast<double>(count) >= need) out.push_back(i);
  }
  return out;
}

PunishmentDeviation best_punishment_deviation(const std::vector<Eigen::VectorXd>& plays,
                                              const std::vector<Eigen::VectorXd>& losses) {
  if (plays.size() != losses.size()) {
    throw InvalidArgument("best_punishment_deviation: history length mismatch");
  }
  PunishmentDeviation out;
  if (plays.empty()) return out;
  const Eigen::Index d = plays.front().size();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(losses.front().size(), d);  // sum l_t x_t^T
  for (size_t t = 0; t < plays.size(); ++t) z.noalias() += losses[t] * plays[t].transpose();
  out.m = z.unaryExpr([](double v) { return v < 0.0 ? 1.0 : -1.0; });
  out.value = z.cwiseAbs().sum();
  return out;
}

}  // namespace swapreg
