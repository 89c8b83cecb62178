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

// Loss generators: the movement/punishment lower-bound construction on
// B1 x Binf, plus iid and replay adversaries.

#ifndef SWAPREG_ADVERSARY_HPP_
#define SWAPREG_ADVERSARY_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swapreg/engine.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/random.hpp"

namespace swapreg {

enum class AdversaryKind { Movement, Punishment, Combined, IidRandom, IidVertex, Replay };

std::string to_string(AdversaryKind kind);

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual AdversaryKind kind() const = 0;
  // Loss for round t (1-based) after seeing the play p.
  virtual Eigen::VectorXd next(long t, const Eigen::VectorXd& p) = 0;
};

// The returned oracle shares ownership of the adversary.
LossOracle as_oracle(std::shared_ptr<Adversary> adversary);

// Period k of T/d rounds plays y_k = -1, y_i = 0 for i < k, y_i = -1/2 for
// i > k. At each period boundary the linear swap regret of the recorded
// plays over B1(d) is evaluated; past d sqrt(T) the adversary terminates and
// plays zeros.
class MovementAdversary final : public Adversary {
 public:
  MovementAdversary(Eigen::Index d, long horizon);
  AdversaryKind kind() const override { return AdversaryKind::Movement; }
  Eigen::VectorXd next(long t, const Eigen::VectorXd& x) override;

  long period_length() const { return period_; }
  bool terminated() const { return terminated_; }
  // Round after which termination fired, 0 if none.
  long terminated_at() const { return terminated_at_; }
  double regret_at_termination() const { return regret_at_termination_; }
  const std::vector<Eigen::VectorXd>& plays() const { return plays_; }
  const std::vector<Eigen::VectorXd>& losses() const { return losses_; }

 private:
  void check_boundary(long t);

  Eigen::Index d_;
  long horizon_;
  long period_;
  bool terminated_ = false;
  long terminated_at_ = 0;
  double regret_at_termination_ = 0.0;
  std::vector<Eigen::VectorXd> plays_;
  std::vector<Eigen::VectorXd> losses_;
};

// Oblivious: l_j = 1/2, l_j' = -1/2 for a uniform ordered pair j != j'.
class PunishmentAdversary final : public Adversary {
 public:
  PunishmentAdversary(Eigen::Index d, std::uint64_t seed);
  AdversaryKind kind() const override { return AdversaryKind::Punishment; }
  Eigen::VectorXd next(long t, const Eigen::VectorXd& p) override;

 private:
  Eigen::Index d_;
  Rng rng_;
};

// On P = B1(d) x Binf(d): movement against the B1 part and punishment
// against the Binf part, both halved.
class CombinedAdversary final : public Adversary {
 public:
  CombinedAdversary(Eigen::Index d, long horizon, std::uint64_t seed);
  AdversaryKind kind() const override { return AdversaryKind::Combined; }
  Eigen::VectorXd next(long t, const Eigen::VectorXd& p) override;

  static ConvexSet strategy_set(Eigen::Index d);
  static ConvexSet loss_set(Eigen::Index d);

  const MovementAdversary& movement() const { return movement_; }
  // Binf plays and unscaled punishment losses.
  const std::vector<Eigen::VectorXd>& punish_plays() const { return punish_plays_; }
  const std::vector<Eigen::VectorXd>& punish_losses() const { return punish_losses_; }

 private:
  Eigen::Index d_;
  MovementAdversary movement_;
  PunishmentAdversary punishment_;
  std::vector<Eigen::VectorXd> punish_plays_;
  std::vector<Eigen::VectorXd> punish_losses_;
};

// Iid samples from the loss set; IidVertex draws lmo(L, u) for uniform
// directions u.
class IidAdversary final : public Adversary {
 public:
  IidAdversary(ConvexSet lset, std::uint64_t seed, bool vertices);
  AdversaryKind kind() const override {
    return vertices_ ? AdversaryKind::IidVertex : AdversaryKind::IidRandom;
  }
  Eigen::VectorXd next(long t, const Eigen::VectorXd& p) override;

 private:
  ConvexSet lset_;
  Rng rng_;
  bool vertices_;
};

class ReplayAdversary final : public Adversary {
 public:
  explicit ReplayAdversary(std::vector<Eigen::VectorXd> losses);
  AdversaryKind kind() const override { return AdversaryKind::Replay; }
  // Throws InvalidArgument past the recorded horizon.
  Eigen::VectorXd next(long t, const Eigen::VectorXd& p) override;

 private:
  std::vector<Eigen::VectorXd> losses_;
};

// {i : #{t : x_{t,i} >= 1/8} >= T / (16 d)}
std::vector<Eigen::Index> vertex_coverage(const std::vector<Eigen::VectorXd>& plays, long horizon);

struct PunishmentDeviation {
  double value = 0.0;
  Eigen::MatrixXd m;  // entries in {-1, 1}
};

// max over M in [-1,1]^{d x d} of -sum_t <l_t, M x_t>, attained at
// M_{j,i} = 1 where sum_t x_{t,i} l_{t,j} < 0 and -1 elsewhere.
PunishmentDeviation best_punishment_deviation(const std::vector<Eigen::VectorXd>& plays,
                                              const std::vector<Eigen::VectorXd>& losses);

}  // namespace swapreg

#endif  // SWAPREG_ADVERSARY_HPP_
