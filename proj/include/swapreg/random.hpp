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

#ifndef SWAPREG_RANDOM_HPP_
#define SWAPREG_RANDOM_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace swapreg {

// Every stochastic component takes an explicit generator of this type.
using Rng = std::mt19937_64;

inline Eigen::VectorXd standard_normal(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Eigen::VectorXd uniform_box(Rng& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Uniform direction on the unit sphere.
inline Eigen::VectorXd unit_direction(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v = standard_normal(rng, n);
  double norm = v.norm();
  while (norm == 0.0) {
    v = standard_normal(rng, n);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace swapreg

#endif  // SWAPREG_RANDOM_HPP_
