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

#include <sstream>
#include <string>

#include "doctest.h"
#include "swapreg/cli.hpp"
#include "swapreg/errors.hpp"
#include "swapreg/io.hpp"
#include "test_support.hpp"

using swapreg::ConvexSet;
using swapreg::io::Json;

TEST_CASE("io: set descriptions") {
  auto b = swapreg::io::set_from_json(Json::parse(R"({"type":"ball","p":"inf","dim":3,"radius":2})"));
  CHECK(b.dim() == 3);
  CHECK(swapreg::support(b, Eigen::Vector3d(1, 1, 1)) == doctest::Approx(6.0));
  auto l1 = swapreg::io::set_from_json(Json::parse(R"({"type":"ball","p":1,"dim":2})"));
  CHECK(swapreg::support(l1, Eigen::Vector2d(1, 3)) == doctest::Approx(3.0));
  auto prod = swapreg::io::set_from_json(Json::parse(
      R"({"type":"product","factors":[{"type":"simplex","dim":2},{"type":"ball","p":2,"dim":1}]})"));
  CHECK(prod.dim() == 3);
  auto v = swapreg::io::set_from_json(Json::parse(R"({"type":"vpolytope","vertices":[[1,0],[0,1],[-1,-1]]})"));
  CHECK(swapreg::membership(v, Eigen::Vector2d(0, 0)));
  auto h = swapreg::io::set_from_json(
      Json::parse(R"({"type":"hpolytope","normals":[[1,0],[-1,0],[0,1],[0,-1]],"offsets":[1,1,2,2]})"));
  CHECK(swapreg::support(h, Eigen::Vector2d(0, 1)) == doctest::Approx(2.0));

  for (const char* bad : {R"({"type":"cube","dim":2})", R"({"type":"ball","p":3,"dim":2})",
                          R"({"type":"ball","p":1})", R"({"type":"vpolytope","vertices":[[1,0],[1]]})",
                          R"([1,2])"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(swapreg::io::set_from_json(Json::parse(bad)), swapreg::ConfigError);
  }
}

TEST_CASE("io: seventeen digit round trip") {
  swapreg::testing::Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = swapreg::testing::gaussian(rng, 1)(0) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(std::stod(swapreg::io::fmt(x)) == x);
  }
}

TEST_CASE("io: transcript round trip and schema errors") {
  swapreg::PlayHistory h{ConvexSet::ball(swapreg::Norm::Linf, 2), ConvexSet::ball(swapreg::Norm::L1, 2),
                         {}, {}, {}};
  swapreg::testing::Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    h.plays.push_back(swapreg::testing::uniform(rng, 2, -1.0, 1.0));
    h.losses.push_back(swapreg::testing::uniform(rng, 2, -0.5, 0.5));
  }
  std::stringstream s;
  swapreg::io::write_transcript(s, h);
  const auto tr = swapreg::io::read_transcript(s);
  REQUIRE(tr.plays.size() == 5);
  for (size_t t = 0; t < 5; ++t) {
    CHECK((tr.plays[t] - h.plays[t]).norm() == 0.0);
    CHECK((tr.losses[t] - h.losses[t]).norm() == 0.0);
  }
  for (const char* bad : {"", "t,p_1\n1,0\n", "t,p_1,l_1\n2,0,0\n", "t,p_1,l_1\n1,0\n",
                          "t,p_1,l_1\n1,x,0\n", "t,l_1,p_1\n1,0,0\n", "t,p_1,l_1\n1,0,0\ntruncated\n"}) {
    CAPTURE(bad);
    std::stringstream in(bad);
    CHECK_THROWS_AS(swapreg::io::read_transcript(in), swapreg::ConfigError);
  }
}

TEST_CASE("cli: config parsing") {
  auto cfg = swapreg::cli::parse_config(Json::parse(R"({"set":{"type":"ball","p":"inf","dim":2},"T":10})"));
  CHECK(cfg.lset.describe() == swapreg::polar(cfg.pset).describe());
  CHECK(cfg.checkpoints == std::vector<long>{1, 2, 4, 8, 10});
  CHECK(swapreg::cli::default_checkpoints(8) == std::vector<long>{1, 2, 4, 8});
  CHECK(swapreg::cli::default_checkpoints(1) == std::vector<long>{1});

  auto comb = swapreg::cli::parse_config(Json::parse(R"({"adversary":"combined","d":4,"T":64})"), 7);
  CHECK(comb.pset.dim() == 8);
  CHECK(comb.seed == 7);
  CHECK(swapreg::cli::make_adversary(comb)->kind() == swapreg::AdversaryKind::Combined);

  auto fpl = swapreg::cli::parse_config(Json::parse(
      R"({"set":{"type":"ball","p":"inf","dim":2},"T":5,"algorithm":{"name":"alg4_approx","iters":300,"eps_schedule":{"kind":"inv_sqrt","value":0.5}}})"));
  CHECK(fpl.step.mode == swapreg::Mode::Approximate);
  CHECK(fpl.step.fpl_iters == 300);
  CHECK(fpl.step.eps.kind == swapreg::EpsSchedule::Kind::InvSqrt);

  for (const char* bad : {R"({"T":5})", R"({"set":{"type":"ball","p":"inf","dim":2},"T":0})",
                          R"({"set":{"type":"ball","p":"inf","dim":2},"T":5,"checkpoints":[6]})",
                          R"({"set":{"type":"ball","p":"inf","dim":2},"T":5,"algorithm":"alg9"})",
                          R"({"set":{"type":"ball","p":"inf","dim":2},"T":5,"adversary":"nature"})",
                          R"({"adversary":"combined","d":4,"T":63})",
                          R"({"set":{"type":"ball","p":"inf","dim":2},"loss_set":{"type":"ball","p":1,"dim":3},"T":5})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(swapreg::cli::parse_config(Json::parse(bad)), swapreg::ConfigError);
  }
  CHECK_THROWS_AS(swapreg::cli::parse_config(Json::parse(
                      R"({"set":{"type":"vpolytope","vertices":[[0,0],[1,0],[0,2],[1,1]]},"T":5,"algorithm":"alg2"})")),
                  swapreg::UnsupportedSet);
}
