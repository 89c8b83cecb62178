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

// JSON set descriptions, CSV artifacts and report serialization.

#ifndef SWAPREG_IO_HPP_
#define SWAPREG_IO_HPP_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "swapreg/engine.hpp"
#include "swapreg/evaluate.hpp"
#include "swapreg/geometry.hpp"
#include "swapreg/polydim.hpp"

namespace swapreg::io {

using Json = nlohmann::json;

// {"type":"ball","p":1|2|"inf","dim":d,"radius":r} | {"type":"simplex","dim":d}
// | {"type":"product","factors":[...]} | {"type":"vpolytope","vertices":[[...]]}
// | {"type":"hpolytope","normals":[[...]],"offsets":[...]}
// Throws ConfigError.
ConvexSet set_from_json(const Json& j);

// %.17g
std::string fmt(double v);

struct Checkpoint {
  long t = 0;
  double linear_swap = 0.0;
  double external = 0.0;
  double app_loss_cert = 0.0;
  bool certified = false;
};

// First line "# key=value ..." from `header`, then the column header.
void write_trajectory(std::ostream& out, const Trajectory& traj, const std::string& header);
void write_trajectory(std::ostream& out, const PolyTrajectory& traj, const std::string& header);
void write_checkpoints(std::ostream& out, const std::vector<Checkpoint>& rows);
// t, p_1..p_d, l_1..l_d
void write_transcript(std::ostream& out, const PlayHistory& h);
// Final row for runs cut short by a fault.
void write_truncated(std::ostream& out);

struct Transcript {
  std::vector<Eigen::VectorXd> plays;
  std::vector<Eigen::VectorXd> losses;
};

// Skips '#' lines. Throws ConfigError on schema mismatch or a truncated
// marker.
Transcript read_transcript(std::istream& in);

Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::VectorXd& v);
// Certificate fields are null when `with_certificates` is false.
Json report_to_json(const RegretReport& r, bool with_certificates = true);

}  // namespace swapreg::io

#endif  // SWAPREG_IO_HPP_
