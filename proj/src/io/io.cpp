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

#include "swapreg/io.hpp"

#include <cstdio>
#include <sstream>

#include "swapreg/errors.hpp"

namespace swapreg::io {

namespace {

Eigen::MatrixXd matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ConfigError(std::string(what) + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(std::string(what) + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<size_t>(c)].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

ConvexSet parse_set(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("set: expected an object with a type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "ball") {
    const Json& p = j.at("p");
    Norm norm = Norm::L2;
    if (p.is_string() && p.get<std::string>() == "inf") {
      norm = Norm::Linf;
    } else if (p.is_number() && p.get<double>() == 1.0) {
      norm = Norm::L1;
    } else if (p.is_number() && p.get<double>() == 2.0) {
      norm = Norm::L2;
    } else {
      throw ConfigError("ball: p must be 1, 2 or \"inf\"");
    }
    return ConvexSet::ball(norm, j.at("dim").get<Eigen::Index>(), j.value("radius", 1.0));
  }
  if (type == "simplex") return ConvexSet::simplex(j.at("dim").get<Eigen::Index>());
  if (type == "product") {
    std::vector<ConvexSet> factors;
    for (const auto& f : j.at("factors")) factors.push_back(parse_set(f));
    return ConvexSet::product(std::move(factors));
  }
  if (type == "vpolytope") return ConvexSet::vpolytope(matrix_from_json(j.at("vertices"), "vertices"));
  if (type == "hpolytope") {
    return ConvexSet::hpolytope(matrix_from_json(j.at("normals"), "normals"),
                                vector_from_json(j.at("offsets"), "offsets"));
  }
  throw ConfigError("unknown set type '" + type + "'");
}

}  // namespace

ConvexSet set_from_json(const Json& j) {
  try {
    ConvexSet s = parse_set(j);
    if (j.contains("scale")) s = ConvexSet::scaled(s, j.at("scale").get<double>());
    return s;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("set: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("set: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory(std::ostream& out, const Trajectory& traj, const std::string& header) {
  out << "# " << header << '\n';
  out << "t,invariant_value,game_gap,game_value,inst_loss,cert_norm\n";
  for (const auto& r : traj.rounds) {
    out << r.t << ',' << fmt(r.invariant_value) << ',' << fmt(r.game_gap) << ',' << fmt(r.game_value)
        << ',' << fmt(r.inst_loss) << ',' << fmt(r.cert_norm) << '\n';
  }
}

void write_trajectory(std::ostream& out, const PolyTrajectory& traj, const std::string& header) {
  out << "# " << header << '\n';
  out << "t,invariant_value,game_gap,game_value,inst_loss,cert_norm,pool_size\n";
  for (const auto& r : traj.rounds) {
    out << r.t << ',' << fmt(r.invariant_value) << ',' << fmt(r.game_gap) << ',' << fmt(r.game_value)
        << ',' << fmt(r.inst_loss) << ',' << fmt(r.cert_norm) << ',' << r.pool_size << '\n';
  }
}

void write_checkpoints(std::ostream& out, const std::vector<Checkpoint>& rows) {
  out << "t,linear_swap_regret,external_regret,app_loss_cert,certified\n";
  for (const auto& c : rows) {
    out << c.t << ',' << fmt(c.linear_swap) << ',' << fmt(c.external) << ',' << fmt(c.app_loss_cert)
        << ',' << (c.certified ? 1 : 0) << '\n';
  }
}

void write_transcript(std::ostream& out, const PlayHistory& h) {
  const Eigen::Index d = h.pset.dim();
  out << 't';
  for (Eigen::Index i = 1; i <= d; ++i) out << ",p_" << i;
  for (Eigen::Index i = 1; i <= h.lset.dim(); ++i) out << ",l_" << i;
  out << '\n';
  for (size_t t = 0; t < h.size(); ++t) {
    out << t + 1;
    for (Eigen::Index i = 0; i < h.plays[t].size(); ++i) out << ',' << fmt(h.plays[t](i));
    for (Eigen::Index i = 0; i < h.losses[t].size(); ++i) out << ',' << fmt(h.losses[t](i));
    out << '\n';
  }
}

void write_truncated(std::ostream& out) { out << "truncated\n"; }

Transcript read_transcript(std::istream& in) {
  std::string line;
  std::vector<std::string> cols;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    break;
  }
  if (cols.empty() || cols[0] != "t") throw ConfigError("transcript: missing header row");
  Eigen::Index dp = 0;
  Eigen::Index dl = 0;
  for (size_t i = 1; i < cols.size(); ++i) {
    const bool is_p = cols[i] == "p_" + std::to_string(dp + 1);
    const bool is_l = cols[i] == "l_" + std::to_string(dl + 1);
    if (is_p && dl == 0) {
      ++dp;
    } else if (is_l) {
      ++dl;
    } else {
      throw ConfigError("transcript: unexpected column '" + cols[i] + "'");
    }
  }
  if (dp == 0 || dl == 0) throw ConfigError("transcript: needs p_ and l_ columns");

  Transcript tr;
  long expect = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "truncated") throw ConfigError("transcript: run was truncated");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError("transcript: bad number '" + cell + "' in row " + std::to_string(expect));
      }
    }
    if (static_cast<Eigen::Index>(vals.size()) != 1 + dp + dl) {
      throw ConfigError("transcript: row " + std::to_string(expect) + " has the wrong width");
    }
    if (vals[0] != static_cast<double>(expect)) {
      throw ConfigError("transcript: rounds must be numbered 1, 2, ...");
    }
    tr.plays.push_back(Eigen::Map<Eigen::VectorXd>(vals.data() + 1, dp));
    tr.losses.push_back(Eigen::Map<Eigen::VectorXd>(vals.data() + 1 + dp, dl));
    ++expect;
  }
  return tr;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json report_to_json(const RegretReport& r, bool with_certificates) {
  Json j;
  j["linear_swap"] = r.linear_swap;
  j["external"] = r.external;
  j["app_loss_cert"] = with_certificates ? Json(r.app_loss_cert) : Json(nullptr);
  j["profile_swap_dist_cert"] = with_certificates ? Json(r.profile_swap_dist_cert) : Json(nullptr);
  j["bound_8d_sqrtT"] = r.bound_8d_sqrt_t;
  j["frobenius_max_observed"] = r.frobenius_max_observed;
  j["deviation"] = {{"M", to_json(r.best_deviation.m)},
                    {"a", to_json(r.best_deviation.a)},
                    {"certified", r.best_deviation.certified}};
  return j;
}

}  // namespace swapreg::io
