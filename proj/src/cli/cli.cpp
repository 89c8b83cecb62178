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

#include "swapreg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "swapreg/errors.hpp"
#include "swapreg/evaluate.hpp"
#include "swapreg/john.hpp"
#include "swapreg/lp.hpp"

namespace swapreg::cli {

namespace fs = std::filesystem;

LogLevel log_level() {
  const char* env = std::getenv("SWAPREG_LOG");
  if (env == nullptr) return LogLevel::Info;
  const std::string v(env);
  if (v == "error") return LogLevel::Error;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

namespace {

void info(std::ostream& err, const std::string& msg) {
  if (log_level() != LogLevel::Error) err << "[info] " << msg << '\n';
}

void debug(std::ostream& err, const std::string& msg) {
  if (log_level() == LogLevel::Debug) err << "[debug] " << msg << '\n';
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Alg1:
      return "alg1";
    case Algorithm::Alg2Preconditioned:
      return "alg2_preconditioned";
    case Algorithm::Alg4Approx:
      return "alg4_approx";
    case Algorithm::Alg3Poly:
      return "alg3_poly";
  }
  return "unknown";
}

io::Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return io::Json::parse(in);
  } catch (const io::Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

EpsSchedule parse_eps(const io::Json& j) {
  EpsSchedule eps;
  if (j.is_null()) return eps;
  const std::string kind = j.value("kind", std::string("none"));
  if (kind == "none") {
    eps.kind = EpsSchedule::Kind::None;
  } else if (kind == "constant") {
    eps.kind = EpsSchedule::Kind::Constant;
  } else if (kind == "inv_sqrt") {
    eps.kind = EpsSchedule::Kind::InvSqrt;
  } else {
    throw ConfigError("eps_schedule: unknown kind '" + kind + "'");
  }
  eps.value = j.value("value", 0.0);
  eps.max_doublings = j.value("max_doublings", eps.max_doublings);
  if (eps.kind != EpsSchedule::Kind::None && !(eps.value > 0.0)) {
    throw ConfigError("eps_schedule: value must be positive");
  }
  return eps;
}

// Plays and losses as the adversary saw them, kept for truncated output.
struct Recorder {
  std::vector<Eigen::VectorXd> plays;
  std::vector<Eigen::VectorXd> losses;
};

LossOracle recording(LossOracle inner, std::shared_ptr<Recorder> rec, std::ostream& err) {
  return [inner = std::move(inner), rec, &err](long t, const Eigen::VectorXd& p) {
    Eigen::VectorXd l = inner(t, p);
    rec->plays.push_back(p);
    rec->losses.push_back(l);
    debug(err, "round " + std::to_string(t));
    return l;
  };
}

std::string header_line(const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "algorithm=" << to_string(cfg.algorithm) << " adversary=" << cfg.adversary
    << " seed=" << cfg.seed << " T=" << cfg.horizon << " set=" << cfg.pset.describe()
    << " loss_set=" << cfg.lset.describe();
  return s.str();
}

PlayHistory prefix(const PlayHistory& h, long t) {
  PlayHistory out{h.pset, h.lset, {}, {}, {}};
  out.plays.assign(h.plays.begin(), h.plays.begin() + t);
  out.losses.assign(h.losses.begin(), h.losses.begin() + t);
  return out;
}

double nan_value() { return std::nan(""); }

}  // namespace

std::vector<long> default_checkpoints(long horizon) {
  std::vector<long> out;
  for (long c = 1; c < horizon; c *= 2) out.push_back(c);
  out.push_back(horizon);
  return out;
}

ExperimentConfig parse_config(const io::Json& j, std::optional<std::uint64_t> seed,
                              const std::string& base_dir) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.seed = seed.value_or(j.value("seed", std::uint64_t{0}));

    // Adversary, either "name" or {"type": name, ...}.
    io::Json adv = j.value("adversary", io::Json("iid"));
    if (adv.is_string()) adv = io::Json{{"type", adv.get<std::string>()}};
    cfg.adversary = adv.value("type", std::string("iid"));
    cfg.adversary_d = adv.value("d", j.value("d", Eigen::Index{0}));
    const bool lower_bound = cfg.adversary == "combined" || cfg.adversary == "movement" ||
                             cfg.adversary == "punishment";
    if (lower_bound && cfg.adversary_d < 2) {
      throw ConfigError("adversary '" + cfg.adversary + "' needs d >= 2");
    }
    if (cfg.adversary == "replay") {
      fs::path path = adv.at("transcript").get<std::string>();
      if (path.is_relative()) path = fs::path(base_dir) / path;
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read " + path.string());
      cfg.replay = io::read_transcript(in).losses;
    } else if (!lower_bound && cfg.adversary != "iid" && cfg.adversary != "iid_vertex") {
      throw ConfigError("unknown adversary '" + cfg.adversary + "'");
    }

    // Sets. The lower-bound adversaries fix their own defaults.
    const Eigen::Index d = cfg.adversary_d;
    if (j.contains("set")) {
      cfg.pset = io::set_from_json(j.at("set"));
    } else if (cfg.adversary == "combined") {
      cfg.pset = CombinedAdversary::strategy_set(d);
    } else if (cfg.adversary == "movement") {
      cfg.pset = ConvexSet::ball(Norm::L1, d);
    } else if (cfg.adversary == "punishment") {
      cfg.pset = ConvexSet::ball(Norm::Linf, d);
    } else {
      throw ConfigError("config needs a \"set\"");
    }
    // Algorithm, either "name" or {"name": ..., options}.
    io::Json alg = j.value("algorithm", io::Json("alg1"));
    if (alg.is_string()) alg = io::Json{{"name", alg.get<std::string>()}};
    const std::string name = alg.value("name", std::string("alg1"));
    if (name == "alg1") {
      cfg.algorithm = Algorithm::Alg1;
    } else if (name == "alg2_preconditioned" || name == "alg2") {
      cfg.algorithm = Algorithm::Alg2Preconditioned;
      if (!is_symmetric(cfg.pset) && cfg.pset.as<set_node::Simplex>() == nullptr) {
        throw UnsupportedSet("alg2_preconditioned needs a symmetric set or a simplex, got " +
                             cfg.pset.describe());
      }
    } else if (name == "alg4_approx" || name == "alg4") {
      cfg.algorithm = Algorithm::Alg4Approx;
      cfg.step.mode = Mode::Approximate;
      cfg.step.solver = GameSolver::Fpl;
      cfg.step.fpl_iters = alg.value("iters", cfg.step.fpl_iters);
      if (cfg.step.fpl_iters < 1) throw ConfigError("alg4_approx: iters must be positive");
      cfg.step.eps = parse_eps(alg.value("eps_schedule", io::Json()));
    } else if (name == "alg3_poly" || name == "alg3") {
      cfg.algorithm = Algorithm::Alg3Poly;
      cfg.degree = alg.value("degree", 2);
      cfg.poly.do_iters = alg.value("do_iters", cfg.poly.do_iters);
      cfg.poly.pool_cap = alg.value("pool_cap", cfg.poly.pool_cap);
      cfg.poly.sample_play = alg.value("sample_play", false);
      if (cfg.degree < 1 || cfg.poly.do_iters < 1) throw ConfigError("alg3_poly: bad options");
    } else {
      throw ConfigError("unknown algorithm '" + name + "'");
    }
    if (j.contains("loss_set")) {
      cfg.lset = io::set_from_json(j.at("loss_set"));
    } else if (cfg.adversary == "combined") {
      cfg.lset = CombinedAdversary::loss_set(d);
    } else if (cfg.adversary == "movement") {
      cfg.lset = ConvexSet::ball(Norm::Linf, d);
    } else if (cfg.adversary == "punishment") {
      cfg.lset = ConvexSet::ball(Norm::L1, d);
    } else {
      try {
        cfg.lset = polar(cfg.pset);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("no default loss_set: ") + e.what());
      }
    }
    if (cfg.lset.dim() != cfg.pset.dim()) throw ConfigError("set and loss_set dimensions differ");
    if (cfg.adversary == "combined" && cfg.pset.dim() != 2 * d) {
      throw ConfigError("combined adversary needs a set of dimension 2d");
    }
    if ((cfg.adversary == "movement" || cfg.adversary == "punishment") && cfg.pset.dim() != d) {
      throw ConfigError("adversary dimension does not match the set");
    }

    cfg.step.seed = cfg.seed;
    cfg.poly.seed = cfg.seed;

    const long default_t = cfg.replay.empty() ? 0 : static_cast<long>(cfg.replay.size());
    cfg.horizon = j.value("T", default_t);
    if (cfg.horizon < 1) throw ConfigError("T must be at least 1");
    if (!cfg.replay.empty() && cfg.horizon > static_cast<long>(cfg.replay.size())) {
      throw ConfigError("T exceeds the replay transcript");
    }
    if ((cfg.adversary == "combined" || cfg.adversary == "movement") && cfg.horizon % d != 0) {
      throw ConfigError("T must be divisible by d for the movement adversary");
    }
    if (j.contains("checkpoints")) {
      cfg.checkpoints = j.at("checkpoints").get<std::vector<long>>();
      std::sort(cfg.checkpoints.begin(), cfg.checkpoints.end());
      cfg.checkpoints.erase(std::unique(cfg.checkpoints.begin(), cfg.checkpoints.end()),
                            cfg.checkpoints.end());
      for (long c : cfg.checkpoints) {
        if (c < 1 || c > cfg.horizon) throw ConfigError("checkpoints must lie in [1, T]");
      }
    } else {
      cfg.checkpoints = default_checkpoints(cfg.horizon);
    }
    return cfg;
  } catch (const io::Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::shared_ptr<Adversary> make_adversary(const ExperimentConfig& cfg) {
  if (cfg.adversary == "iid") return std::make_shared<IidAdversary>(cfg.lset, cfg.seed, false);
  if (cfg.adversary == "iid_vertex") return std::make_shared<IidAdversary>(cfg.lset, cfg.seed, true);
  if (cfg.adversary == "combined") {
    return std::make_shared<CombinedAdversary>(cfg.adversary_d, cfg.horizon, cfg.seed);
  }
  if (cfg.adversary == "movement") {
    return std::make_shared<MovementAdversary>(cfg.adversary_d, cfg.horizon);
  }
  if (cfg.adversary == "punishment") {
    return std::make_shared<PunishmentAdversary>(cfg.adversary_d, cfg.seed);
  }
  if (cfg.adversary == "replay") return std::make_shared<ReplayAdversary>(cfg.replay);
  throw ConfigError("unknown adversary '" + cfg.adversary + "'");
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: ConfigError: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedSet& e) {
    err << "error: UnsupportedSet: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kRuntimeFault;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFault;
  }
}

namespace {

struct RunResult {
  PlayHistory history;
  std::vector<double> cert_by_round;
  double certificate = 0.0;
  double set_bound = 0.0;
  double mean_gap = 0.0;
};

void write_partial(const fs::path& dir, const ExperimentConfig& cfg, const Recorder& rec) {
  {
    std::ofstream out(dir / "trajectory.csv");
    out << "# " << header_line(cfg) << '\n';
    out << "t,invariant_value,game_gap,game_value,inst_loss,cert_norm\n";
    io::write_truncated(out);
  }
  std::ofstream out(dir / "transcript.csv");
  PlayHistory h{cfg.pset, cfg.lset, rec.plays, rec.losses, {}};
  io::write_transcript(out, h);
  io::write_truncated(out);
}

template <class Traj>
RunResult summarize(const Traj& traj, const ExperimentConfig& cfg) {
  std::vector<double> certs;
  for (const auto& r : traj.rounds) certs.push_back(r.cert_norm);
  return RunResult{history_of(traj, cfg.pset, cfg.lset), std::move(certs), traj.certificate(),
                   traj.set_bound, traj.mean_gap()};
}

RunResult execute(const ExperimentConfig& cfg, const LossOracle& oracle, const fs::path& dir) {
  if (cfg.algorithm == Algorithm::Alg3Poly) {
    PolyConfig pc{cfg.pset, cfg.lset, cfg.degree, cfg.horizon, cfg.poly};
    const PolyTrajectory traj = poly_run(pc, oracle);
    auto out = open_out(dir / "trajectory.csv");
    io::write_trajectory(out, traj, header_line(cfg));
    return summarize(traj, cfg);
  }
  RunConfig rc{cfg.pset, cfg.lset, cfg.horizon, cfg.step};
  const Trajectory traj = cfg.algorithm == Algorithm::Alg2Preconditioned
                              ? run_preconditioned(rc, oracle)
                              : run(rc, oracle);
  auto out = open_out(dir / "trajectory.csv");
  io::write_trajectory(out, traj, header_line(cfg));
  return summarize(traj, cfg);
}

}  // namespace

int cmd_run(const io::Json& config, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err, const std::string& base_dir) {
  return guarded(err, [&]() -> int {
    const ExperimentConfig cfg = parse_config(config, seed, base_dir);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    auto adversary = make_adversary(cfg);
    auto rec = std::make_shared<Recorder>();
    info(err, "run " + header_line(cfg));
    const auto t0 = std::chrono::steady_clock::now();

    std::optional<RunResult> ran;
    try {
      ran.emplace(execute(cfg, recording(as_oracle(adversary), rec, err), dir));
    } catch (const Error&) {
      write_partial(dir, cfg, *rec);
      throw;
    }
    const RunResult& res = *ran;
    const double run_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
      auto f = open_out(dir / "transcript.csv");
      io::write_transcript(f, res.history);
    }

    // Checkpoints and the final report. Sets without a facet description
    // have no linear swap evaluation.
    bool evaluable = true;
    std::vector<io::Checkpoint> rows;
    for (long c : cfg.checkpoints) {
      io::Checkpoint row;
      row.t = c;
      const PlayHistory h = prefix(res.history, c);
      row.external = external_regret(h);
      row.app_loss_cert = res.cert_by_round[static_cast<size_t>(c - 1)];
      row.linear_swap = nan_value();
      if (evaluable) {
        try {
          const auto sw = linear_swap_regret(h);
          row.linear_swap = sw.value;
          row.certified = sw.dev.certified;
        } catch (const RepresentationMissing& e) {
          evaluable = false;
          info(err, std::string("linear swap regret unavailable: ") + e.what());
        }
      }
      info(err, "checkpoint t=" + std::to_string(c) + " linear_swap=" + io::fmt(row.linear_swap));
      rows.push_back(row);
    }
    {
      auto f = open_out(dir / "checkpoints.csv");
      io::write_checkpoints(f, rows);
    }

    io::Json report;
    const double d = static_cast<double>(cfg.pset.dim());
    const double bound = 8.0 * d * std::sqrt(static_cast<double>(cfg.horizon));
    if (evaluable) {
      const RegretReport r = regret_report(res.history, res.certificate);
      report = io::report_to_json(r);
      const double margin = bound - r.linear_swap;
      out << "8d√T bound: " << (margin >= 0.0 ? "SATISFIED" : "VIOLATED") << " margin=" << io::fmt(margin)
          << '\n';
    } else {
      report["linear_swap"] = nullptr;
      report["external"] = external_regret(res.history);
      report["app_loss_cert"] = res.certificate;
      report["profile_swap_dist_cert"] = res.certificate;
      report["bound_8d_sqrtT"] = bound;
      report["frobenius_max_observed"] = nullptr;
      report["deviation"] = nullptr;
      out << "8d√T bound: UNEVALUATED (no facet description)\n";
    }
    {
      auto f = open_out(dir / "report.json");
      f << report.dump(2) << '\n';
    }

    io::Json summary;
    summary["algorithm"] = to_string(cfg.algorithm);
    summary["adversary"] = cfg.adversary;
    summary["seed"] = cfg.seed;
    summary["T"] = cfg.horizon;
    summary["set"] = cfg.pset.describe();
    summary["loss_set"] = cfg.lset.describe();
    summary["certificate"] = res.certificate;
    summary["set_bound"] = res.set_bound;
    summary["certificate_bound"] = 2.0 * res.set_bound / std::sqrt(static_cast<double>(cfg.horizon));
    summary["mean_gap"] = res.mean_gap;
    summary["run_seconds"] = run_seconds;
    if (const auto* comb = dynamic_cast<const CombinedAdversary*>(adversary.get())) {
      const auto& mv = comb->movement();
      summary["terminated"] = mv.terminated();
      summary["terminated_at"] = mv.terminated_at();
      summary["vertex_coverage"] = vertex_coverage(mv.plays(), cfg.horizon).size();
      summary["punishment_deviation"] = best_punishment_deviation(mv.plays(), comb->punish_losses()).value;
    }
    {
      auto f = open_out(dir / "run_summary.json");
      f << summary.dump(2) << '\n';
    }
    out << "report: " << (dir / "report.json").string() << '\n';
    return kOk;
  });
}

int cmd_eval(const std::string& history_csv, const io::Json& set_spec,
             const std::optional<io::Json>& loss_spec, const std::string& out_dir, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&]() -> int {
    std::ifstream in(history_csv);
    if (!in) throw ConfigError("cannot read " + history_csv);
    const io::Transcript tr = io::read_transcript(in);
    const ConvexSet pset = io::set_from_json(set_spec);
    const ConvexSet lset = loss_spec ? io::set_from_json(*loss_spec) : polar(pset);
    if (tr.plays.front().size() != pset.dim() || tr.losses.front().size() != lset.dim()) {
      throw ConfigError("transcript columns do not match the set dimension");
    }
    for (size_t t = 0; t < tr.losses.size(); ++t) {
      if (!membership(lset, tr.losses[t])) {
        throw AdversaryFault("loss of round " + std::to_string(t + 1) + " is outside the loss set");
      }
    }
    PlayHistory h{pset, lset, tr.plays, tr.losses, {}};
    const RegretReport r = regret_report(h, 0.0);
    const io::Json report = io::report_to_json(r, false);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      auto f = open_out(fs::path(out_dir) / "report.json");
      f << report.dump(2) << '\n';
    }
    out << report.dump(2) << '\n';
    return kOk;
  });
}

int cmd_lowerbound(Eigen::Index d, std::optional<long> horizon, std::uint64_t seed,
                   const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const long t = horizon.value_or(16L * d * d * (d + 1) * (d + 1));
  io::Json config = {{"algorithm", "alg2_preconditioned"},
                     {"adversary", {{"type", "combined"}, {"d", d}}},
                     {"T", t},
                     {"checkpoints", {t}}};
  const int code = cmd_run(config, out_dir, seed, out, err);
  if (code != kOk) return code;
  return guarded(err, [&]() -> int {
    const io::Json report = read_json_file(fs::path(out_dir) / "report.json");
    const double swap = report.at("linear_swap").get<double>();
    const double ext = report.at("external").get<double>();
    out << "lower bound d=" << d << " T=" << t << ": linear_swap=" << io::fmt(swap)
        << " external=" << io::fmt(ext) << " certified=" << report.at("deviation").at("certified")
        << '\n';
    return kOk;
  });
}

int cmd_selftest(std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    bool all = true;
    auto report = [&](const std::string& name, bool ok) {
      out << "selftest " << name << ": " << (ok ? "PASS" : "FAIL") << '\n';
      all = all && ok;
    };

    {
      const auto p = ConvexSet::ball(Norm::Linf, 3);
      const auto l = ConvexSet::ball(Norm::L1, 3);
      RunConfig rc{p, l, 100, {}};
      const auto traj = run(rc, as_oracle(std::make_shared<IidAdversary>(l, 1, false)));
      bool ok = true;
      for (const auto& r : traj.rounds) ok = ok && r.invariant_value <= 1e-7;
      report("round invariant", ok);
      report("certificate", traj.certificate() <= 2.0 * traj.max_round_norm() / 10.0 + 1e-9);
      const auto h = history_of(traj, p, l);
      const auto sw = linear_swap_regret(h);
      report("regret ordering", sw.dev.certified && sw.value >= external_regret(h) - 1e-9 &&
                                    sw.value <= 8.0 * 3.0 * 10.0);
    }
    {
      const auto [pre, john] = john_precondition(ConvexSet::ball(Norm::Linf, 3));
      const auto [res, mass] = john_residuals(john);
      report("john decomposition", res <= 1e-6 && mass <= 1e-6);
    }
    {
      std::vector<Eigen::VectorXd> vs;
      for (int i = 0; i < 4; ++i) vs.push_back(Eigen::VectorXd::Unit(4, i));
      const auto r = pythagorean_check(vs, 1.0, std::vector<double>(4, 0.0));
      report("pythagorean", r.holds && std::abs(r.lhs - r.rhs) <= 1e-12);
    }
    {
      lp::LpProblem prob(2);
      prob.objective << -1.0, -1.0;
      prob.add_ineq(Eigen::RowVector2d(1.0, 2.0), 4.0);
      prob.add_ineq(Eigen::RowVector2d(3.0, 1.0), 6.0);
      const auto s = lp::solve_lp(prob);
      report("lp", s.optimal() && std::abs(s.value + 2.8) <= 1e-9);
    }
    return all ? kOk : kRuntimeFault;
  });
}

int cmd_sweep(const io::Json& sweep, const std::string& out_dir, std::ostream& out, std::ostream& err,
              const std::string& base_dir) {
  std::vector<io::Json> configs;
  std::vector<std::optional<std::uint64_t>> seeds;
  std::vector<std::string> dirs;
  const int parsed = guarded(err, [&]() -> int {
    if (!sweep.is_object() || !sweep.contains("cells") || !sweep.at("cells").is_array()) {
      throw ConfigError("sweep: expected {\"cells\": [...]}");
    }
    for (const auto& cell : sweep.at("cells")) {
      const io::Json& c = cell.at("config");
      configs.push_back(c.is_string() ? read_json_file(fs::path(base_dir) / c.get<std::string>()) : c);
      seeds.push_back(cell.contains("seed") ? std::optional<std::uint64_t>(cell.at("seed").get<std::uint64_t>())
                                            : std::nullopt);
      dirs.push_back((fs::path(out_dir) / ("cell_" + std::to_string(dirs.size()))).string());
    }
    return kOk;
  });
  if (parsed != kOk) return parsed;

  std::vector<int> codes(configs.size(), kOk);
  std::vector<std::string> logs(configs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < configs.size(); i = next++) {
      std::ostringstream o;
      std::ostringstream e;
      codes[i] = cmd_run(configs[i], dirs[i], seeds[i], o, e, base_dir);
      logs[i] = o.str() + e.str();
    }
  };
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(configs.size(), std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int worst = kOk;
  for (size_t i = 0; i < configs.size(); ++i) {
    out << "cell " << i << " exit=" << codes[i] << " out=" << dirs[i] << '\n' << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace swapreg::cli
