// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rispm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

namespace rispm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) {
    throw UsageError(fmt::format("config section '{}' must be an object", where));
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw UsageError(fmt::format("unknown config key '{}{}'", where.empty() ? "" : where + ".",
                                   key));
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& target) {
  if (j.contains(key)) {
    target = j.at(key).get<T>();
  }
}

RcgConfig rcg_from_json(const json& j, RcgConfig cfg, const std::string& where) {
  reject_unknown(j, {"max_iters", "grad_tol", "armijo_c1", "backtrack_factor", "initial_step",
                     "max_backtracks", "beta_rule"},
                 where);
  read_if(j, "max_iters", cfg.max_iters);
  read_if(j, "grad_tol", cfg.grad_tol);
  read_if(j, "armijo_c1", cfg.armijo_c1);
  read_if(j, "backtrack_factor", cfg.backtrack_factor);
  read_if(j, "initial_step", cfg.initial_step);
  read_if(j, "max_backtracks", cfg.max_backtracks);
  if (j.contains("beta_rule")) {
    cfg.beta_rule = parse_beta_rule(j.at("beta_rule").get<std::string>());
  }
  return cfg;
}

json rcg_to_json(const RcgConfig& c) {
  return {{"max_iters", c.max_iters},       {"grad_tol", c.grad_tol},
          {"armijo_c1", c.armijo_c1},       {"backtrack_factor", c.backtrack_factor},
          {"initial_step", c.initial_step}, {"max_backtracks", c.max_backtracks},
          {"beta_rule", std::string(to_string(c.beta_rule))}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  return f;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir = resolve_out_dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<double> targets_for(const RunConfig& cfg, int users) {
  if (!cfg.targets.empty()) {
    if (static_cast<int>(cfg.targets.size()) != users) {
      throw UsageError(fmt::format("{} targets given for {} users", cfg.targets.size(), users));
    }
    return cfg.targets;
  }
  return std::vector<double>(static_cast<std::size_t>(users), std::pow(10.0, -cfg.tau));
}

double effective_tau(const std::vector<double>& targets) {
  return -std::log10(*std::min_element(targets.begin(), targets.end()));
}

// Instance `index` of a run: from the channel fixture when one is configured,
// otherwise Rayleigh channels seeded from (seed, index).
Instance build_instance(const RunConfig& cfg, int index) {
  const PskConstellation constellation(cfg.order);
  std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  std::optional<ChannelSet> channels;
  if (!cfg.channel_file.empty()) {
    std::ifstream f(cfg.channel_file);
    if (!f) throw UsageError(fmt::format("cannot open channel file '{}'", cfg.channel_file));
    channels.emplace(read_channel_set(f, cfg.noise_var));
  } else {
    channels.emplace(generate_rayleigh(cfg.elements, cfg.users, cfg.noise_var, rng));
  }
  const int users = channels->users();
  SymbolVector symbols = cfg.symbols.empty() ? random_symbols(users, rng, constellation)
                                             : SymbolVector(cfg.symbols, constellation);
  if (static_cast<int>(symbols.size()) != users) {
    throw UsageError(fmt::format("{} symbols given for {} users", symbols.size(), users));
  }
  return Instance{std::move(*channels), std::move(symbols), constellation, targets_for(cfg, users)};
}

json solve_result_json(const SolveResult& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"power", t.power}, {"f_value", t.f_value},
                     {"branch", std::string(to_string(t.branch))}});
  }
  json theta = json::array();
  for (Eigen::Index n = 0; n < r.theta_opt.size(); ++n) {
    theta.push_back({r.theta_opt[n].real(), r.theta_opt[n].imag()});
  }
  return {{"p_opt", r.p_opt},
          {"p_n_db", r.p_n_db},
          {"feasible", r.feasible},
          {"iterations", r.iterations},
          {"theta_opt", theta},
          {"trace", trace}};
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig base) {
  RunConfig cfg = std::move(base);
  reject_unknown(j, {"mode", "seed", "out", "threads", "system", "bisection", "rcg", "rcg_init",
                     "sweep", "simulate", "check"},
                 "");
  try {
    read_if(j, "mode", cfg.mode);
    read_if(j, "seed", cfg.seed);
    read_if(j, "out", cfg.out_dir);
    read_if(j, "threads", cfg.threads);
    if (j.contains("system")) {
      const json& s = j.at("system");
      reject_unknown(s, {"elements", "users", "order", "noise_var", "tau", "targets",
                         "channel_file", "symbols"},
                     "system");
      read_if(s, "elements", cfg.elements);
      read_if(s, "users", cfg.users);
      read_if(s, "order", cfg.order);
      read_if(s, "noise_var", cfg.noise_var);
      read_if(s, "tau", cfg.tau);
      read_if(s, "targets", cfg.targets);
      read_if(s, "channel_file", cfg.channel_file);
      read_if(s, "symbols", cfg.symbols);
    }
    if (j.contains("bisection")) {
      const json& b = j.at("bisection");
      reject_unknown(b, {"p_lower", "p_upper", "eps_tol", "i_max", "bracket_doublings",
                         "warm_start", "init_seed"},
                     "bisection");
      read_if(b, "p_lower", cfg.bisection.p_lower);
      read_if(b, "p_upper", cfg.bisection.p_upper);
      read_if(b, "eps_tol", cfg.bisection.eps_tol);
      read_if(b, "i_max", cfg.bisection.i_max);
      read_if(b, "bracket_doublings", cfg.bisection.bracket_doublings);
      read_if(b, "warm_start", cfg.bisection.warm_start);
      read_if(b, "init_seed", cfg.bisection.init_seed);
    }
    if (j.contains("rcg")) cfg.bisection.rcg = rcg_from_json(j.at("rcg"), cfg.bisection.rcg, "rcg");
    if (j.contains("rcg_init")) {
      cfg.bisection.rcg_init = rcg_from_json(j.at("rcg_init"), cfg.bisection.rcg_init, "rcg_init");
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      reject_unknown(s, {"elements", "users", "order", "taus", "symbols", "noise_var",
                         "channel_policy", "averaging"},
                     "sweep");
      read_if(s, "elements", cfg.sweep.elements);
      read_if(s, "users", cfg.sweep.users);
      read_if(s, "order", cfg.sweep.order);
      read_if(s, "taus", cfg.sweep.taus);
      read_if(s, "symbols", cfg.sweep.symbol_count);
      read_if(s, "noise_var", cfg.sweep.noise_var);
      if (s.contains("channel_policy")) {
        cfg.sweep.channel_policy = parse_channel_policy(s.at("channel_policy").get<std::string>());
      }
      if (s.contains("averaging")) {
        cfg.sweep.averaging = parse_averaging(s.at("averaging").get<std::string>());
      }
    }
    if (j.contains("simulate")) {
      const json& s = j.at("simulate");
      reject_unknown(s, {"trials", "instances"}, "simulate");
      read_if(s, "trials", cfg.trials);
      read_if(s, "instances", cfg.instances);
    }
    if (j.contains("check")) {
      const json& c = j.at("check");
      reject_unknown(c, {"fd_tol", "instances", "inject_fault"}, "check");
      read_if(c, "fd_tol", cfg.fd_tol);
      read_if(c, "instances", cfg.check_instances);
      read_if(c, "inject_fault", cfg.inject_fault);
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("bad config value: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  const auto& b = cfg.bisection;
  const auto& s = cfg.sweep;
  return {
      {"mode", cfg.mode},
      {"seed", cfg.seed},
      {"out", resolve_out_dir(cfg.out_dir)},
      {"threads", cfg.threads},
      {"system",
       {{"elements", cfg.elements},
        {"users", cfg.users},
        {"order", cfg.order},
        {"noise_var", cfg.noise_var},
        {"tau", cfg.tau},
        {"targets", cfg.targets},
        {"channel_file", cfg.channel_file},
        {"symbols", cfg.symbols}}},
      {"bisection",
       {{"p_lower", b.p_lower},
        {"p_upper", b.p_upper},
        {"eps_tol", b.eps_tol},
        {"i_max", b.i_max},
        {"bracket_doublings", b.bracket_doublings},
        {"warm_start", b.warm_start},
        {"init_seed", b.init_seed}}},
      {"rcg", rcg_to_json(b.rcg)},
      {"rcg_init", rcg_to_json(b.rcg_init)},
      {"sweep",
       {{"elements", s.elements},
        {"users", s.users},
        {"order", s.order},
        {"taus", s.taus},
        {"symbols", s.symbol_count},
        {"noise_var", s.noise_var},
        {"channel_policy", std::string(to_string(s.channel_policy))},
        {"averaging", std::string(to_string(s.averaging))}}},
      {"simulate", {{"trials", cfg.trials}, {"instances", cfg.instances}}},
      {"check",
       {{"fd_tol", cfg.fd_tol},
        {"instances", cfg.check_instances},
        {"inject_fault", cfg.inject_fault}}},
  };
}

std::string resolve_out_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "rispm_out";
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Instance instance = build_instance(cfg, 0);
  BisectionConfig bisection = cfg.bisection;
  const SolveResult r = bisect(instance, bisection);

  const fs::path dir = prepare_out_dir(cfg);
  {
    auto csv = open_out(dir / "solve.csv");
    write_solve_csv_header(csv);
    write_solve_csv_row(csv, {cfg.seed, instance.elements(), instance.users(),
                              instance.constellation.order(), effective_tau(instance.targets),
                              r.p_opt, r.p_n_db, r.iterations, r.feasible});
  }
  write_json(dir / "solve.json", {{"config", config_to_json(cfg)}, {"result", solve_result_json(r)}});

  if (!r.feasible) {
    fmt::print(err,
               "infeasible: SEP targets cannot be met with power up to {} "
               "(f = {:.6g} at the last probe)\n",
               r.p_opt, r.trace.empty() ? 0.0 : r.trace.back().f_value);
    return kInfeasible;
  }
  fmt::print(out, "P_opt = {:.10g}\nP_n = {:.6f} dB\niterations = {}\n", r.p_opt, r.p_n_db,
             r.iterations);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepConfig sweep = cfg.sweep;
  sweep.seed = cfg.seed;
  sweep.threads = cfg.threads;
  sweep.bisection = cfg.bisection;

  const auto start = std::chrono::steady_clock::now();
  const auto records = run_sweep(sweep);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = prepare_out_dir(cfg);
  {
    auto csv = open_out(dir / "sweep.csv");
    write_sweep_csv(csv, records);
  }
  {
    auto table = open_out(dir / "sweep_table.csv");
    write_sweep_table(table, records);
  }
  int infeasible = 0;
  for (const auto& r : records) infeasible += r.infeasible;
  write_json(dir / "sweep.json", {{"config", config_to_json(cfg)},
                                  {"records", records.size()},
                                  {"infeasible_solves", infeasible}});

  write_sweep_table(out, records);
  fmt::print(out, "{} records, {} infeasible solves excluded, {:.1f} s\n", records.size(),
             infeasible, seconds);
  if (infeasible > 0) {
    fmt::print(err, "warning: {} solves were infeasible and excluded from the averages\n",
               infeasible);
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.instances < 1 || cfg.trials < 1) {
    throw UsageError("simulate needs instances >= 1 and trials >= 1");
  }
  const fs::path dir = prepare_out_dir(cfg);
  auto csv = open_out(dir / "simulate.csv");
  csv << "instance,user,p_opt,target,sep,std_error,errors,trials,within_bound\n";
  int violations = 0;
  int infeasible = 0;
  for (int i = 0; i < cfg.instances; ++i) {
    Instance instance = build_instance(cfg, i);
    BisectionConfig bisection = cfg.bisection;
    bisection.init_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i), 1);
    const SolveResult r = bisect(instance, bisection);
    if (!r.feasible) {
      ++infeasible;
      fmt::print(err, "instance {}: infeasible, skipped\n", i);
      continue;
    }
    std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i), 2));
    const SepEstimate est = simulate_sep(r.theta_opt, r.p_opt, instance.channels, instance.symbols,
                                         instance.constellation, cfg.trials, rng);
    for (int k = 0; k < instance.users(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const bool ok = est.sep[ku] <= instance.targets[ku] + 3.0 * est.std_error[ku];
      if (!ok) ++violations;
      fmt::print(csv, "{},{},{},{},{},{},{},{},{}\n", i, k, r.p_opt, instance.targets[ku],
                 est.sep[ku], est.std_error[ku], est.errors[ku], est.trials, ok ? 1 : 0);
      fmt::print(out, "instance {} user {}: SEP {:.3e} +- {:.1e} (target {:.1e}) {}\n", i, k,
                 est.sep[ku], est.std_error[ku], instance.targets[ku], ok ? "ok" : "VIOLATION");
    }
  }
  csv.close();
  write_json(dir / "simulate.json", {{"config", config_to_json(cfg)},
                                     {"violations", violations},
                                     {"infeasible", infeasible}});
  if (violations > 0) {
    fmt::print(err, "{} per-user SEP estimates exceeded target + 3 standard errors\n", violations);
    return kFailure;
  }
  return infeasible > 0 ? kInfeasible : kOk;
}

namespace {

struct CheckRow {
  std::string name;
  bool passed;
  std::string detail;
};

// Worst entrywise relative error between an analytic gradient and central
// differences. Entries are normalized by max(|fd|, 1e-3 * max|fd|) so that
// near-zero entries are judged against the gradient's scale.
double fd_gradient_error(const std::function<double(const RealMatrix2X&)>& f,
                         const RealMatrix2X& at, const RealMatrix2X& analytic) {
  constexpr double h = 1e-6;
  RealMatrix2X fd(2, at.cols());
  RealMatrix2X probe = at;
  for (Eigen::Index c = 0; c < at.cols(); ++c) {
    for (Eigen::Index r = 0; r < 2; ++r) {
      const double keep = probe(r, c);
      probe(r, c) = keep + h;
      const double up = f(probe);
      probe(r, c) = keep - h;
      const double down = f(probe);
      probe(r, c) = keep;
      fd(r, c) = (up - down) / (2.0 * h);
    }
  }
  const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < at.cols(); ++c) {
    for (Eigen::Index r = 0; r < 2; ++r) {
      const double denom = std::max(std::abs(fd(r, c)), 1e-3 * scale);
      worst = std::max(worst, std::abs(analytic(r, c) - fd(r, c)) / denom);
    }
  }
  return worst;
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.inject_fault.empty() && cfg.inject_fault != "grad-sign") {
    throw UsageError(fmt::format("unknown fault '{}' (expected grad-sign)", cfg.inject_fault));
  }
  const double sign = cfg.inject_fault == "grad-sign" ? -1.0 : 1.0;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PskConstellation qpsk(4);
  std::vector<CheckRow> rows;

  // gradients
  double worst_f0 = 0.0;
  double worst_v0 = 0.0;
  for (int i = 0; i < cfg.check_instances; ++i) {
    const int n = i % 2 == 0 ? 4 : 16;
    const int k = i % 4 < 2 ? 2 : 5;
    const double tau = 1.0 + 2.0 * unit(rng);
    Instance inst = random_instance(n, k, qpsk, std::pow(10.0, -tau), 1.0, rng());
    const auto dirs = make_directions(inst);
    const FeasibilityProblem prob(dirs, inst.targets, 0.05 + 2.0 * unit(rng), 1.0);
    const RealMatrix2X theta = PhasePoint::random(n, rng).matrix();
    const RealMatrix2X g0 = sign * f_smooth_grad(theta, prob);
    worst_f0 = std::max(worst_f0, fd_gradient_error(
                                      [&](const RealMatrix2X& t) { return f_smooth(t, prob); },
                                      theta, g0));
    const RealMatrix2X gv = sign * v_init_grad(theta, *dirs);
    worst_v0 = std::max(worst_v0, fd_gradient_error(
                                      [&](const RealMatrix2X& t) { return v_init(t, *dirs); },
                                      theta, gv));
  }
  rows.push_back({"gradient f_smooth vs finite differences", worst_f0 <= cfg.fd_tol,
                  fmt::format("max rel err {:.2e} (tol {:.1e})", worst_f0, cfg.fd_tol)});
  rows.push_back({"gradient v_init vs finite differences", worst_v0 <= cfg.fd_tol,
                  fmt::format("max rel err {:.2e} (tol {:.1e})", worst_v0, cfg.fd_tol)});

  // log-sum-exp sandwich
  int sandwich_violations = 0;
  constexpr int kSandwichPairs = 1000;
  for (int i = 0; i < kSandwichPairs; ++i) {
    const int n = 2 + static_cast<int>(unit(rng) * 30);
    const int k = 1 + static_cast<int>(unit(rng) * 6);
    Instance inst = random_instance(n, k, qpsk, std::pow(10.0, -1.0 - 9.0 * unit(rng)), 1.0, rng());
    const FeasibilityProblem prob(make_directions(inst), inst.targets, 10.0 * unit(rng), 1.0);
    const RealMatrix2X theta = PhasePoint::random(n, rng).matrix();
    const double fm = f_max(theta, prob);
    const double fs = f_smooth(theta, prob);
    if (fs < fm - 1e-12 || fs > fm + std::log(static_cast<double>(k)) + 1e-12) {
      ++sandwich_violations;
    }
  }
  rows.push_back({"log-sum-exp sandwich", sandwich_violations == 0,
                  fmt::format("{} violations in {} pairs", sandwich_violations, kSandwichPairs)});

  // retraction
  {
    double worst_norm = 0.0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
      const PhasePoint x = PhasePoint::random(8, rng);
      RealMatrix2X g(2, 8);
      for (auto& v : g.reshaped()) v = 2.0 * unit(rng) - 1.0;
      const auto xi = oblique::project_tangent(x, g);
      double prev = -1.0;
      for (double t : {1e-2, 1e-3, 1e-4}) {
        const PhasePoint y = oblique::retract(x, xi, t);
        worst_norm = std::max(worst_norm, manifold_defect(y.matrix()));
        const double e = (y.matrix() - (x.matrix() + t * xi.xi)).norm();
        if (prev > 0.0) worst_ratio = std::max(worst_ratio, e / prev);
        prev = e;
      }
    }
    // second order gives a ratio near 1e-2 per decade of t
    const bool ok = worst_norm <= 1e-12 && worst_ratio <= 0.05;
    rows.push_back({"retraction on manifold and second-order close", ok,
                    fmt::format("norm defect {:.1e}, error ratio per decade {:.2e}", worst_norm,
                                worst_ratio)});
  }

  // closed-form single-element instance
  {
    const double target = 1e-3;
    const double inv = boost::math::erfc_inv(target);
    const double expected = 2.0 * inv * inv;
    Instance inst{ChannelSet::all_ones(1, 1, 1.0), SymbolVector({0}, qpsk), qpsk, {target}};
    BisectionConfig b;
    b.eps_tol = 1e-4;
    const SolveResult r = bisect(inst, b);
    const double rel = std::abs(r.p_opt - expected) / expected;
    rows.push_back({"closed-form single-element solve", r.feasible && rel <= 1e-3,
                    fmt::format("P = {:.6f}, expected {:.6f}, rel err {:.1e}", r.p_opt, expected,
                                rel)});
  }

  bool all = true;
  for (const auto& r : rows) {
    all = all && r.passed;
    fmt::print(out, "{:<4} {:<48} {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
  }
  if (!cfg.inject_fault.empty()) {
    fmt::print(out, "note: fault '{}' injected\n", cfg.inject_fault);
  }
  if (!all) {
    fmt::print(err, "self-check failed\n");
    return kFailure;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-power RIS passive transmitter solver under union-bound SEP targets"};
  std::string config_path;
  std::string mode;
  std::uint64_t seed = 0;
  std::string out_dir;
  int symbols = 0;
  int threads = 0;
  double fd_tol = 0.0;
  std::string inject;
  app.add_option("--config", config_path, "JSON configuration file");
  auto* mode_opt = app.add_option("--mode", mode, "solve, sweep, check or simulate")
                       ->check(CLI::IsMember({"solve", "sweep", "check", "simulate"}));
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (default $RISPM_OUT_DIR)");
  auto* symbols_opt =
      app.add_option("--symbols", symbols, "symbol vectors per N (sweep) or instances (simulate)")
          ->check(CLI::PositiveNumber);
  auto* threads_opt =
      app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--fd-tol", fd_tol, "gradient check tolerance (check mode)")
                      ->check(CLI::PositiveNumber);
  auto* fault_opt = app.add_option("--inject-fault", inject, "check-mode test hook: grad-sign");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        fmt::print(err, "error: cannot open config file '{}'\n", config_path);
        return kUsage;
      }
      json j;
      try {
        j = json::parse(f);
      } catch (const json::parse_error& e) {
        fmt::print(err, "error: config file '{}' is not valid JSON: {}\n", config_path, e.what());
        return kUsage;
      }
      cfg = config_from_json(j);
      if (!cfg.channel_file.empty() && fs::path(cfg.channel_file).is_relative()) {
        cfg.channel_file = (fs::path(config_path).parent_path() / cfg.channel_file).string();
      }
    }
    if (*mode_opt) cfg.mode = mode;
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.out_dir = out_dir;
    if (*symbols_opt) {
      cfg.sweep.symbol_count = symbols;
      cfg.instances = symbols;
    }
    if (*threads_opt) cfg.threads = threads;
    if (*tol_opt) cfg.fd_tol = fd_tol;
    if (*fault_opt) cfg.inject_fault = inject;

    if (cfg.mode == "solve") return cmd_solve(cfg, out, err);
    if (cfg.mode == "sweep") return cmd_sweep(cfg, out, err);
    if (cfg.mode == "simulate") return cmd_simulate(cfg, out, err);
    if (cfg.mode == "check") return cmd_check(cfg, out, err);
    fmt::print(err, "error: unknown mode '{}'\n", cfg.mode);
    return kUsage;
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: invalid configuration: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
}

}  // namespace rispm::cli
