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

#include "rispm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace rispm {

SepEstimate simulate_sep(const CVector& theta, double power, const ChannelSet& channels,
                         const SymbolVector& symbols, const PskConstellation& constellation,
                         std::int64_t trials, std::mt19937_64& rng) {
  if (trials < 1) {
    throw std::invalid_argument(fmt::format("need at least one trial, got {}", trials));
  }
  if (theta.size() != channels.elements()) {
    throw std::invalid_argument("theta length does not match the channel");
  }
  if (static_cast<int>(symbols.size()) != channels.users()) {
    throw std::invalid_argument("symbol count does not match the channel");
  }
  if (!(power >= 0.0)) {
    throw std::invalid_argument("power must be non-negative");
  }
  const auto users = static_cast<std::size_t>(channels.users());
  std::vector<cplx> noiseless(users);
  for (std::size_t k = 0; k < users; ++k) {
    noiseless[k] = std::sqrt(power) * channels.response(static_cast<int>(k), theta);
  }
  std::normal_distribution<double> component(0.0, std::sqrt(channels.noise_var() / 2.0));

  SepEstimate est;
  est.trials = trials;
  est.errors.assign(users, 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    for (std::size_t k = 0; k < users; ++k) {
      const double re = component(rng);
      const double im = component(rng);
      const cplx z = noiseless[k] + cplx(re, im);
      if (detect(z, constellation) != symbols[k]) {
        ++est.errors[k];
      }
    }
  }
  est.sep.resize(users);
  est.std_error.resize(users);
  for (std::size_t k = 0; k < users; ++k) {
    const double rate = static_cast<double>(est.errors[k]) / static_cast<double>(trials);
    est.sep[k] = rate;
    est.std_error[k] = std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
  }
  return est;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

Instance random_instance(int elements, int users, const PskConstellation& constellation,
                         double target, double noise_var, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ChannelSet channels = generate_rayleigh(elements, users, noise_var, rng);
  SymbolVector symbols = random_symbols(users, rng, constellation);
  return Instance{std::move(channels), std::move(symbols), constellation,
                  std::vector<double>(static_cast<std::size_t>(users), target)};
}

std::string_view to_string(ChannelPolicy p) {
  return p == ChannelPolicy::RedrawPerSymbol ? "redraw" : "fixed";
}

std::string_view to_string(Averaging a) {
  return a == Averaging::LinearThenDb ? "linear" : "db";
}

ChannelPolicy parse_channel_policy(std::string_view s) {
  if (s == "redraw") return ChannelPolicy::RedrawPerSymbol;
  if (s == "fixed") return ChannelPolicy::Fixed;
  throw std::invalid_argument(fmt::format("unknown channel policy '{}' (redraw|fixed)", s));
}

Averaging parse_averaging(std::string_view s) {
  if (s == "linear") return Averaging::LinearThenDb;
  if (s == "db") return Averaging::MeanOfDb;
  throw std::invalid_argument(fmt::format("unknown averaging '{}' (linear|db)", s));
}

void SweepConfig::validate() const {
  if (elements.empty() || taus.empty()) {
    throw std::invalid_argument("sweep needs at least one N and one tau");
  }
  for (int n : elements) {
    if (n < 1) throw std::invalid_argument(fmt::format("invalid element count {}", n));
  }
  for (double t : taus) {
    const double p = std::pow(10.0, -t);
    if (!(p > 0.0 && p < 0.5)) {
      throw std::invalid_argument(fmt::format("tau {} gives a target outside (0, 0.5)", t));
    }
  }
  if (users < 1) throw std::invalid_argument("sweep needs at least one user");
  if (order < 2) throw std::invalid_argument("PSK order must be >= 2");
  if (symbol_count < 1) throw std::invalid_argument("symbol_count must be > 0");
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be > 0");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  bisection.validate();
}

namespace {

struct TaskOutcome {
  std::vector<double> power;  // per tau
  std::vector<bool> feasible;
};

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kSymbolStream = 2;
constexpr std::uint64_t kInitStream = 3;
constexpr std::uint64_t kFixedChannelTask = ~std::uint64_t{0};

TaskOutcome solve_task(const SweepConfig& cfg, int elements, int task) {
  const PskConstellation constellation(cfg.order);
  const auto n = static_cast<std::uint64_t>(elements);
  const auto j = static_cast<std::uint64_t>(task);

  const std::uint64_t channel_task =
      cfg.channel_policy == ChannelPolicy::Fixed ? kFixedChannelTask : j;
  std::mt19937_64 channel_rng(derive_seed(cfg.seed, n, channel_task, kChannelStream));
  ChannelSet channels = generate_rayleigh(elements, cfg.users, cfg.noise_var, channel_rng);
  std::mt19937_64 symbol_rng(derive_seed(cfg.seed, n, j, kSymbolStream));
  SymbolVector symbols = random_symbols(cfg.users, symbol_rng, constellation);

  BisectionConfig bisection = cfg.bisection;
  bisection.init_seed = derive_seed(cfg.seed, n, j, kInitStream);

  TaskOutcome out;
  Instance instance{std::move(channels), std::move(symbols), constellation, {}};
  for (double tau : cfg.taus) {
    instance.targets.assign(static_cast<std::size_t>(cfg.users), std::pow(10.0, -tau));
    const SolveResult r = bisect(instance, bisection);
    out.power.push_back(r.p_opt);
    out.feasible.push_back(r.feasible);
  }
  return out;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config, const SweepProgress& progress) {
  config.validate();
  const int per_n = config.symbol_count;
  const int total = static_cast<int>(config.elements.size()) * per_n;
  std::vector<TaskOutcome> outcomes(static_cast<std::size_t>(total));

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, static_cast<unsigned>(total));

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::mutex progress_mutex;

  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        const int elements = config.elements[static_cast<std::size_t>(idx / per_n)];
        outcomes[static_cast<std::size_t>(idx)] = solve_task(config, elements, idx % per_n);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
      const int finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<SweepRecord> records;
  for (std::size_t ni = 0; ni < config.elements.size(); ++ni) {
    for (std::size_t ti = 0; ti < config.taus.size(); ++ti) {
      double sum = 0.0;
      int feasible = 0;
      for (int j = 0; j < per_n; ++j) {
        const TaskOutcome& o = outcomes[ni * static_cast<std::size_t>(per_n) + static_cast<std::size_t>(j)];
        if (!o.feasible[ti]) continue;
        ++feasible;
        sum += config.averaging == Averaging::LinearThenDb
                   ? o.power[ti]
                   : normalized_power_db(o.power[ti], config.noise_var);
      }
      SweepRecord rec;
      rec.elements = config.elements[ni];
      rec.users = config.users;
      rec.order = config.order;
      rec.tau = config.taus[ti];
      rec.symbol_count = per_n;
      rec.infeasible = per_n - feasible;
      rec.seed = config.seed;
      if (feasible == 0) {
        rec.avg_p_n_db = std::nan("");
      } else if (config.averaging == Averaging::LinearThenDb) {
        rec.avg_p_n_db = normalized_power_db(sum / feasible, config.noise_var);
      } else {
        rec.avg_p_n_db = sum / feasible;
      }
      records.push_back(rec);
    }
  }
  return records;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "N,K,alpha_s,tau,avg_p_n_db,symbol_count,infeasible,seed\n";
  for (const auto& r : records) {
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", r.elements, r.users, r.order, r.tau, r.avg_p_n_db,
               r.symbol_count, r.infeasible, r.seed);
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("sweep CSV is empty");
  }
  if (line != "N,K,alpha_s,tau,avg_p_n_db,symbol_count,infeasible,seed") {
    throw std::runtime_error(fmt::format("unexpected sweep CSV header '{}'", line));
  }
  std::vector<SweepRecord> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw std::runtime_error(fmt::format("line {}: expected 8 fields, got {}", line_no,
                                           fields.size()));
    }
    try {
      SweepRecord r;
      r.elements = std::stoi(fields[0]);
      r.users = std::stoi(fields[1]);
      r.order = std::stoi(fields[2]);
      r.tau = std::stod(fields[3]);
      r.avg_p_n_db = std::stod(fields[4]);
      r.symbol_count = std::stoi(fields[5]);
      r.infeasible = std::stoi(fields[6]);
      r.seed = std::stoull(fields[7]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error(fmt::format("line {}: malformed field in '{}'", line_no, line));
    }
  }
  return out;
}

void write_sweep_table(std::ostream& os, const std::vector<SweepRecord>& records) {
  std::vector<int> ns;
  std::vector<double> taus;
  std::map<std::pair<int, double>, double> value;
  for (const auto& r : records) {
    if (std::find(ns.begin(), ns.end(), r.elements) == ns.end()) ns.push_back(r.elements);
    if (std::find(taus.begin(), taus.end(), r.tau) == taus.end()) taus.push_back(r.tau);
    value[{r.elements, r.tau}] = r.avg_p_n_db;
  }
  os << "tau";
  for (int n : ns) fmt::print(os, ",N={}", n);
  os << '\n';
  for (double t : taus) {
    fmt::print(os, "{}", t);
    for (int n : ns) {
      const auto it = value.find({n, t});
      if (it == value.end()) {
        os << ',';
      } else {
        fmt::print(os, ",{:.4f}", it->second);
      }
    }
    os << '\n';
  }
}

}  // namespace rispm
