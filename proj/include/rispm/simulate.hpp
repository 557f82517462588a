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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

#include "rispm/solver.hpp"

namespace rispm {

/// Per-user Monte Carlo symbol error rates.
struct SepEstimate {
  std::vector<std::int64_t> errors;
  std::int64_t trials = 0;
  std::vector<double> sep;
  /// sqrt(sep (1 - sep) / trials)
  std::vector<double> std_error;
};

/// Transmits the instance's symbols through `theta` at `power`, adds
/// CN(0, noise_var) noise per user and trial, and counts detection errors.
SepEstimate simulate_sep(const CVector& theta, double power, const ChannelSet& channels,
                         const SymbolVector& symbols, const PskConstellation& constellation,
                         std::int64_t trials, std::mt19937_64& rng);

/// Mixes a master seed with task coordinates (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Rayleigh channels and uniform symbols from one seed, with every user's
/// target set to `target`.
Instance random_instance(int elements, int users, const PskConstellation& constellation,
                         double target, double noise_var, std::uint64_t seed);

enum class ChannelPolicy { RedrawPerSymbol, Fixed };
enum class Averaging { LinearThenDb, MeanOfDb };

std::string_view to_string(ChannelPolicy p);
std::string_view to_string(Averaging a);
ChannelPolicy parse_channel_policy(std::string_view s);
Averaging parse_averaging(std::string_view s);

struct SweepConfig {
  std::vector<int> elements{30, 40, 50, 60};
  int users = 5;
  int order = 4;
  std::vector<double> taus{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int symbol_count = 2000;
  std::uint64_t seed = 1;
  double noise_var = 1.0;
  ChannelPolicy channel_policy = ChannelPolicy::RedrawPerSymbol;
  Averaging averaging = Averaging::LinearThenDb;
  BisectionConfig bisection;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  int threads = 0;

  void validate() const;
};

struct SweepRecord {
  int elements = 0;
  int users = 0;
  int order = 0;
  double tau = 0.0;
  /// Average normalized power over the feasible solves, in dB.
  double avg_p_n_db = 0.0;
  int symbol_count = 0;
  /// Solves that could not meet the targets; excluded from the average.
  int infeasible = 0;
  std::uint64_t seed = 0;
};

/// Called after each finished symbol-vector task with (done, total).
using SweepProgress = std::function<void(int done, int total)>;

/// For each N and each of `symbol_count` symbol vectors, draws an instance
/// and solves it at every tau (p_k = 10^-tau). Every task seeds itself from
/// (seed, N, task index), so results do not depend on the thread count.
/// Records come out ordered by N then tau.
std::vector<SweepRecord> run_sweep(const SweepConfig& config, const SweepProgress& progress = {});

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

/// Rows are tau values, one column of avg P_n [dB] per N.
void write_sweep_table(std::ostream& os, const std::vector<SweepRecord>& records);

}  // namespace rispm
