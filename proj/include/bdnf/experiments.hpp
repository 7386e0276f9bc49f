// Copyright 2026 The bdnf Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BDNF_EXPERIMENTS_HPP_
#define BDNF_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bdnf/dynamics.hpp"
#include "bdnf/game.hpp"
#include "bdnf/wiring.hpp"

namespace bdnf {

enum class WiringFamily {
  kRegular,  // circulant with offsets 1..k
  kRandom,   // directed Hamiltonian cycle plus k-1 random extra links per node
  kEmpty,    // no links
  kFile,     // fixed initial wiring loaded from a file
};

const char* family_name(WiringFamily f);
WiringFamily parse_family(const std::string& name);

const char* scheduler_name(SchedulerKind kind);
SchedulerKind parse_scheduler(const std::string& name);

const char* termination_name(Termination t);

struct ExperimentConfig {
  std::vector<int> ns;
  std::vector<int> ks;
  WiringFamily family = WiringFamily::kRegular;
  SchedulerKind scheduler = SchedulerKind::kRoundRobin;
  int trials = 1;
  uint64_t seed = 0;
  long long step_limit = 0;        // 0 means 100 n^2 per cell
  std::string initial_file;        // used by the file family
  int threads = 0;                 // 0 means BDNF_THREADS, then hardware
};

// Throws std::invalid_argument on empty ranges, trials < 1, a step limit
// below n^2 for the largest n, or a file family without a path.
void validate_config(const ExperimentConfig& cfg);

struct ExperimentRow {
  int n = 0;
  int k = 0;
  int trial = 0;
  uint64_t seed = 0;
  WiringFamily family = WiringFamily::kRegular;
  SchedulerKind scheduler = SchedulerKind::kRoundRobin;
  long long steps = 0;
  long long deviations = 0;
  Termination termination = Termination::kStable;
  long long connectivity_step = -1;
  double social_cost = 0.0;
};

// The starting wiring a row walks from. Randomized families draw from a
// fresh generator seeded with `seed`.
Wiring initial_wiring(WiringFamily family, int n, int k, uint64_t seed,
                      const std::string& file_path = "");

// Per-row seed, a pure function of the config seed and the cell coordinates
// so results never depend on scheduling.
uint64_t row_seed(uint64_t config_seed, int n, int k, WiringFamily family, int trial);

// Walks every (n, k, trial) cell and reports one row each, in that nesting
// order, so the row count is |ns| * |ks| * trials. Cells run in parallel
// across threads; output order and content are deterministic for a fixed
// config.
std::vector<ExperimentRow> run_convergence_experiment(const ExperimentConfig& cfg);

// CSV with the fixed header
// n,k,trial,seed,family,scheduler,steps,deviations,termination,connectivity_step,social_cost
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

// One line per recorded deviation, `step,node,old|new,old_cost,new_cost`
// with targets `;`-joined, then a `# terminated=...` summary line.
std::string trace_to_text(const WalkResult& result);

// Effective worker count: `requested`, else BDNF_THREADS, else hardware.
int thread_budget(int requested = 0);

}  // namespace bdnf

#endif  // BDNF_EXPERIMENTS_HPP_
