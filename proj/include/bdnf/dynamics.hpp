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

#ifndef BDNF_DYNAMICS_HPP_
#define BDNF_DYNAMICS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "bdnf/game.hpp"
#include "bdnf/rng.hpp"
#include "bdnf/wiring.hpp"

namespace bdnf {

enum class SchedulerKind {
  kRoundRobin,          // fixed order, cycled
  kRoundRobinShuffled,  // order reshuffled at every round
  kMaxCostFirst,        // highest-cost improvable node, ties to lowest id
  kRandom,              // uniform node each turn
  kTailChase,           // rebuilt each round by walking out-links from the in-degree-0 node
};

struct Scheduler {
  SchedulerKind kind = SchedulerKind::kRoundRobin;
  std::vector<int> order;  // round-robin base order; empty means 0..n-1
  uint64_t seed = 0;       // shuffled and random kinds
};

enum class Termination { kStable, kLoopDetected, kStepLimit };

struct WalkStep {
  long long step = 0;  // 1-based turn index
  int node = 0;
  std::vector<int> old_targets;
  std::vector<int> new_targets;
  double old_cost = 0.0;
  double new_cost = 0.0;
};

struct WalkOptions {
  long long max_steps = 0;   // 0 picks 100 * n * n
  bool detect_loops = true;  // ignored for randomized schedulers
  bool check_laws = false;   // reach monotonicity and per-round progress
  bool record_reach = false;
  bool stop_when_connected = false;
};

struct WalkResult {
  Termination termination = Termination::kStepLimit;
  long long total_steps = 0;  // every turn, deviating or not
  long long deviations = 0;
  long long loop_start = -1;   // step count at the state's first visit
  long long loop_period = -1;  // steps between the two visits
  long long connectivity_step = -1;  // first step after which strongly connected; 0 if at start
  long long law_violations = 0;
  std::vector<WalkStep> trace;  // deviating turns only
  std::vector<int> min_reach_history;  // per round, when record_reach
  Wiring final_wiring;
};

WalkResult run_walk(const GameInstance& game, const Wiring& start,
                    const Scheduler& sched, const WalkOptions& options = {});

// Steps until the wiring first becomes strongly connected, or -1 when the
// walk ends without reaching connectivity.
long long connectivity_convergence(const GameInstance& game, const Wiring& start,
                                   const Scheduler& sched, long long max_steps = 0);

// Directed r-cycle with a p-node path feeding into node 0. Requires r > p >= 1.
Wiring ring_path(int r, int p);

Wiring random_wiring(int n, int k, Rng& rng);

struct LoopSearch {
  Wiring start;
  std::vector<int> order;
  uint64_t trial_seed = 0;
  int trial = -1;
  WalkResult walk;
};

// Random starts and round-robin orders until a walk loops. Returns the first
// hit, or nullopt when the budget is exhausted.
std::optional<LoopSearch> find_looping_config(int n, int k, uint64_t seed, int budget);

}  // namespace bdnf

#endif  // BDNF_DYNAMICS_HPP_
