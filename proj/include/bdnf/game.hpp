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

#ifndef BDNF_GAME_HPP_
#define BDNF_GAME_HPP_

#include <optional>
#include <vector>

#include "bdnf/wiring.hpp"

namespace bdnf {

// One game instance. A node pays its weighted sum of distances; unreachable
// nodes count as `penalty`, which must exceed n so that connecting always
// beats stranding a weighted node.
struct GameInstance {
  int n = 0;
  std::vector<int> budgets;                // out-link budget per node
  std::vector<std::vector<double>> weights;  // weights[v][u], diagonal zero
  std::vector<std::vector<int>> allowed;   // sorted candidate targets per node
  double penalty = 0.0;
};

// All weights one, all budgets k, every node may target every other node.
// penalty <= 0 selects the default 10*n.
GameInstance uniform_game(int n, int k, double penalty = 0.0);

void validate_game(const GameInstance& g);

// True when weights[i][j] == 1 for every i != j.
bool has_uniform_weights(const GameInstance& g);

double node_cost(const GameInstance& g, const Wiring& w, int v);
std::vector<double> cost_vector(const GameInstance& g, const Wiring& w);
double social_cost(const GameInstance& g, const Wiring& w);

// Cost of v in its best conceivable wiring: as many nodes as possible at
// distance 1, then 2, and so on. Defined for uniform weights only; throws
// std::invalid_argument otherwise.
double utopian_cost(const GameInstance& g, int v);

// All-pairs distances with v's out-links removed. v keeps its incoming
// links and still forwards traffic, so a path may pass through v.
std::vector<std::vector<int>> residual_distances(const GameInstance& g,
                                                 const Wiring& w, int v);

struct BestResponse {
  std::vector<int> targets;  // sorted; equals the current set when !improved
  double current_cost = 0.0;
  double best_cost = 0.0;
  bool improved = false;
};

// Exact best response for v: enumerates every legal target set of size
// min(budget, |allowed|). Ties go to the current set when it matches the
// optimum, otherwise to the lexicographically smallest sorted set.
BestResponse best_response(const GameInstance& g, const Wiring& w, int v);

struct StabilityWitness {
  int node = -1;
  std::vector<int> improving_targets;
  double old_cost = 0.0;
  double new_cost = 0.0;
};

struct StabilityReport {
  bool stable = false;
  std::optional<StabilityWitness> witness;
};

// Checks every node's exact best response. The witness is the lowest-id
// node with a strict improvement.
StabilityReport is_stable(const GameInstance& g, const Wiring& w);

// Largest e with base^e <= value; base >= 2, value >= 1.
int floor_log(int base, int value);

// Bound on max-min node cost over stable wirings of a uniform game.
// k == 1 collapses to n (a stable 1-out wiring is a cycle, gap zero).
long long fairness_gap_bound(int n, int k);

// Bound on the diameter of a stable uniform wiring, k >= 2.
double diameter_bound(int n, int k);

}  // namespace bdnf

#endif  // BDNF_GAME_HPP_
