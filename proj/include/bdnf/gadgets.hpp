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

#ifndef BDNF_GADGETS_HPP_
#define BDNF_GADGETS_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bdnf/game.hpp"
#include "bdnf/wiring.hpp"

namespace bdnf {

// Node layout shared by the 11-node no-equilibrium gadgets: two mirrored
// sub-gadgets of a central, two tops and two bottoms, plus one relay node.
inline constexpr int kG0C = 0;
inline constexpr int kG0LT = 1;
inline constexpr int kG0RT = 2;
inline constexpr int kG0LB = 3;
inline constexpr int kG0RB = 4;
inline constexpr int kG1C = 5;
inline constexpr int kG1LT = 6;
inline constexpr int kG1RT = 7;
inline constexpr int kG1LB = 8;
inline constexpr int kG1RB = 9;
inline constexpr int kGExtra = 10;

struct GadgetParams {
  double delta = 0.0;  // top -> its fixed target
  double zeta = 0.0;   // central -> own tops (weight-restricted variant)
  double xi = 0.0;     // central -> other central
  double alpha = 0.0;  // bottom -> relay
  double beta = 0.0;   // bottom -> own central
  double gamma = 0.0;  // bottom -> its switch top
  double M = 0.0;      // disconnection penalty
};

struct GadgetInstance {
  GameInstance game;
  std::vector<std::string> roles;  // node id -> "0C".."1RB", "EXTRA"
  GadgetParams params;
};

// 11-node k=1 game with hard target restrictions and no pure equilibrium.
// Each central picks one of its own tops, each bottom picks its central or
// the relay, tops and the relay are forced. A central reaches the other
// central exactly when its chosen top's receiving bottom currently points
// home, and the bottoms' switch weights chase the centrals in turn, so the
// four choosers cycle like a matching-pennies pair. Requires M > 11.
GadgetInstance asymmetric_gadget(double M = 110.0);

// Hand-traceable starting profile for the asymmetric gadget's
// best-response cycle.
Wiring asymmetric_start_profile(const GadgetInstance& gi);

// 13-node k=2 lift of the asymmetric gadget: two mutually-linked sink nodes,
// with one enormous weight on the first, force every original node to spend
// one of its two links on the sink. The leftover link reproduces the k=1
// dynamics unchanged.
GadgetInstance asymmetric_gadget_k2(double M = 110.0);

// Same 11 nodes with every target legal; the hard restrictions are simulated
// by weights alone. Tops chase a single delta-weight, centrals trade
// zeta-weighted own tops against the xi-weighted other central, and bottoms
// run an alpha/beta/gamma three-way switch between relay, own central and
// their switch top. Requires eps < gamma * (M - 2) / (M - 1); beta and alpha
// are derived from gamma and eps. The defaults sit inside the region where
// the pruned equilibrium search comes back empty (M in (11, 14] with
// eps <= gamma / 2); larger M admits stable frozen profiles.
GadgetInstance symmetric_gadget(double M = 12.0, double gamma = 1.0,
                                double eps = 0.25);

// Every legal target set of v (size min(budget, |allowed|)), in
// lexicographic order.
std::vector<std::vector<int>> strategy_space(const GameInstance& g, int v);

// Per node, the candidate strategies a search may assign it. Each strategy
// is a sorted target set.
using StrategyRestriction = std::vector<std::vector<std::vector<int>>>;

struct NeSearchResult {
  bool found = false;
  Wiring profile;  // meaningful when found
  uint64_t profiles_checked = 0;
};

// Enumerates candidate profiles in lexicographic order and returns the first
// whose every node passes the exact best-response check over its FULL legal
// strategy set. A miss certifies that no pure equilibrium assigns every node
// a strategy from its candidate list. Null restriction means the full
// strategy space. Throws std::invalid_argument when the product exceeds
// `budget`.
NeSearchResult exhaustive_ne_search(const GameInstance& g,
                                    const StrategyRestriction* restriction = nullptr,
                                    uint64_t budget = 20'000'000ULL);

struct DominanceRemoval {
  int node = 0;
  std::vector<int> strategy;
  std::vector<int> dominator;  // surviving strategy that beats it everywhere
};

struct EliminationResult {
  StrategyRestriction survivors;
  std::vector<DominanceRemoval> removed;
  int rounds = 0;
};

// Iteratively removes strategies whose optimistic cost (every surviving link
// of the other nodes present at once) still exceeds some rival strategy's
// pessimistic cost (only links shared by all of a node's survivors present).
// Such strategies are strictly dominated, so every pure equilibrium survives
// the pruning.
EliminationResult iterated_elimination(const GameInstance& g);

// iterated_elimination followed by exhaustive_ne_search over the survivors.
NeSearchResult pruned_ne_search(const GameInstance& g,
                                uint64_t budget = 20'000'000ULL);

// ---------------------------------------------------------------------------
// 3SAT reduction

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;  // 1-based literals, sign = polarity
};

void validate_cnf(const CnfFormula& f);

// DIMACS CNF. Clauses with fewer than three literals are padded by repeating
// their last literal; clauses with more are rejected.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_text(const std::string& text);

bool evaluate_cnf(const CnfFormula& f, const std::vector<bool>& assignment);
std::optional<std::vector<bool>> find_satisfying_assignment(const CnfFormula& f);

// 3SAT -> game. Two independent copies of a clause/variable relay feed a
// toggle block built like the asymmetric gadget, except that each toggle
// central may also enter its copy's base node. Per copy: the base fans out
// to every clause; a clause either forwards to one of its three variable
// rails or gives up on a fallback node; a rail delivers to the clause's
// beacon exactly when the chosen literal is true under the variable's
// current orientation. Beacon weights are tuned so a central prefers the
// base entry over its tops precisely when all m beacons of its copy
// deliver, so a satisfying orientation freezes the block and an
// unsatisfiable formula leaves it toggling. Node count is
// 6 * num_vars + 18 * num_clauses + 14.
struct SatReduction {
  GameInstance game;
  CnfFormula formula;
  double M = 0.0;
  double xi = 0.0;            // toggle central -> other central
  double tau = 0.0;           // toggle central -> own tops
  double beacon_weight = 0.0; // toggle central -> each own-copy beacon
  double alpha = 0.0;         // toggle bottom -> relay
  double gamma = 0.0;         // toggle bottom -> its switch top

  // Relay pair shared by both copies.
  int relay_d = 0;
  int relay_y = 0;
  // Toggle block, indexed by copy.
  std::array<int, 2> t_central{};
  std::array<int, 2> t_left_top{};
  std::array<int, 2> t_right_top{};
  std::array<int, 2> t_left_bottom{};
  std::array<int, 2> t_right_bottom{};
  // Clause/variable relay, indexed by copy.
  std::array<int, 2> base{};
  std::vector<std::array<int, 2>> clause;     // chooser, one per clause
  std::vector<std::array<int, 2>> fallback;   // the clause's give-up target
  std::vector<std::array<int, 2>> beacon;     // delivers iff the clause does
  std::vector<std::array<std::array<int, 3>, 2>> inter;  // clause -> variable
  std::vector<std::array<std::array<int, 3>, 2>> exits;  // literal -> beacon
  std::vector<std::array<int, 2>> var_central;  // orientation chooser
  std::vector<std::array<int, 2>> var_true;     // positive occurrence hub
  std::vector<std::array<int, 2>> var_false;    // negative occurrence hub
};

// M <= 0 picks the smallest safe default.
SatReduction sat_reduction(const CnfFormula& f, double M = 0.0);

// Tries every variable assignment: builds the profile it induces (clauses
// pick their first true literal, toggle centrals enter the base, bottoms
// rest on the relay) and verifies stability. nullopt when no assignment
// yields an equilibrium.
std::optional<Wiring> sat_equilibrium_search(const SatReduction& r);

// Certifies pure-equilibrium (non)existence over the full chooser product.
// Copy-local profiles are screened for internal stability first (their costs
// do not depend on the rest of the instance), and the survivors are crossed
// with the toggle block and checked exactly.
NeSearchResult sat_exhaustive_search(const SatReduction& r,
                                     uint64_t budget = 100'000'000ULL);

}  // namespace bdnf

#endif  // BDNF_GADGETS_HPP_
