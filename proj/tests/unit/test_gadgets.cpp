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

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bdnf/dynamics.hpp"
#include "bdnf/gadgets.hpp"
#include "bdnf/game.hpp"
#include "bdnf/wiring.hpp"
#include "doctest.h"

namespace {

using bdnf::CnfFormula;
using bdnf::GadgetInstance;
using bdnf::GameInstance;
using bdnf::NeSearchResult;
using bdnf::Scheduler;
using bdnf::SchedulerKind;
using bdnf::Termination;
using bdnf::WalkResult;
using bdnf::Wiring;

uint64_t survivor_product(const bdnf::StrategyRestriction& r) {
  uint64_t p = 1;
  for (const auto& options : r) p *= options.size();
  return p;
}

size_t survivor_count(const bdnf::StrategyRestriction& r) {
  size_t c = 0;
  for (const auto& options : r) c += options.size();
  return c;
}

}  // namespace

TEST_CASE("asymmetric gadget: layout, restrictions, and the penalty floor") {
  GadgetInstance gi = bdnf::asymmetric_gadget();
  const GameInstance& g = gi.game;
  REQUIRE(g.n == 11);
  CHECK(g.penalty == 110.0);
  CHECK(gi.params.M == 110.0);
  CHECK(gi.roles[bdnf::kG0C] == "0C");
  CHECK(gi.roles[bdnf::kG1RB] == "1RB");
  CHECK(gi.roles[bdnf::kGExtra] == "EXTRA");
  for (int v = 0; v < g.n; ++v) CHECK(g.budgets[static_cast<size_t>(v)] == 1);

  // Centrals and bottoms choose between two targets, everyone else is forced.
  for (int v : {bdnf::kG0C, bdnf::kG1C, bdnf::kG0LB, bdnf::kG0RB, bdnf::kG1LB,
                bdnf::kG1RB}) {
    CHECK(bdnf::strategy_space(g, v).size() == 2);
  }
  for (int v : {bdnf::kG0LT, bdnf::kG0RT, bdnf::kG1LT, bdnf::kG1RT,
                bdnf::kGExtra}) {
    CHECK(bdnf::strategy_space(g, v).size() == 1);
  }

  CHECK_THROWS_AS(bdnf::asymmetric_gadget(11.0), std::invalid_argument);
  CHECK_THROWS_AS(bdnf::asymmetric_gadget(10.0), std::invalid_argument);
}

TEST_CASE("asymmetric gadget: no pure equilibrium over all 64 profiles") {
  GadgetInstance gi = bdnf::asymmetric_gadget();
  NeSearchResult res = bdnf::exhaustive_ne_search(gi.game);
  CHECK_FALSE(res.found);
  CHECK(res.profiles_checked == 64);
}

TEST_CASE("asymmetric gadget: the hand-traceable profile cycles immediately") {
  GadgetInstance gi = bdnf::asymmetric_gadget();
  Wiring start = bdnf::asymmetric_start_profile(gi);
  REQUIRE(start.n == 11);
  for (int v = 0; v < start.n; ++v) {
    const auto& out = start.out[static_cast<size_t>(v)];
    REQUIRE(out.size() == 1);
    const auto& legal = gi.game.allowed[static_cast<size_t>(v)];
    CHECK(std::binary_search(legal.begin(), legal.end(), out[0]));
  }
  CHECK_FALSE(bdnf::is_stable(gi.game, start).stable);

  Scheduler sched;
  sched.kind = SchedulerKind::kRoundRobin;
  WalkResult res = bdnf::run_walk(gi.game, start, sched);
  CHECK(res.termination == Termination::kLoopDetected);
  // The start profile itself recurs: the walk is one pure cycle.
  CHECK(res.loop_start == 0);
  CHECK(res.loop_period == 22);
  CHECK(res.deviations == 12);
}

TEST_CASE("k=2 lift: thirteen nodes, same cycling core, no equilibrium") {
  GadgetInstance gi = bdnf::asymmetric_gadget_k2();
  const GameInstance& g = gi.game;
  REQUIRE(g.n == 13);
  CHECK(gi.roles.size() == 13);
  for (int v = 0; v < 11; ++v) CHECK(g.budgets[static_cast<size_t>(v)] == 2);

  // Elimination strips the forced sink links, leaving the six k=1 choosers.
  NeSearchResult res = bdnf::pruned_ne_search(g);
  CHECK_FALSE(res.found);
  CHECK(res.profiles_checked == 64);
}

TEST_CASE("symmetric gadget: derived weights and the eps boundary") {
  GadgetInstance gi = bdnf::symmetric_gadget();
  CHECK(gi.params.M == 12.0);
  CHECK(gi.params.gamma == 1.0);
  CHECK(gi.params.beta == doctest::Approx(1.25));
  CHECK(gi.params.alpha == doctest::Approx(1.909091).epsilon(1e-5));
  CHECK(gi.game.n == 11);
  // Every target is legal here; the behaviour lives in the weights.
  for (int v = 0; v < 11; ++v) {
    CHECK(bdnf::strategy_space(gi.game, v).size() == 10);
  }

  GadgetInstance wide = bdnf::symmetric_gadget(100.0, 1.0, 0.5);
  CHECK(wide.params.beta == doctest::Approx(1.5));
  CHECK(wide.params.alpha == doctest::Approx(2.0 - 1.0 / 99.0));

  // eps must stay below gamma * (M - 2) / (M - 1).
  CHECK_THROWS_AS(bdnf::symmetric_gadget(12.0, 1.0, 0.95), std::invalid_argument);
}

TEST_CASE("symmetric gadget: elimination shrinks 10^11 profiles to 656100") {
  GadgetInstance gi = bdnf::symmetric_gadget();
  bdnf::EliminationResult elim = bdnf::iterated_elimination(gi.game);
  CHECK(elim.rounds == 2);
  CHECK(elim.removed.size() == 49);
  CHECK(survivor_count(elim.survivors) == 11 * 10 - 49);
  CHECK(survivor_product(elim.survivors) == 656100);

  for (const auto& rem : elim.removed) {
    CHECK(rem.node >= 0);
    CHECK(rem.node < 11);
    CHECK(rem.strategy != rem.dominator);
    const auto& final_opts = elim.survivors[static_cast<size_t>(rem.node)];
    CHECK(std::find(final_opts.begin(), final_opts.end(), rem.strategy) ==
          final_opts.end());
  }
}

TEST_CASE("symmetric gadget: pruned search certifies no pure equilibrium") {
  GadgetInstance gi = bdnf::symmetric_gadget();
  NeSearchResult res = bdnf::pruned_ne_search(gi.game);
  CHECK_FALSE(res.found);
  CHECK(res.profiles_checked == 656100);
}

TEST_CASE("strategy spaces enumerate sorted sets in lexicographic order") {
  GameInstance g = bdnf::uniform_game(4, 2);
  const auto s0 = bdnf::strategy_space(g, 0);
  CHECK(s0 == std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}});
  const auto s2 = bdnf::strategy_space(g, 2);
  CHECK(s2 == std::vector<std::vector<int>>{{0, 1}, {0, 3}, {1, 3}});
}

TEST_CASE("pruning never discards an equilibrium a full search can find") {
  // 1-out uniform games are never stuck: a cycle is always an equilibrium.
  GameInstance g = bdnf::uniform_game(5, 1);
  NeSearchResult full = bdnf::exhaustive_ne_search(g);
  REQUIRE(full.found);
  CHECK(bdnf::is_stable(g, full.profile).stable);

  NeSearchResult pruned = bdnf::pruned_ne_search(g);
  REQUIRE(pruned.found);
  CHECK(bdnf::is_stable(g, pruned.profile).stable);
}

TEST_CASE("exhaustive search refuses products beyond its budget") {
  GameInstance g = bdnf::uniform_game(12, 3);
  CHECK_THROWS_AS(bdnf::exhaustive_ne_search(g, nullptr, 1000),
                  std::invalid_argument);
}

TEST_CASE("DIMACS parsing pads short clauses and rejects long ones") {
  CnfFormula f = bdnf::parse_dimacs_text(
      "c a comment\np cnf 2 2\n1 2 0\n-1 -2 0\n");
  CHECK(f.num_vars == 2);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == std::array<int, 3>{1, 2, 2});
  CHECK(f.clauses[1] == std::array<int, 3>{-1, -2, -2});

  CnfFormula single = bdnf::parse_dimacs_text("p cnf 1 1\n1 0\n");
  CHECK(single.clauses[0] == std::array<int, 3>{1, 1, 1});

  std::istringstream in("p cnf 2 2\n1 2 0\n-1 -2 0\n");
  CnfFormula same = bdnf::parse_dimacs(in);
  CHECK(same.num_vars == f.num_vars);
  CHECK(same.clauses == f.clauses);

  CHECK_THROWS_AS(bdnf::parse_dimacs_text("1 2 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(bdnf::parse_dimacs_text("p cnf 4 1\n1 2 3 4 0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bdnf::parse_dimacs_text("p cnf 1 1\n2 0\n"),
                  std::invalid_argument);

  CnfFormula bad;
  bad.num_vars = 1;
  bad.clauses.push_back({0, 1, 1});
  CHECK_THROWS_AS(bdnf::validate_cnf(bad), std::invalid_argument);
}

TEST_CASE("CNF evaluation and the assignment search agree") {
  CnfFormula f = bdnf::parse_dimacs_text("p cnf 2 2\n1 2 0\n-1 -2 0\n");
  CHECK(bdnf::evaluate_cnf(f, {true, false}));
  CHECK(bdnf::evaluate_cnf(f, {false, true}));
  CHECK_FALSE(bdnf::evaluate_cnf(f, {true, true}));

  auto sat = bdnf::find_satisfying_assignment(f);
  REQUIRE(sat.has_value());
  CHECK(bdnf::evaluate_cnf(f, *sat));

  CnfFormula unsat = bdnf::parse_dimacs_text("p cnf 1 2\n1 0\n-1 0\n");
  CHECK_FALSE(bdnf::find_satisfying_assignment(unsat).has_value());
}

TEST_CASE("reduction size is 6v + 18m + 14 and the penalty clears it") {
  CnfFormula f2 = bdnf::parse_dimacs_text("p cnf 2 2\n1 2 0\n-1 -2 0\n");
  bdnf::SatReduction r2 = bdnf::sat_reduction(f2);
  CHECK(r2.game.n == 6 * 2 + 18 * 2 + 14);
  CHECK(r2.M > r2.game.n);
  CHECK(r2.clause.size() == 2);
  CHECK(r2.var_central.size() == 2);
  CHECK(r2.beacon.size() == 2);
  CHECK(r2.exits.size() == 2);
  CHECK(r2.relay_d != r2.relay_y);

  CnfFormula f31 = bdnf::parse_dimacs_text("p cnf 3 1\n1 -2 3 0\n");
  CHECK(bdnf::sat_reduction(f31).game.n == 6 * 3 + 18 * 1 + 14);
}

TEST_CASE("satisfiable formulas induce verified equilibria") {
  const char* texts[] = {
      "p cnf 1 1\n1 0\n",
      "p cnf 2 2\n1 2 0\n-1 -2 0\n",
      "p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n",
      "p cnf 2 3\n1 2 0\n-1 2 0\n1 -2 0\n",
      "p cnf 3 4\n1 2 3 0\n-1 -2 0\n2 -3 0\n-1 3 0\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    CnfFormula f = bdnf::parse_dimacs_text(text);
    REQUIRE(bdnf::find_satisfying_assignment(f).has_value());
    bdnf::SatReduction r = bdnf::sat_reduction(f);
    auto profile = bdnf::sat_equilibrium_search(r);
    REQUIRE(profile.has_value());
    CHECK(bdnf::is_stable(r.game, *profile).stable);
  }
}

TEST_CASE("unsatisfiable formulas yield no equilibrium from any assignment") {
  const char* texts[] = {
      "p cnf 1 2\n1 0\n-1 0\n",
      "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n",
      "p cnf 3 8\n"
      "1 2 3 0\n1 2 -3 0\n1 -2 3 0\n1 -2 -3 0\n"
      "-1 2 3 0\n-1 2 -3 0\n-1 -2 3 0\n-1 -2 -3 0\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    CnfFormula f = bdnf::parse_dimacs_text(text);
    REQUIRE_FALSE(bdnf::find_satisfying_assignment(f).has_value());
    bdnf::SatReduction r = bdnf::sat_reduction(f);
    CHECK_FALSE(bdnf::sat_equilibrium_search(r).has_value());
  }
}

TEST_CASE("exhaustive certification of the two-variable reduction") {
  CnfFormula f = bdnf::parse_dimacs_text("p cnf 2 2\n1 2 0\n-1 -2 0\n");
  bdnf::SatReduction r = bdnf::sat_reduction(f);
  NeSearchResult res = bdnf::sat_exhaustive_search(r);
  CHECK(res.found);
  CHECK(res.profiles_checked == 589824);
  CHECK(bdnf::is_stable(r.game, res.profile).stable);
}
