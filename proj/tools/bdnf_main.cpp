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
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdnf/cayley.hpp"
#include "bdnf/dynamics.hpp"
#include "bdnf/experiments.hpp"
#include "bdnf/gadgets.hpp"
#include "bdnf/game.hpp"
#include "bdnf/graph.hpp"
#include "bdnf/serialization.hpp"
#include "bdnf/stable_construction.hpp"
#include "bdnf/wiring.hpp"

namespace {

using bdnf::GameInstance;
using bdnf::Wiring;

// Enumeration budgets for the exact stability machinery. Beyond these the
// tool refuses instead of approximating.
int stability_cap(int k) {
  if (k == 1) return 300;
  if (k == 2) return 120;
  if (k == 3) return 50;
  if (k == 4 || k == 5) return 30;
  return 0;
}

void enforce_cap(int n, int k) {
  const int cap = stability_cap(k);
  if (cap == 0 || n > cap) {
    throw std::runtime_error(
        "exact stability checks are capped: k=1 n<=300, k=2 n<=120, "
        "k=3 n<=50, k in {4,5} n<=30; got n=" +
        std::to_string(n) + " k=" + std::to_string(k));
  }
}

void enforce_game_cap(const GameInstance& g) {
  int k = 1;
  for (int b : g.budgets) k = std::max(k, b);
  enforce_cap(g.n, k);
}

// The cayley subcommand only checks wirings it generated itself, and the
// dense families it exists for (the 5-cube among them) sit just past the
// generic per-k table while staying exactly checkable. Bound the actual
// enumeration size instead: n * C(n-1, k) candidate target sets.
void enforce_enumeration_budget(int n, int k) {
  constexpr long double kMaxSets = 20'000'000.0L;
  long double sets = 1.0L;
  for (int i = 0; i < k; ++i) sets = sets * (n - 1 - i) / (i + 1);
  if (sets * n > kMaxSets) {
    throw std::runtime_error("exact check needs " + std::to_string(static_cast<double>(sets * n)) +
                             " candidate sets, over the 2e7 budget; got n=" + std::to_string(n) +
                             " k=" + std::to_string(k));
  }
}

// "8", "8:12" and "8:32:4" pieces, comma separated, e.g. "8:12,16,24".
std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> values;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string piece = text.substr(pos, comma - pos);
    if (piece.empty()) throw std::runtime_error("empty range piece in '" + text + "'");
    int lo = 0, hi = 0, step = 1;
    const size_t c1 = piece.find(':');
    if (c1 == std::string::npos) {
      lo = hi = std::stoi(piece);
    } else {
      lo = std::stoi(piece.substr(0, c1));
      const size_t c2 = piece.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        hi = std::stoi(piece.substr(c1 + 1));
      } else {
        hi = std::stoi(piece.substr(c1 + 1, c2 - c1 - 1));
        step = std::stoi(piece.substr(c2 + 1));
      }
    }
    if (step < 1 || hi < lo) throw std::runtime_error("bad range piece '" + piece + "'");
    for (int v = lo; v <= hi; v += step) values.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return values;
}

GameInstance load_game(bool uniform, const std::string& game_path, const Wiring& w) {
  if (uniform == !game_path.empty()) {
    throw std::runtime_error("pass exactly one of --uniform and --game");
  }
  if (uniform) return bdnf::uniform_game(w.n, w.k);
  GameInstance g = bdnf::read_game_file(game_path);
  if (g.n != w.n) {
    throw std::runtime_error("game has n=" + std::to_string(g.n) + ", wiring has n=" +
                             std::to_string(w.n));
  }
  return g;
}

std::string join_ints(const std::vector<int>& xs, const char* sep = " ") {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

// Applies the deviation to a copy and re-derives both costs; refuses to
// print a witness that does not strictly improve when replayed.
void print_replayed_witness(const GameInstance& g, const Wiring& w,
                            const bdnf::StabilityWitness& wit) {
  Wiring moved = w;
  moved.out[static_cast<size_t>(wit.node)] = wit.improving_targets;
  const double before = bdnf::node_cost(g, w, wit.node);
  const double after = bdnf::node_cost(g, moved, wit.node);
  if (!(after < before)) {
    throw std::runtime_error("internal: witness did not replay as an improvement");
  }
  std::printf("witness: node %d re-links {%s} -> {%s}, cost %s -> %s\n", wit.node,
              join_ints(w.out[static_cast<size_t>(wit.node)], ",").c_str(),
              join_ints(wit.improving_targets, ",").c_str(),
              bdnf::format_double(before).c_str(), bdnf::format_double(after).c_str());
}

void report_stability(const GameInstance& g, const Wiring& w) {
  const bdnf::StabilityReport report = bdnf::is_stable(g, w);
  if (report.stable) {
    std::printf("stable\n");
  } else {
    std::printf("unstable\n");
    print_replayed_witness(g, w, *report.witness);
  }
}

// Generator tokens: "e3" unit digit vector, "e1..e5" a run of them, or a
// colon-joined digit tuple ("1:0:2"; a plain integer for one factor).
std::vector<std::vector<int>> parse_generators(const std::vector<std::string>& tokens,
                                               size_t factor_count) {
  std::vector<std::vector<int>> gens;
  for (const std::string& tok : tokens) {
    if (!tok.empty() && tok[0] == 'e') {
      const size_t dots = tok.find("..");
      int lo = 0, hi = 0;
      if (dots == std::string::npos) {
        lo = hi = std::stoi(tok.substr(1));
      } else {
        lo = std::stoi(tok.substr(1, dots - 1));
        if (dots + 3 > tok.size() || tok[dots + 2] != 'e') {
          throw std::runtime_error("bad generator run '" + tok + "', want eI..eJ");
        }
        hi = std::stoi(tok.substr(dots + 3));
      }
      if (lo < 1 || hi < lo || static_cast<size_t>(hi) > factor_count) {
        throw std::runtime_error("generator index out of range in '" + tok + "'");
      }
      for (int i = lo; i <= hi; ++i) {
        std::vector<int> digits(factor_count, 0);
        digits[static_cast<size_t>(i - 1)] = 1;
        gens.push_back(digits);
      }
      continue;
    }
    std::vector<int> digits;
    size_t pos = 0;
    while (pos <= tok.size()) {
      size_t colon = tok.find(':', pos);
      if (colon == std::string::npos) colon = tok.size();
      digits.push_back(std::stoi(tok.substr(pos, colon - pos)));
      pos = colon + 1;
      if (colon == tok.size()) break;
    }
    if (digits.size() != factor_count) {
      throw std::runtime_error("generator '" + tok + "' has " +
                               std::to_string(digits.size()) + " digits, want " +
                               std::to_string(factor_count));
    }
    gens.push_back(digits);
  }
  return gens;
}

void print_gadget(const bdnf::GadgetInstance& gi) {
  std::printf("nodes=%d  M=%s", gi.game.n, bdnf::format_double(gi.params.M).c_str());
  std::printf("  alpha=%s beta=%s gamma=%s\n", bdnf::format_double(gi.params.alpha).c_str(),
              bdnf::format_double(gi.params.beta).c_str(),
              bdnf::format_double(gi.params.gamma).c_str());
}

void print_profile(const bdnf::GadgetInstance& gi, const Wiring& w) {
  for (int v = 0; v < w.n; ++v) {
    std::printf("  %-5s ->", gi.roles[static_cast<size_t>(v)].c_str());
    for (int t : w.out[static_cast<size_t>(v)]) {
      std::printf(" %s", gi.roles[static_cast<size_t>(t)].c_str());
    }
    std::printf("\n");
  }
}

void print_walk_summary(const bdnf::WalkResult& res) {
  std::printf("termination=%s steps=%lld deviations=%lld", bdnf::termination_name(res.termination),
              res.total_steps, res.deviations);
  if (res.termination == bdnf::Termination::kLoopDetected) {
    std::printf(" loop_start=%lld period=%lld", res.loop_start, res.loop_period);
  }
  std::printf(" connectivity_step=%lld\n", res.connectivity_step);
}

int run(int argc, char** argv) {
  CLI::App app{"bounded-degree network formation: constructions, dynamics, experiments"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "build a stable uniform (n,k)-wiring");
  int c_n = 0, c_k = 0;
  std::string c_out;
  construct->add_option("--n", c_n, "node count")->required();
  construct->add_option("--k", c_k, "out-degree bound")->required();
  construct->add_option("--out", c_out, "wiring file to write (default stdout)");
  construct->callback([&] {
    enforce_cap(c_n, c_k);
    const Wiring w = bdnf::build_stable(c_n, c_k);
    const GameInstance g = bdnf::uniform_game(c_n, c_k);
    if (c_out.empty()) {
      std::fputs(bdnf::serialize_wiring(w).c_str(), stdout);
    } else {
      bdnf::write_wiring_file(w, c_out);
    }
    std::fprintf(stderr, "stable (n=%d k=%d) social_cost=%s\n", c_n, c_k,
                 bdnf::format_double(bdnf::social_cost(g, w)).c_str());
  });

  // check
  auto* check = app.add_subcommand("check", "exact stability check of a wiring");
  std::string ck_wiring, ck_game;
  bool ck_uniform = false;
  check->add_option("--wiring", ck_wiring, "wiring file")->required();
  check->add_flag("--uniform", ck_uniform, "uniform weights, budgets from the wiring header");
  check->add_option("--game", ck_game, "game file");
  check->callback([&] {
    const Wiring w = bdnf::read_wiring_file(ck_wiring);
    const GameInstance g = load_game(ck_uniform, ck_game, w);
    enforce_game_cap(g);
    report_stability(g, w);
  });

  // best-response
  auto* best = app.add_subcommand("best-response", "exact best response of one node");
  std::string br_wiring, br_game;
  bool br_uniform = false;
  int br_node = 0;
  best->add_option("--wiring", br_wiring, "wiring file")->required();
  best->add_option("--node", br_node, "node id")->required();
  best->add_flag("--uniform", br_uniform, "uniform weights, budgets from the wiring header");
  best->add_option("--game", br_game, "game file");
  best->callback([&] {
    const Wiring w = bdnf::read_wiring_file(br_wiring);
    const GameInstance g = load_game(br_uniform, br_game, w);
    enforce_game_cap(g);
    if (br_node < 0 || br_node >= w.n) throw std::runtime_error("node id out of range");
    const bdnf::BestResponse br = bdnf::best_response(g, w, br_node);
    std::printf("node=%d current_cost=%s best_cost=%s improved=%s targets={%s}\n", br_node,
                bdnf::format_double(br.current_cost).c_str(),
                bdnf::format_double(br.best_cost).c_str(), br.improved ? "yes" : "no",
                join_ints(br.targets, ",").c_str());
  });

  // walk
  auto* walk = app.add_subcommand("walk", "best-response walk from a wiring");
  std::string wk_wiring, wk_game, wk_sched = "round-robin", wk_trace, wk_out;
  bool wk_uniform = false;
  long long wk_max_steps = 0;
  uint64_t wk_seed = 0;
  walk->add_option("--wiring", wk_wiring, "starting wiring file")->required();
  walk->add_flag("--uniform", wk_uniform, "uniform weights, budgets from the wiring header");
  walk->add_option("--game", wk_game, "game file");
  walk->add_option("--scheduler", wk_sched,
                   "round-robin | round-robin-shuffled | max-cost-first | random | tail-chase");
  walk->add_option("--max-steps", wk_max_steps, "step budget (0 = 100 n^2)");
  walk->add_option("--seed", wk_seed, "seed for randomized schedulers");
  walk->add_option("--trace", wk_trace, "write the deviation trace to this file");
  walk->add_option("--out", wk_out, "write the final wiring to this file");
  walk->callback([&] {
    const Wiring w = bdnf::read_wiring_file(wk_wiring);
    const GameInstance g = load_game(wk_uniform, wk_game, w);
    enforce_game_cap(g);
    bdnf::Scheduler sched{bdnf::parse_scheduler(wk_sched), {}, wk_seed};
    bdnf::WalkOptions options;
    options.max_steps = wk_max_steps;
    const bdnf::WalkResult res = bdnf::run_walk(g, w, sched, options);
    print_walk_summary(res);
    std::printf("social_cost=%s\n",
                bdnf::format_double(bdnf::social_cost(g, res.final_wiring)).c_str());
    if (!wk_trace.empty()) bdnf::write_text_file(bdnf::trace_to_text(res), wk_trace);
    if (!wk_out.empty()) bdnf::write_wiring_file(res.final_wiring, wk_out);
  });

  // cayley
  auto* cayley = app.add_subcommand("cayley", "Cayley wirings of abelian groups");
  std::string cy_factors, cy_out;
  std::vector<std::string> cy_gens;
  bool cy_check = false;
  int cy_scan = 0;
  cayley->add_option("--factors", cy_factors, "cyclic factor sizes, e.g. 2,2,2,2,2");
  cayley->add_option("--gens", cy_gens,
                     "generators: e2, e1..e5, or digit tuples like 1:0:2 (plain offsets "
                     "for a single factor)");
  cayley->add_flag("--check-stability", cy_check, "run the exact stability check");
  cayley->add_option("--out", cy_out, "wiring file to write");
  cayley->add_option("--scan-dense", cy_scan,
                     "scan every abelian Cayley wiring with n <= this and k > (n-2)/2");
  cayley->callback([&] {
    if (cy_scan > 0) {
      const auto rows = bdnf::dense_cayley_stability_scan(cy_scan);
      int unstable = 0;
      for (const auto& row : rows) {
        std::string gens;
        for (size_t i = 0; i < row.generators.size(); ++i) {
          if (i) gens += " ";
          gens += join_ints(row.generators[i], ":");
        }
        std::printf("factors=%s n=%d k=%d gens=[%s] %s\n", join_ints(row.factors, ",").c_str(),
                    row.n, row.k, gens.c_str(), row.stable ? "stable" : "UNSTABLE");
        if (!row.stable) ++unstable;
      }
      std::printf("%zu wirings scanned, %d unstable\n", rows.size(), unstable);
      return;
    }
    bdnf::CayleySpec spec;
    spec.factors = parse_int_range(cy_factors);
    spec.generators = parse_generators(cy_gens, spec.factors.size());
    bdnf::validate_cayley(spec);
    const Wiring w = bdnf::generate_cayley(spec);
    if (!cy_out.empty()) bdnf::write_wiring_file(w, cy_out);
    std::fprintf(stderr, "cayley wiring: n=%d k=%d\n", w.n, w.k);
    if (cy_check) {
      enforce_enumeration_budget(w.n, w.k);
      report_stability(bdnf::uniform_game(w.n, w.k), w);
    } else if (cy_out.empty()) {
      std::fputs(bdnf::serialize_wiring(w).c_str(), stdout);
    }
  });

  // gadget
  auto* gadget = app.add_subcommand("gadget", "fixed games without a pure equilibrium");
  gadget->require_subcommand(1);
  auto* asym = gadget->add_subcommand("asymmetric", "11-node k=1 restricted-target gadget");
  double ag_M = 110.0;
  bool ag_walk = false, ag_k2 = false;
  asym->add_option("--M", ag_M, "unreachability penalty, M > 11");
  asym->add_flag("--walk", ag_walk, "round-robin walk from the canonical start profile");
  asym->add_flag("--k2", ag_k2, "two-sink k=2 lift");
  asym->callback([&] {
    const bdnf::GadgetInstance gi =
        ag_k2 ? bdnf::asymmetric_gadget_k2(ag_M) : bdnf::asymmetric_gadget(ag_M);
    print_gadget(gi);
    const bdnf::NeSearchResult res = bdnf::exhaustive_ne_search(gi.game);
    if (res.found) {
      std::printf("pure equilibrium found after %llu profiles:\n",
                  static_cast<unsigned long long>(res.profiles_checked));
      print_profile(gi, res.profile);
    } else {
      std::printf("no pure equilibrium (%llu profiles exhausted)\n",
                  static_cast<unsigned long long>(res.profiles_checked));
    }
    if (ag_walk) {
      if (ag_k2) throw std::runtime_error("--walk replays the k=1 start profile; drop --k2");
      const Wiring start = bdnf::asymmetric_start_profile(gi);
      const bdnf::WalkResult walk_res = bdnf::run_walk(gi.game, start, bdnf::Scheduler{});
      print_walk_summary(walk_res);
    }
  });
  auto* sym = gadget->add_subcommand("symmetric", "11-node k=1 weight-only gadget");
  double sg_M = 12.0, sg_gamma = 1.0, sg_eps = 0.25;
  sym->add_option("--M", sg_M, "unreachability penalty, M > 11");
  sym->add_option("--gamma", sg_gamma, "switch-top weight");
  sym->add_option("--eps", sg_eps, "beta margin, 0 < eps < gamma (M-2)/(M-1)");
  sym->callback([&] {
    const bdnf::GadgetInstance gi = bdnf::symmetric_gadget(sg_M, sg_gamma, sg_eps);
    print_gadget(gi);
    const bdnf::EliminationResult elim = bdnf::iterated_elimination(gi.game);
    uint64_t survivors = 1;
    for (const auto& s : elim.survivors) survivors *= s.size();
    std::printf("elimination: %zu strategies removed in %d rounds, %llu profiles left\n",
                elim.removed.size(), elim.rounds, static_cast<unsigned long long>(survivors));
    const bdnf::NeSearchResult res = bdnf::pruned_ne_search(gi.game);
    if (res.found) {
      std::printf("pure equilibrium found after %llu profiles:\n",
                  static_cast<unsigned long long>(res.profiles_checked));
      print_profile(gi, res.profile);
    } else {
      std::printf("no pure equilibrium (%llu profiles exhausted)\n",
                  static_cast<unsigned long long>(res.profiles_checked));
    }
  });

  // reduce-sat
  auto* reduce = app.add_subcommand("reduce-sat", "3SAT formula to equilibrium-existence game");
  std::string rs_cnf, rs_out;
  bool rs_search = false, rs_exhaustive = false;
  double rs_M = 0.0;
  reduce->add_option("--cnf", rs_cnf, "DIMACS CNF file (clauses of width <= 3)")->required();
  reduce->add_option("--out", rs_out, "game file to write");
  reduce->add_option("--M", rs_M, "unreachability penalty (0 = smallest safe default)");
  reduce->add_flag("--search", rs_search, "search induced assignment profiles for an equilibrium");
  reduce->add_flag("--exhaustive", rs_exhaustive, "certify over the full chooser product");
  reduce->callback([&] {
    const bdnf::CnfFormula f = bdnf::parse_dimacs_text(bdnf::read_text_file(rs_cnf));
    const bdnf::SatReduction r = bdnf::sat_reduction(f, rs_M);
    std::printf("formula: %d variables, %zu clauses -> game with %d nodes\n", f.num_vars,
                f.clauses.size(), r.game.n);
    if (!rs_out.empty()) bdnf::write_game_file(r.game, rs_out);
    if (rs_search) {
      const std::optional<Wiring> ne = bdnf::sat_equilibrium_search(r);
      if (ne.has_value()) {
        std::printf("pure equilibrium found (satisfiable)\n");
      } else {
        std::printf("no equilibrium among induced assignment profiles\n");
      }
    }
    if (rs_exhaustive) {
      const bdnf::NeSearchResult res = bdnf::sat_exhaustive_search(r);
      if (res.found) {
        std::printf("pure equilibrium certified after %llu profiles\n",
                    static_cast<unsigned long long>(res.profiles_checked));
      } else {
        std::printf("no pure equilibrium (%llu profiles certified)\n",
                    static_cast<unsigned long long>(res.profiles_checked));
      }
    }
  });

  // experiment convergence
  auto* experiment = app.add_subcommand("experiment", "batch walk experiments");
  experiment->require_subcommand(1);
  auto* conv = experiment->add_subcommand("convergence", "walk a grid of (n,k) cells to rest");
  std::string cv_ns, cv_ks, cv_family = "regular", cv_sched = "round-robin-shuffled";
  std::string cv_out, cv_initial;
  int cv_trials = 1, cv_threads = 0;
  uint64_t cv_seed = 0;
  long long cv_step_cap = 0;
  conv->add_option("--ns", cv_ns, "node counts, e.g. 8:32 or 8,12,16:24:4")->required();
  conv->add_option("--ks", cv_ks, "degree bounds, e.g. 2:3")->required();
  conv->add_option("--family", cv_family, "regular | random | empty | file");
  conv->add_option("--scheduler", cv_sched, "walk scheduler (default round-robin-shuffled)");
  conv->add_option("--trials", cv_trials, "walks per (n,k) cell");
  conv->add_option("--seed", cv_seed, "experiment seed");
  conv->add_option("--step-cap", cv_step_cap, "per-walk step budget (0 = 100 n^2)");
  conv->add_option("--initial", cv_initial, "wiring file for the file family");
  conv->add_option("--threads", cv_threads, "worker threads (0 = BDNF_THREADS, then hardware)");
  conv->add_option("--out", cv_out, "CSV path (default stdout)");
  conv->callback([&] {
    bdnf::ExperimentConfig cfg;
    cfg.ns = parse_int_range(cv_ns);
    cfg.ks = parse_int_range(cv_ks);
    cfg.family = bdnf::parse_family(cv_family);
    cfg.scheduler = bdnf::parse_scheduler(cv_sched);
    cfg.trials = cv_trials;
    cfg.seed = cv_seed;
    cfg.step_limit = cv_step_cap;
    cfg.initial_file = cv_initial;
    cfg.threads = cv_threads;
    for (int n : cfg.ns) {
      for (int k : cfg.ks) enforce_cap(n, k);
    }
    const auto rows = bdnf::run_convergence_experiment(cfg);
    const std::string csv = bdnf::rows_to_csv(rows);
    if (cv_out.empty()) {
      std::fputs(csv.c_str(), stdout);
    } else {
      bdnf::write_text_file(csv, cv_out);
      std::fprintf(stderr, "%zu rows -> %s\n", rows.size(), cv_out.c_str());
    }
  });

  // find-loop
  auto* find_loop = app.add_subcommand("find-loop", "search random starts for a looping walk");
  int fl_n = 0, fl_k = 0, fl_budget = 2000;
  uint64_t fl_seed = 1;
  std::string fl_out, fl_trace;
  find_loop->add_option("--n", fl_n, "node count")->required();
  find_loop->add_option("--k", fl_k, "out-degree bound")->required();
  find_loop->add_option("--seed", fl_seed, "search seed");
  find_loop->add_option("--budget", fl_budget, "random (start, order) trials");
  find_loop->add_option("--out", fl_out, "write the looping start wiring");
  find_loop->add_option("--trace", fl_trace, "write the looping walk's trace");
  find_loop->callback([&] {
    enforce_cap(fl_n, fl_k);
    const auto hit = bdnf::find_looping_config(fl_n, fl_k, fl_seed, fl_budget);
    if (!hit.has_value()) {
      std::printf("no looping walk in %d trials\n", fl_budget);
      std::exit(1);
    }
    std::printf("loop at trial=%d order=[%s]\n", hit->trial, join_ints(hit->order, ",").c_str());
    print_walk_summary(hit->walk);
    if (!fl_out.empty()) bdnf::write_wiring_file(hit->start, fl_out);
    if (!fl_trace.empty()) bdnf::write_text_file(bdnf::trace_to_text(hit->walk), fl_trace);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
