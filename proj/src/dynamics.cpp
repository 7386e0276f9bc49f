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

#include "bdnf/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "bdnf/graph.hpp"

namespace bdnf {

namespace {

constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t fnv_mix(uint64_t h, uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

// Two independent hashes of (scheduler position, adjacency); a joint
// collision across both is the only way to misreport a loop.
std::pair<uint64_t, uint64_t> state_hash(const Wiring& w, int pos) {
  uint64_t a = 0xcbf29ce484222325ULL;
  uint64_t b = 0x9ae16a3b2f90404fULL;
  a = fnv_mix(a, static_cast<uint64_t>(pos));
  b = fnv_mix(b ^ 0x517cc1b727220a95ULL, static_cast<uint64_t>(pos) + 0x2545f4914f6cdd1dULL);
  for (int v = 0; v < w.n; ++v) {
    a = fnv_mix(a, static_cast<uint64_t>(w.out[v].size()) + 0x7fffffffULL);
    b = fnv_mix(b, static_cast<uint64_t>(w.out[v].size()) * 0x9e3779b97f4a7c15ULL + 1);
    for (int t : w.out[v]) {
      a = fnv_mix(a, static_cast<uint64_t>(t));
      b = fnv_mix(b, static_cast<uint64_t>(t) * 0xff51afd7ed558ccdULL + 2);
    }
  }
  return {a, b};
}

std::vector<int> tail_chase_order(const Wiring& w) {
  std::vector<int> indeg(w.n, 0);
  for (int v = 0; v < w.n; ++v) {
    for (int t : w.out[v]) indeg[t] += 1;
  }
  std::vector<int> tails;
  for (int v = 0; v < w.n; ++v) {
    if (indeg[v] == 0) tails.push_back(v);
  }
  std::vector<int> order;
  std::vector<bool> seen(w.n, false);
  if (tails.size() == 1) {
    int cur = tails[0];
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = true;
      order.push_back(cur);
      cur = w.out[cur].empty() ? -1 : w.out[cur][0];
    }
  }
  for (int v = 0; v < w.n; ++v) {
    if (!seen[v]) order.push_back(v);
  }
  return order;
}

bool degrees_full(const GameInstance& game, const Wiring& w) {
  for (int v = 0; v < game.n; ++v) {
    const size_t want =
        std::min<size_t>(game.budgets[v], game.allowed[v].size());
    if (w.out[v].size() < want) return false;
  }
  return true;
}

int min_reach(const Wiring& w) {
  const std::vector<int> counts = reach_counts(w.out);
  return *std::min_element(counts.begin(), counts.end());
}

}  // namespace

WalkResult run_walk(const GameInstance& game, const Wiring& start,
                    const Scheduler& sched, const WalkOptions& options) {
  validate_game(game);
  Wiring w = start;
  normalize_wiring(w);
  validate_wiring(w);
  if (w.n != game.n) throw std::invalid_argument("walk: wiring size mismatch");
  const int n = game.n;

  std::vector<int> order = sched.order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  if (sched.kind == SchedulerKind::kRoundRobin ||
      sched.kind == SchedulerKind::kRoundRobinShuffled) {
    std::vector<bool> hit(n, false);
    if (static_cast<int>(order.size()) != n) {
      throw std::invalid_argument("walk: order must cover every node once");
    }
    for (int v : order) {
      if (v < 0 || v >= n || hit[v]) {
        throw std::invalid_argument("walk: order must cover every node once");
      }
      hit[v] = true;
    }
  }

  const bool randomized = sched.kind == SchedulerKind::kRoundRobinShuffled ||
                          sched.kind == SchedulerKind::kRandom;
  const bool detect = options.detect_loops && !randomized;
  const long long max_steps =
      options.max_steps > 0 ? options.max_steps : 100LL * n * n;
  Rng rng(mix64(sched.seed + 0x9e3779b97f4a7c15ULL));

  WalkResult res;
  res.termination = Termination::kStepLimit;

  std::vector<bool> quiet(n, false);
  int quiet_count = 0;
  long long step = 0;
  int idx = 0;

  std::unordered_map<uint64_t, std::vector<std::pair<uint64_t, long long>>> seen;
  auto visit_state = [&](int pos) -> long long {
    const auto [a, b] = state_hash(w, pos);
    auto& bucket = seen[a];
    for (const auto& [other, at] : bucket) {
      if (other == b) return at;
    }
    bucket.push_back({b, step});
    return -1;
  };

  if (is_strongly_connected(w.out)) res.connectivity_step = 0;
  const bool track_reach = options.check_laws || options.record_reach;
  int prev_min_reach = track_reach ? min_reach(w) : -1;
  bool prev_full = degrees_full(game, w);
  if (options.record_reach) res.min_reach_history.push_back(prev_min_reach);

  if (options.stop_when_connected && res.connectivity_step == 0) {
    res.final_wiring = w;
    return res;
  }

  while (step < max_steps) {
    int v = -1;
    BestResponse br;
    bool have_br = false;
    switch (sched.kind) {
      case SchedulerKind::kRoundRobin:
        v = order[idx];
        break;
      case SchedulerKind::kRoundRobinShuffled:
        if (idx == 0) rng.shuffle(order);
        v = order[idx];
        break;
      case SchedulerKind::kRandom:
        v = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        break;
      case SchedulerKind::kTailChase:
        if (idx == 0) order = tail_chase_order(w);
        v = order[idx];
        break;
      case SchedulerKind::kMaxCostFirst: {
        const std::vector<double> costs = cost_vector(game, w);
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        std::stable_sort(ids.begin(), ids.end(), [&](int x, int y) {
          if (costs[x] != costs[y]) return costs[x] > costs[y];
          return x < y;
        });
        for (int cand : ids) {
          BestResponse c = best_response(game, w, cand);
          if (c.improved) {
            v = cand;
            br = std::move(c);
            have_br = true;
            break;
          }
        }
        if (v < 0) {
          res.termination = Termination::kStable;
          res.total_steps = step;
          res.final_wiring = w;
          return res;
        }
        break;
      }
    }

    // Tail-chase orders are derived from the wiring at each round start, so
    // mid-round (wiring, idx) pairs do not determine the walk's future.
    const bool phase_complete = sched.kind != SchedulerKind::kTailChase || idx == 0;
    if (detect && phase_complete) {
      const int pos = sched.kind == SchedulerKind::kMaxCostFirst ? 0 : idx;
      const long long at = visit_state(pos);
      if (at >= 0) {
        res.termination = Termination::kLoopDetected;
        res.loop_start = at;
        res.loop_period = step - at;
        res.total_steps = step;
        res.final_wiring = w;
        return res;
      }
    }

    if (!have_br) br = best_response(game, w, v);
    ++step;

    if (br.improved) {
      std::vector<int> reach_before;
      if (options.check_laws) reach_before = reach_counts(w.out);

      WalkStep ws;
      ws.step = step;
      ws.node = v;
      ws.old_targets = w.out[v];
      ws.new_targets = br.targets;
      ws.old_cost = br.current_cost;
      ws.new_cost = br.best_cost;
      res.trace.push_back(std::move(ws));
      res.deviations += 1;

      w.out[v] = br.targets;
      std::fill(quiet.begin(), quiet.end(), false);
      quiet_count = 0;

      if (options.check_laws) {
        const std::vector<int> reach_after = reach_counts(w.out);
        if (reach_after[v] < reach_before[v]) res.law_violations += 1;
        for (int u = 0; u < n; ++u) {
          if (u == v) continue;
          if (reach_after[u] != reach_before[u] && reach_after[u] < reach_after[v]) {
            res.law_violations += 1;
          }
        }
      }
    } else if (!quiet[v]) {
      quiet[v] = true;
      if (++quiet_count == n) {
        res.termination = Termination::kStable;
        res.total_steps = step;
        res.final_wiring = w;
        return res;
      }
    }

    if (res.connectivity_step < 0 && is_strongly_connected(w.out)) {
      res.connectivity_step = step;
      if (options.stop_when_connected) {
        res.total_steps = step;
        res.final_wiring = w;
        return res;
      }
    }

    if (sched.kind != SchedulerKind::kRandom &&
        sched.kind != SchedulerKind::kMaxCostFirst) {
      idx = (idx + 1) % n;
    }

    if (step % n == 0 && track_reach) {
      const int cur = min_reach(w);
      if (options.record_reach) res.min_reach_history.push_back(cur);
      if (options.check_laws && prev_full && res.connectivity_step < 0 &&
          cur <= prev_min_reach) {
        res.law_violations += 1;
      }
      prev_min_reach = cur;
      prev_full = degrees_full(game, w);
    }
  }

  res.termination = Termination::kStepLimit;
  res.total_steps = step;
  res.final_wiring = w;
  return res;
}

long long connectivity_convergence(const GameInstance& game, const Wiring& start,
                                   const Scheduler& sched, long long max_steps) {
  WalkOptions opt;
  opt.max_steps = max_steps;
  opt.stop_when_connected = true;
  const WalkResult res = run_walk(game, start, sched, opt);
  return res.connectivity_step;
}

Wiring ring_path(int r, int p) {
  if (p < 1 || r <= p) throw std::invalid_argument("ring_path: need r > p >= 1");
  const int n = r + p;
  Wiring w = make_empty_wiring(n, 1);
  for (int i = 0; i < r; ++i) w.out[i] = {(i + 1) % r};
  w.out[r] = {0};
  for (int j = 1; j < p; ++j) w.out[r + j] = {r + j - 1};
  validate_wiring(w);
  return w;
}

Wiring random_wiring(int n, int k, Rng& rng) {
  if (n < 2 || k < 1) throw std::invalid_argument("random_wiring: bad shape");
  Wiring w = make_empty_wiring(n, k);
  const int deg = std::min(k, n - 1);
  std::vector<int> cand(n - 1);
  for (int v = 0; v < n; ++v) {
    int at = 0;
    for (int u = 0; u < n; ++u) {
      if (u != v) cand[at++] = u;
    }
    for (int i = 0; i < deg; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n - 1 - i)));
      std::swap(cand[i], cand[j]);
      w.out[v].push_back(cand[i]);
    }
  }
  normalize_wiring(w);
  validate_wiring(w);
  return w;
}

std::optional<LoopSearch> find_looping_config(int n, int k, uint64_t seed, int budget) {
  if (budget < 1) throw std::invalid_argument("find_looping_config: bad budget");
  const GameInstance game = uniform_game(n, k);
  for (int trial = 0; trial < budget; ++trial) {
    const uint64_t trial_seed = mix64(seed + 0x9e3779b97f4a7c15ULL * (trial + 1));
    Rng rng(trial_seed);
    Wiring start = random_wiring(n, k, rng);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    Scheduler sched;
    sched.kind = SchedulerKind::kRoundRobin;
    sched.order = order;
    WalkOptions opt;
    opt.max_steps = 50LL * n * n;
    opt.detect_loops = true;
    const WalkResult walk = run_walk(game, start, sched, opt);
    if (walk.termination == Termination::kLoopDetected) {
      LoopSearch hit;
      hit.start = std::move(start);
      hit.order = std::move(order);
      hit.trial_seed = trial_seed;
      hit.trial = trial;
      hit.walk = walk;
      return hit;
    }
  }
  return std::nullopt;
}

}  // namespace bdnf
