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

#include "bdnf/stable_construction.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "bdnf/graph.hpp"
#include "bdnf/rng.hpp"

namespace bdnf {

namespace {

long long tree_size(int k, int h) {
  long long s = 0, p = 1;
  for (int i = 0; i <= h; ++i) {
    s += p;
    p *= k;
  }
  return s;
}

}  // namespace

TreeLayout compute_layout(int n, int k) {
  if (k < 2 || n <= k) throw std::invalid_argument("compute_layout: need 2 <= k < n");
  TreeLayout ly;
  ly.n = n;
  ly.k = k;
  ly.h = 1;
  while (tree_size(k, ly.h + 1) <= n) ++ly.h;
  ly.n_tree = static_cast<int>(tree_size(k, ly.h));
  ly.t = n - ly.n_tree;
  // Node 1 joins the root pool: t+1 roots in total get fed.
  ly.tau = (ly.t + 1) / k;
  ly.t1 = (ly.t + 1) % k;
  return ly;
}

int first_leaf_label(const TreeLayout& ly) {
  return static_cast<int>(tree_size(ly.k, ly.h - 1)) + 1;
}

std::vector<int> subtree_leaves(const TreeLayout& ly, int root_label) {
  if (root_label < 1 || root_label > ly.n_tree) {
    throw std::invalid_argument("subtree_leaves: label outside the tree");
  }
  const int fl = first_leaf_label(ly);
  long long lo = root_label, hi = root_label;
  while (hi < fl) {
    lo = static_cast<long long>(ly.k) * (lo - 1) + 2;
    hi = static_cast<long long>(ly.k) * (hi - 1) + ly.k + 1;
  }
  std::vector<int> ls;
  for (long long x = lo; x <= hi; ++x) ls.push_back(static_cast<int>(x));
  return ls;
}

namespace {

std::vector<int> root_pool(const TreeLayout& ly) {
  std::vector<int> pool{1};
  for (int r = ly.n_tree + 1; r <= ly.n; ++r) pool.push_back(r);
  return pool;
}

// Feeder leaves in packing order: the first two subtrees under hub 2
// interleaved, then every remaining free leaf in ascending order.
std::vector<int> feeder_sequence(const TreeLayout& ly, const std::set<int>& reserved) {
  std::vector<int> seq;
  std::set<int> used(reserved);
  if (ly.h >= 2) {
    auto a = subtree_leaves(ly, ly.k + 2);
    auto b = subtree_leaves(ly, ly.k + 3);
    for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      if (i < a.size() && !used.count(a[i])) {
        seq.push_back(a[i]);
        used.insert(a[i]);
      }
      if (i < b.size() && !used.count(b[i])) {
        seq.push_back(b[i]);
        used.insert(b[i]);
      }
    }
  }
  const int fl = first_leaf_label(ly);
  for (int leaf = fl; leaf <= ly.n_tree; ++leaf) {
    if (!used.count(leaf)) {
      seq.push_back(leaf);
      used.insert(leaf);
    }
  }
  return seq;
}

}  // namespace

TuplePlan pack_tuples(const TreeLayout& ly) {
  TuplePlan plan;
  auto pool = root_pool(ly);
  std::set<int> reserved;
  if (ly.t1 > 0) {
    plan.bridge_label = ly.h == 1 ? ly.k + 1 : ly.n_tree;
    reserved.insert(plan.bridge_label);
    plan.bridge_roots.assign(pool.end() - ly.t1, pool.end());
  }
  int odd_feeder = 0;
  if (ly.h >= 2 && (ly.tau & 1)) {
    // An odd tuple count parks the last tuple outside the two packed
    // subtrees, on the first leaf under hub 2's third child.
    odd_feeder = subtree_leaves(ly, ly.k + 4).front();
    reserved.insert(odd_feeder);
  }
  auto seq = feeder_sequence(ly, reserved);
  int regular = ly.tau - (odd_feeder != 0 ? 1 : 0);
  if (regular > static_cast<int>(seq.size())) {
    throw std::runtime_error("pack_tuples: not enough free leaves");
  }
  for (int i = 0; i < ly.tau; ++i) {
    std::vector<int> tuple(pool.begin() + static_cast<long>(i) * ly.k,
                           pool.begin() + static_cast<long>(i + 1) * ly.k);
    int feeder = (odd_feeder != 0 && i == ly.tau - 1) ? odd_feeder : seq[static_cast<size_t>(i)];
    plan.assignments.emplace_back(feeder, std::move(tuple));
  }
  if (plan.bridge_label != 0) {
    auto [label, targets] = bridge_wiring(ly, plan);
    plan.bridge_label = label;
    plan.bridge_targets = std::move(targets);
  }
  return plan;
}

std::pair<int, std::vector<int>> bridge_wiring(const TreeLayout& ly, const TuplePlan& plan) {
  if (ly.t1 == 0) return {0, {}};
  const int bridge = ly.h == 1 ? ly.k + 1 : ly.n_tree;
  // Weigh each hub by the roots fed from its subtree's leaves, not counting
  // the bridge's own links. Ties avoid the bridge's own hub: a link there
  // only buys back siblings the hub already reaches.
  std::vector<std::tuple<int, int, int>> hub_weight;  // (-weight, own-hub, label)
  for (int hub = 2; hub <= ly.k + 1; ++hub) {
    if (hub == bridge) continue;
    auto ls = subtree_leaves(ly, hub);
    int w = 0;
    for (const auto& [leaf, tuple] : plan.assignments) {
      if (std::binary_search(ls.begin(), ls.end(), leaf)) w += static_cast<int>(tuple.size());
    }
    const bool own = std::binary_search(ls.begin(), ls.end(), bridge);
    hub_weight.emplace_back(-w, own ? 1 : 0, hub);
  }
  std::sort(hub_weight.begin(), hub_weight.end());
  std::vector<int> targets(plan.bridge_roots);
  for (int i = 0; i < ly.k - ly.t1 && i < static_cast<int>(hub_weight.size()); ++i) {
    targets.push_back(std::get<2>(hub_weight[static_cast<size_t>(i)]));
  }
  return {bridge, targets};
}

StabilityReport is_stable_fast(const GameInstance& g, const Wiring& w) {
  if (has_uniform_weights(g)) {
    bool all_utopian = true;
    for (int v = 0; v < g.n && all_utopian; ++v) {
      if (node_cost(g, w, v) != utopian_cost(g, v)) all_utopian = false;
    }
    if (all_utopian) return {true, std::nullopt};
  }
  return is_stable(g, w);
}

namespace {

void set_targets(Wiring& w, int label, std::vector<int> target_labels) {
  auto& out = w.out[static_cast<size_t>(label - 1)];
  out.clear();
  for (int t : target_labels) out.push_back(t - 1);
  std::sort(out.begin(), out.end());
}

std::vector<int> hub_labels(int k) {
  std::vector<int> hs;
  for (int h = 2; h <= k + 1; ++h) hs.push_back(h);
  return hs;
}

// Base skeleton shared by every k >= 2 recipe: internal nodes feed their
// children, every leaf and extra root links the hubs.
Wiring tree_skeleton(const TreeLayout& ly) {
  Wiring w = make_empty_wiring(ly.n, ly.k);
  const int fl = first_leaf_label(ly);
  for (int v = 1; v < fl; ++v) {
    std::vector<int> children;
    for (int c = ly.k * (v - 1) + 2; c <= ly.k * (v - 1) + ly.k + 1; ++c) children.push_back(c);
    set_targets(w, v, children);
  }
  for (int v = fl; v <= ly.n_tree; ++v) set_targets(w, v, hub_labels(ly.k));
  for (int v = ly.n_tree + 1; v <= ly.n; ++v) set_targets(w, v, hub_labels(ly.k));
  return w;
}

Wiring apply_plan(const TreeLayout&, const TuplePlan& plan, Wiring w) {
  for (const auto& [leaf, tuple] : plan.assignments) set_targets(w, leaf, tuple);
  if (plan.bridge_label != 0) set_targets(w, plan.bridge_label, plan.bridge_targets);
  return w;
}

// Shallow case (h == 1): hubs are the leaves. Feeder hubs spend all links
// on their tuple; idle hubs link the other hubs plus node 1.
Wiring build_shallow(const TreeLayout& ly) {
  Wiring w = make_empty_wiring(ly.n, ly.k);
  auto pool = root_pool(ly);
  for (int r : pool) set_targets(w, r, hub_labels(ly.k));
  const int bridge = ly.t1 > 0 ? ly.k + 1 : 0;
  std::vector<char> busy(static_cast<size_t>(ly.k + 2), 0);
  for (int i = 0; i < ly.tau; ++i) {
    int feeder = 2 + i;
    std::vector<int> tuple(pool.begin() + static_cast<long>(i) * ly.k,
                           pool.begin() + static_cast<long>(i + 1) * ly.k);
    set_targets(w, feeder, tuple);
    busy[static_cast<size_t>(feeder)] = 1;
  }
  if (bridge != 0) {
    std::vector<int> targets(pool.end() - ly.t1, pool.end());
    // Heaviest hubs first: feeders carry their tuple size, others zero.
    std::vector<std::pair<int, int>> order;
    for (int hub = 2; hub <= ly.k; ++hub) {
      order.emplace_back(busy[static_cast<size_t>(hub)] ? -ly.k : 0, hub);
    }
    std::sort(order.begin(), order.end());
    for (int i = 0; i < ly.k - ly.t1 && i < static_cast<int>(order.size()); ++i) {
      targets.push_back(order[static_cast<size_t>(i)].second);
    }
    set_targets(w, bridge, targets);
    busy[static_cast<size_t>(bridge)] = 1;
  }
  for (int hub = 2; hub <= ly.k + 1; ++hub) {
    if (busy[static_cast<size_t>(hub)]) continue;
    std::vector<int> ts;
    for (int other = 2; other <= ly.k + 1; ++other) {
      if (other != hub) ts.push_back(other);
    }
    ts.push_back(1);
    set_targets(w, hub, ts);
  }
  return w;
}

std::vector<int> interleave_free(const std::vector<int>& a, const std::vector<int>& b,
                                 const std::set<int>& reserved) {
  std::vector<int> seq;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    if (i < a.size() && !reserved.count(a[i])) seq.push_back(a[i]);
    if (i < b.size() && !reserved.count(b[i])) seq.push_back(b[i]);
  }
  return seq;
}

// Pair placement for k == 2, split by t mod 4 as the two-link bridge only
// has room for one root and one hub.
Wiring build_two(const TreeLayout& ly) {
  Wiring w = tree_skeleton(ly);
  const int fl = first_leaf_label(ly);
  if (ly.t == 0) {
    set_targets(w, fl, {1, 3});
    return w;
  }
  auto pool = root_pool(ly);
  auto a = subtree_leaves(ly, 4);
  auto b = subtree_leaves(ly, 5);
  auto c = subtree_leaves(ly, 6);
  auto d = subtree_leaves(ly, 7);
  const int bridge = ly.n_tree;
  std::set<int> reserved;
  std::vector<std::pair<int, std::vector<int>>> feeds;

  if (ly.t % 2 == 1) {
    // All t+1 roots pair up; no bridge.
    std::vector<int> seq = interleave_free(a, b, reserved);
    for (int x : interleave_free(c, d, reserved)) seq.push_back(x);
    for (int i = 0; i < ly.tau; ++i) {
      feeds.emplace_back(seq[static_cast<size_t>(i)],
                         std::vector<int>{pool[static_cast<size_t>(2 * i)],
                                          pool[static_cast<size_t>(2 * i + 1)]});
    }
  } else if (ly.t % 4 == 0) {
    reserved.insert(bridge);
    std::vector<int> seq = interleave_free(a, b, reserved);
    for (int x : interleave_free(c, d, reserved)) seq.push_back(x);
    for (int i = 0; i + 1 < static_cast<int>(pool.size()); i += 2) {
      feeds.emplace_back(seq[static_cast<size_t>(i / 2)],
                         std::vector<int>{pool[static_cast<size_t>(i)],
                                          pool[static_cast<size_t>(i + 1)]});
    }
    set_targets(w, bridge, {ly.n, 2});
  } else {
    // t == 2 (mod 4): one pair {1, n-1} sits on the first leaf under hub 3,
    // the bridge feeds n, and the rest pair up as usual.
    int v1 = c.front();
    reserved.insert(bridge);
    reserved.insert(v1);
    feeds.emplace_back(v1, std::vector<int>{1, ly.n - 1});
    std::vector<int> rest(pool.begin() + 1, pool.end() - 2);
    std::vector<int> seq = interleave_free(a, b, reserved);
    for (int x : interleave_free(c, d, reserved)) seq.push_back(x);
    for (int i = 0; i + 1 < static_cast<int>(rest.size()); i += 2) {
      feeds.emplace_back(seq[static_cast<size_t>(i / 2)],
                         std::vector<int>{rest[static_cast<size_t>(i)],
                                          rest[static_cast<size_t>(i + 1)]});
    }
    set_targets(w, bridge, {ly.n, 2});
  }
  for (const auto& [leaf, tuple] : feeds) set_targets(w, leaf, tuple);
  return w;
}

// Short-tuple fallback for k >= 3, h >= 2: when full k-tuples admit a
// profitable grab (two feeders plus one plain leaf reach everything the
// hubs do), each feeder carries only s roots and keeps k-s hub links, so
// no single link is worth stealing. Remainder roots ride on the bridge.
Wiring build_hubbed(const TreeLayout& ly, int s) {
  Wiring w = tree_skeleton(ly);
  auto pool = root_pool(ly);
  const int pool_size = static_cast<int>(pool.size());
  const int tau = pool_size / s;
  const int rem = pool_size % s;
  const int fl = first_leaf_label(ly);
  const int bridge = ly.n_tree;
  if (tau > bridge - fl) throw std::runtime_error("build_hubbed: not enough leaves");

  auto top_hub = [&ly](int label) {
    while (label > ly.k + 1) label = (label - 2) / ly.k + 1;
    return label;
  };
  std::vector<int> hub_load(static_cast<size_t>(ly.k + 2), 0);
  for (int i = 0; i < tau; ++i) {
    const int feeder = fl + i;
    std::vector<int> row(pool.begin() + static_cast<long>(i) * s,
                         pool.begin() + static_cast<long>(i + 1) * s);
    for (int e = s; e < ly.k; ++e) row.push_back(2 + (e - s));
    set_targets(w, feeder, row);
    hub_load[static_cast<size_t>(top_hub(feeder))] += s;
  }
  if (rem > 0) {
    std::vector<int> targets(pool.end() - rem, pool.end());
    const int own = top_hub(bridge);
    std::vector<std::tuple<int, int, int>> order;
    for (int hub = 2; hub <= ly.k + 1; ++hub) {
      order.emplace_back(-hub_load[static_cast<size_t>(hub)], hub == own ? 1 : 0, hub);
    }
    std::sort(order.begin(), order.end());
    for (int i = 0; i < ly.k - rem; ++i) {
      targets.push_back(std::get<2>(order[static_cast<size_t>(i)]));
    }
    set_targets(w, bridge, targets);
  }
  return w;
}

// Best-response passes until every node declines to move. Attempt 0 repairs
// the given wiring; later attempts restart from seeded random wirings.
// Stability needs n distinct quiet nodes since the last deviation, not just
// n consecutive quiet turns across a reshuffle.
bool settle(const GameInstance& g, Wiring& w, uint64_t seed) {
  const int n = g.n;
  const int deg = std::min(g.budgets[0], n - 1);
  const int max_rounds = std::max(80, 6 * n);
  const Wiring given = w;
  for (int attempt = 0; attempt < 24; ++attempt) {
    Rng rng(mix64(seed + static_cast<uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL));
    Wiring cur = given;
    if (attempt > 0) {
      std::vector<int> cand(static_cast<size_t>(n - 1));
      for (int v = 0; v < n; ++v) {
        int at = 0;
        for (int u = 0; u < n; ++u) {
          if (u != v) cand[static_cast<size_t>(at++)] = u;
        }
        cur.out[static_cast<size_t>(v)].clear();
        for (int i = 0; i < deg; ++i) {
          const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n - 1 - i)));
          std::swap(cand[static_cast<size_t>(i)], cand[static_cast<size_t>(j)]);
          cur.out[static_cast<size_t>(v)].push_back(cand[static_cast<size_t>(i)]);
        }
        std::sort(cur.out[static_cast<size_t>(v)].begin(), cur.out[static_cast<size_t>(v)].end());
      }
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<bool> quiet(static_cast<size_t>(n), false);
    int quiet_count = 0;
    for (int round = 0; round < max_rounds && quiet_count < n; ++round) {
      if (attempt > 0 || round > 0) rng.shuffle(order);
      for (int v : order) {
        BestResponse br = best_response(g, cur, v);
        if (br.improved) {
          cur.out[static_cast<size_t>(v)] = br.targets;
          std::fill(quiet.begin(), quiet.end(), false);
          quiet_count = 0;
        } else if (!quiet[static_cast<size_t>(v)]) {
          quiet[static_cast<size_t>(v)] = true;
          if (++quiet_count >= n) break;
        }
      }
    }
    if (quiet_count >= n) {
      w = cur;
      return true;
    }
  }
  return false;
}

}  // namespace

Wiring build_stable(int n, int k) {
  if (n < 2 || k < 1 || k >= n) {
    throw std::invalid_argument("build_stable: need n >= 2 and 1 <= k < n");
  }
  Wiring w;
  if (k == 1) {
    w = make_empty_wiring(n, 1);
    for (int v = 0; v < n; ++v) w.out[static_cast<size_t>(v)] = {(v + 1) % n};
    validate_wiring(w);
    return w;
  }
  if (n == k + 1) {
    w = make_empty_wiring(n, k);
    for (int v = 0; v < n; ++v) {
      for (int u = 0; u < n; ++u) {
        if (u != v) w.out[static_cast<size_t>(v)].push_back(u);
      }
    }
    validate_wiring(w);
    return w;
  }
  if (k == 2 && n <= 6) {
    // Below the tree recipe's reach. Scan offset-pair circulants in order;
    // n=6 has no stable one (exhausted by the exact checker), so that size
    // falls through to the best-response repair.
    GameInstance g = uniform_game(n, k);
    Wiring fallback;
    for (int a = 1; a < n - 1; ++a) {
      for (int b = a + 1; b < n; ++b) {
        Wiring cand = make_empty_wiring(n, 2);
        for (int v = 0; v < n; ++v) {
          cand.out[static_cast<size_t>(v)] = {(v + a) % n, (v + b) % n};
        }
        normalize_wiring(cand);
        validate_wiring(cand);
        if (is_stable_fast(g, cand).stable) return cand;
        if (a == 1 && b == 2) fallback = cand;
      }
    }
    const uint64_t seed = mix64(static_cast<uint64_t>(n) * 1000003ULL + static_cast<uint64_t>(k));
    if (settle(g, fallback, seed)) {
      normalize_wiring(fallback);
      if (is_stable_fast(g, fallback).stable) return fallback;
    }
    throw std::runtime_error("build_stable: no stable wiring reached for n=" +
                             std::to_string(n) + " k=2");
  }

  GameInstance g = uniform_game(n, k);
  TreeLayout ly = compute_layout(n, k);
  std::vector<Wiring> candidates;
  if (k == 2) {
    candidates.push_back(build_two(ly));
  } else if (ly.h == 1) {
    candidates.push_back(build_shallow(ly));
  } else {
    candidates.push_back(apply_plan(ly, pack_tuples(ly), tree_skeleton(ly)));
    for (int s = k - 1; s >= 1; --s) {
      try {
        candidates.push_back(build_hubbed(ly, s));
      } catch (const std::runtime_error&) {
        break;  // not enough leaves; smaller s only needs more
      }
    }
  }
  for (Wiring& cand : candidates) {
    normalize_wiring(cand);
    validate_wiring(cand);
    if (is_stable_fast(g, cand).stable) return cand;
  }

  // No closed-form candidate verified; repair the primary one by seeded
  // best-response play. Deterministic for fixed (n, k).
  w = candidates.front();
  const uint64_t seed = mix64(static_cast<uint64_t>(n) * 1000003ULL + static_cast<uint64_t>(k));
  if (!settle(g, w, seed)) {
    throw std::runtime_error("build_stable: no stable wiring reached for n=" +
                             std::to_string(n) + " k=" + std::to_string(k));
  }
  normalize_wiring(w);
  if (!is_stable_fast(g, w).stable) {
    throw std::runtime_error("build_stable: settle returned an unstable wiring");
  }
  return w;
}

}  // namespace bdnf
