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

#include "bdnf/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bdnf/graph.hpp"

namespace bdnf {

namespace {
constexpr int kInf = 1 << 28;
}

GameInstance uniform_game(int n, int k, double penalty) {
  if (n < 2) throw std::invalid_argument("uniform_game: need n >= 2");
  if (k < 1 || k >= n) throw std::invalid_argument("uniform_game: need 1 <= k < n");
  GameInstance g;
  g.n = n;
  g.budgets.assign(static_cast<size_t>(n), k);
  g.weights.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 1.0));
  for (int v = 0; v < n; ++v) g.weights[static_cast<size_t>(v)][static_cast<size_t>(v)] = 0.0;
  g.allowed.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    auto& a = g.allowed[static_cast<size_t>(v)];
    a.reserve(static_cast<size_t>(n - 1));
    for (int t = 0; t < n; ++t) {
      if (t != v) a.push_back(t);
    }
  }
  g.penalty = penalty > 0.0 ? penalty : 10.0 * n;
  validate_game(g);
  return g;
}

void validate_game(const GameInstance& g) {
  if (g.n < 2) throw std::invalid_argument("game: need n >= 2");
  const size_t n = static_cast<size_t>(g.n);
  if (g.budgets.size() != n || g.weights.size() != n || g.allowed.size() != n) {
    throw std::invalid_argument("game: field sizes differ from n");
  }
  if (!(g.penalty > g.n)) {
    throw std::invalid_argument("game: penalty must exceed n");
  }
  for (int v = 0; v < g.n; ++v) {
    if (g.budgets[static_cast<size_t>(v)] < 1) {
      throw std::invalid_argument("game: node " + std::to_string(v) + " has budget < 1");
    }
    const auto& row = g.weights[static_cast<size_t>(v)];
    if (row.size() != n) throw std::invalid_argument("game: weight row size differs from n");
    if (row[static_cast<size_t>(v)] != 0.0) {
      throw std::invalid_argument("game: node " + std::to_string(v) + " weights itself");
    }
    for (double x : row) {
      if (x < 0.0 || !std::isfinite(x)) {
        throw std::invalid_argument("game: weights must be finite and non-negative");
      }
    }
    const auto& a = g.allowed[static_cast<size_t>(v)];
    if (a.empty()) {
      throw std::invalid_argument("game: node " + std::to_string(v) + " has no allowed targets");
    }
    int prev = -1;
    for (int t : a) {
      if (t < 0 || t >= g.n || t == v) {
        throw std::invalid_argument("game: node " + std::to_string(v) +
                                    " has a bad allowed target " + std::to_string(t));
      }
      if (t <= prev) {
        throw std::invalid_argument("game: allowed targets of node " + std::to_string(v) +
                                    " must be sorted and distinct");
      }
      prev = t;
    }
  }
}

bool has_uniform_weights(const GameInstance& g) {
  for (int v = 0; v < g.n; ++v) {
    for (int u = 0; u < g.n; ++u) {
      if (v == u) continue;
      if (g.weights[static_cast<size_t>(v)][static_cast<size_t>(u)] != 1.0) return false;
    }
  }
  return true;
}

double node_cost(const GameInstance& g, const Wiring& w, int v) {
  auto dist = single_source_distances(w.out, v);
  double c = 0.0;
  for (int j = 0; j < g.n; ++j) {
    if (j == v) continue;
    double wj = g.weights[static_cast<size_t>(v)][static_cast<size_t>(j)];
    if (wj == 0.0) continue;
    int d = dist[static_cast<size_t>(j)];
    c += wj * (d == kUnreachable ? g.penalty : d);
  }
  return c;
}

std::vector<double> cost_vector(const GameInstance& g, const Wiring& w) {
  std::vector<double> cs(static_cast<size_t>(g.n));
  for (int v = 0; v < g.n; ++v) cs[static_cast<size_t>(v)] = node_cost(g, w, v);
  return cs;
}

double social_cost(const GameInstance& g, const Wiring& w) {
  double s = 0.0;
  for (int v = 0; v < g.n; ++v) s += node_cost(g, w, v);
  return s;
}

double utopian_cost(const GameInstance& g, int v) {
  if (v < 0 || v >= g.n) throw std::invalid_argument("utopian_cost: node out of range");
  if (!has_uniform_weights(g)) {
    throw std::invalid_argument("utopian_cost: defined for uniform weights only");
  }
  const long long k = g.budgets[static_cast<size_t>(v)];
  long long remaining = g.n - 1;
  long long width = k;
  long long level = 1;
  long long cost = 0;
  while (remaining > 0) {
    long long take = std::min(width, remaining);
    cost += level * take;
    remaining -= take;
    width = std::min(width * k, static_cast<long long>(g.n));
    ++level;
  }
  return static_cast<double>(cost);
}

std::vector<std::vector<int>> residual_distances(const GameInstance& g, const Wiring& w,
                                                 int v) {
  if (v < 0 || v >= g.n) throw std::invalid_argument("residual_distances: node out of range");
  Adjacency adj = w.out;
  adj[static_cast<size_t>(v)].clear();
  return all_pairs_distances(adj);
}

namespace {

// Shared engine: evaluates the cost of target sets against the residual
// table, enumerating legal sets in lexicographic order with a suffix-min
// lower bound for pruning. Ties always resolve to the earliest set seen.
struct ResponseSearch {
  const GameInstance& g;
  int v;
  std::vector<int> cand;
  int kappa = 0;
  std::vector<int> jw_nodes;    // weighted targets j != v
  std::vector<double> jw;       // their weights
  std::vector<std::vector<int>> resid;

  ResponseSearch(const GameInstance& game, const Wiring& w, int node)
      : g(game), v(node), cand(game.allowed[static_cast<size_t>(node)]) {
    kappa = std::min(g.budgets[static_cast<size_t>(v)], static_cast<int>(cand.size()));
    for (int j = 0; j < g.n; ++j) {
      if (j == v) continue;
      double wj = g.weights[static_cast<size_t>(v)][static_cast<size_t>(j)];
      if (wj > 0.0) {
        jw_nodes.push_back(j);
        jw.push_back(wj);
      }
    }
    resid = residual_distances(g, w, v);
  }

  double eval_set(const std::vector<int>& targets) const {
    double c = 0.0;
    for (size_t ji = 0; ji < jw_nodes.size(); ++ji) {
      int j = jw_nodes[ji];
      int dmin = kInf;
      for (int t : targets) {
        int dt = resid[static_cast<size_t>(t)][static_cast<size_t>(j)];
        if (dt != kUnreachable) dmin = std::min(dmin, 1 + dt);
      }
      c += jw[ji] * (dmin >= kInf ? g.penalty : dmin);
    }
    return c;
  }

  // Returns the cheapest kappa-subset of cand, first in lex order among
  // minimizers. seed_cost prunes branches that cannot strictly beat it.
  std::pair<std::vector<int>, double> search(double seed_cost) const {
    const int m = static_cast<int>(cand.size());
    const size_t nj = jw_nodes.size();
    std::vector<int> rows(static_cast<size_t>(m) * nj);
    for (int c = 0; c < m; ++c) {
      const auto& dr = resid[static_cast<size_t>(cand[static_cast<size_t>(c)])];
      for (size_t ji = 0; ji < nj; ++ji) {
        int dt = dr[static_cast<size_t>(jw_nodes[ji])];
        rows[static_cast<size_t>(c) * nj + ji] = dt == kUnreachable ? kInf : 1 + dt;
      }
    }
    std::vector<int> suf(static_cast<size_t>(m + 1) * nj, kInf);
    for (int c = m - 1; c >= 0; --c) {
      for (size_t ji = 0; ji < nj; ++ji) {
        suf[static_cast<size_t>(c) * nj + ji] =
            std::min(suf[static_cast<size_t>(c + 1) * nj + ji],
                     rows[static_cast<size_t>(c) * nj + ji]);
      }
    }
    std::vector<int> minstack(static_cast<size_t>(kappa + 1) * nj, kInf);
    std::vector<int> chosen(static_cast<size_t>(kappa), -1);
    std::vector<int> best_set;
    double best = seed_cost;

    auto level_cost = [&](const int* mins) {
      double c = 0.0;
      for (size_t ji = 0; ji < nj; ++ji) {
        int d = mins[ji];
        c += jw[ji] * (d >= kInf ? g.penalty : d);
      }
      return c;
    };

    // depth = links already fixed; candidates considered from `start` on.
    auto dfs = [&](auto&& self, int start, int depth) -> void {
      const int* cur = minstack.data() + static_cast<size_t>(depth) * nj;
      int* next = minstack.data() + static_cast<size_t>(depth + 1) * nj;
      for (int c = start; c <= m - (kappa - depth); ++c) {
        const int* row = rows.data() + static_cast<size_t>(c) * nj;
        for (size_t ji = 0; ji < nj; ++ji) next[ji] = std::min(cur[ji], row[ji]);
        chosen[static_cast<size_t>(depth)] = c;
        if (depth + 1 == kappa) {
          double cost = level_cost(next);
          if (cost < best) {
            best = cost;
            best_set.resize(static_cast<size_t>(kappa));
            for (int i = 0; i < kappa; ++i) {
              best_set[static_cast<size_t>(i)] = cand[static_cast<size_t>(chosen[static_cast<size_t>(i)])];
            }
          }
        } else {
          const int* sufc = suf.data() + static_cast<size_t>(c + 1) * nj;
          double lb = 0.0;
          for (size_t ji = 0; ji < nj; ++ji) {
            int d = std::min(next[ji], sufc[ji]);
            lb += jw[ji] * (d >= kInf ? g.penalty : d);
          }
          if (lb < best) self(self, c + 1, depth + 1);
        }
      }
    };
    if (kappa > 0) dfs(dfs, 0, 0);
    return {best_set, best};
  }
};

}  // namespace

BestResponse best_response(const GameInstance& g, const Wiring& w, int v) {
  if (v < 0 || v >= g.n) throw std::invalid_argument("best_response: node out of range");
  ResponseSearch rs(g, w, v);
  BestResponse br;
  br.targets = w.out[static_cast<size_t>(v)];
  std::sort(br.targets.begin(), br.targets.end());
  br.current_cost = rs.eval_set(br.targets);
  br.best_cost = br.current_cost;
  auto [set, cost] = rs.search(br.current_cost);
  if (!set.empty() && cost < br.current_cost) {
    br.targets = std::move(set);
    br.best_cost = cost;
    br.improved = true;
  }
  return br;
}

StabilityReport is_stable(const GameInstance& g, const Wiring& w) {
  StabilityReport rep;
  for (int v = 0; v < g.n; ++v) {
    BestResponse br = best_response(g, w, v);
    if (br.improved) {
      rep.stable = false;
      rep.witness = StabilityWitness{v, br.targets, br.current_cost, br.best_cost};
      return rep;
    }
  }
  rep.stable = true;
  return rep;
}

int floor_log(int base, int value) {
  if (base < 2 || value < 1) throw std::invalid_argument("floor_log: need base >= 2, value >= 1");
  int e = 0;
  long long p = 1;
  while (p * base <= value) {
    p *= base;
    ++e;
  }
  return e;
}

long long fairness_gap_bound(int n, int k) {
  if (k == 1) return n;
  return static_cast<long long>(n) + static_cast<long long>(n) * floor_log(k, n);
}

double diameter_bound(int n, int k) {
  if (k < 2) throw std::invalid_argument("diameter_bound: defined for k >= 2");
  double inner = 2.0 * n + static_cast<double>(n) * floor_log(k, n);
  return 2.0 * std::sqrt(inner) + 2.0;
}

}  // namespace bdnf
