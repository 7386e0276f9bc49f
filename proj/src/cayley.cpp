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

#include "bdnf/cayley.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "bdnf/game.hpp"
#include "bdnf/graph.hpp"
#include "bdnf/stable_construction.hpp"

namespace bdnf {

void validate_cayley(const CayleySpec& spec) {
  if (spec.factors.empty()) {
    throw std::invalid_argument("cayley: no factors");
  }
  for (int f : spec.factors) {
    if (f < 2) throw std::invalid_argument("cayley: factor < 2");
  }
  if (spec.generators.empty()) {
    throw std::invalid_argument("cayley: no generators");
  }
  std::set<std::vector<int>> seen;
  for (const auto& g : spec.generators) {
    if (g.size() != spec.factors.size()) {
      throw std::invalid_argument("cayley: generator arity mismatch");
    }
    bool zero = true;
    for (size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 0 || g[i] >= spec.factors[i]) {
        throw std::invalid_argument("cayley: generator digit out of range");
      }
      if (g[i] != 0) zero = false;
    }
    if (zero) throw std::invalid_argument("cayley: identity generator");
    if (!seen.insert(g).second) {
      throw std::invalid_argument("cayley: duplicate generator");
    }
  }
}

int group_order(const CayleySpec& spec) {
  long long n = 1;
  for (int f : spec.factors) {
    n *= f;
    if (n > 1000000) throw std::invalid_argument("cayley: group too large");
  }
  return static_cast<int>(n);
}

int element_index(const CayleySpec& spec, const std::vector<int>& digits) {
  int idx = 0;
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    idx = idx * spec.factors[i] + digits[i];
  }
  return idx;
}

std::vector<int> element_digits(const CayleySpec& spec, int index) {
  std::vector<int> digits(spec.factors.size(), 0);
  for (size_t i = spec.factors.size(); i-- > 0;) {
    digits[i] = index % spec.factors[i];
    index /= spec.factors[i];
  }
  return digits;
}

Wiring generate_cayley(const CayleySpec& spec) {
  validate_cayley(spec);
  const int n = group_order(spec);
  const int k = static_cast<int>(spec.generators.size());
  if (k >= n) throw std::invalid_argument("cayley: more generators than non-identity elements");
  Wiring w = make_empty_wiring(n, k);
  for (int u = 0; u < n; ++u) {
    const std::vector<int> du = element_digits(spec, u);
    for (const auto& g : spec.generators) {
      std::vector<int> dv(du.size());
      for (size_t i = 0; i < du.size(); ++i) {
        dv[i] = (du[i] + g[i]) % spec.factors[i];
      }
      w.out[u].push_back(element_index(spec, dv));
    }
  }
  normalize_wiring(w);
  validate_wiring(w);
  return w;
}

CayleySpec circulant_spec(int n, const std::vector<int>& offsets) {
  CayleySpec spec;
  spec.factors = {n};
  for (int o : offsets) spec.generators.push_back({o});
  validate_cayley(spec);
  return spec;
}

Wiring regular_wiring(int n, const std::vector<int>& offsets) {
  return generate_cayley(circulant_spec(n, offsets));
}

CayleySpec hypercube_spec(int dims) {
  if (dims < 1) throw std::invalid_argument("hypercube: dims < 1");
  CayleySpec spec;
  spec.factors.assign(dims, 2);
  for (int i = 0; i < dims; ++i) {
    std::vector<int> g(dims, 0);
    g[i] = 1;
    spec.generators.push_back(g);
  }
  return spec;
}

LabelAnalysis label_sets(const CayleySpec& spec) {
  validate_cayley(spec);
  const int n = group_order(spec);
  const int k = static_cast<int>(spec.generators.size());
  const Wiring w = generate_cayley(spec);

  // Per-node successor list in generator order; the normalized wiring loses
  // the generator identity, so rebuild targets directly.
  std::vector<std::vector<int>> succ(n, std::vector<int>(k));
  for (int u = 0; u < n; ++u) {
    const std::vector<int> du = element_digits(spec, u);
    for (int i = 0; i < k; ++i) {
      std::vector<int> dv(du.size());
      for (size_t d = 0; d < du.size(); ++d) {
        dv[d] = (du[d] + spec.generators[i][d]) % spec.factors[d];
      }
      succ[u][i] = element_index(spec, dv);
    }
  }

  LabelAnalysis out;
  out.dist = single_source_distances(w.out, 0);
  std::vector<std::set<std::vector<int>>> label_set(n);
  label_set[0].insert(std::vector<int>(k, 0));

  int max_d = 0;
  for (int v = 0; v < n; ++v) max_d = std::max(max_d, out.dist[v]);
  std::vector<std::vector<int>> by_dist(max_d + 1);
  for (int v = 0; v < n; ++v) {
    if (out.dist[v] >= 0) by_dist[out.dist[v]].push_back(v);
  }
  for (int d = 0; d < max_d; ++d) {
    for (int u : by_dist[d]) {
      for (int i = 0; i < k; ++i) {
        const int v = succ[u][i];
        if (out.dist[v] != d + 1) continue;
        for (const auto& lab : label_set[u]) {
          std::vector<int> next = lab;
          next[i] += 1;
          label_set[v].insert(std::move(next));
        }
      }
    }
  }

  out.labels.resize(n);
  out.heavy_sets.assign(k, {});
  for (int v = 0; v < n; ++v) {
    out.labels[v].assign(label_set[v].begin(), label_set[v].end());
    std::vector<bool> heavy(k, false);
    for (const auto& lab : out.labels[v]) {
      for (int i = 0; i < k; ++i) {
        if (lab[i] >= 2) heavy[i] = true;
      }
    }
    for (int i = 0; i < k; ++i) {
      if (heavy[i]) out.heavy_sets[i].push_back(v);
    }
  }
  return out;
}

DeviationGain root_deviation_gain(const CayleySpec& spec, int generator_index) {
  validate_cayley(spec);
  const int k = static_cast<int>(spec.generators.size());
  if (generator_index < 0 || generator_index >= k) {
    throw std::invalid_argument("deviation: bad generator index");
  }
  const Wiring w = generate_cayley(spec);
  if (!is_strongly_connected(w.out)) {
    throw std::invalid_argument("deviation: wiring not strongly connected");
  }
  const GameInstance g = uniform_game(w.n, w.k);

  const auto& gen = spec.generators[generator_index];
  std::vector<int> doubled(gen.size());
  for (size_t i = 0; i < gen.size(); ++i) {
    doubled[i] = (gen[i] + gen[i]) % spec.factors[i];
  }
  const int old_target = element_index(spec, gen);
  const int new_target = element_index(spec, doubled);
  if (new_target == 0) {
    throw std::invalid_argument("deviation: generator has order 2");
  }
  for (int i = 0; i < k; ++i) {
    if (i != generator_index && element_index(spec, spec.generators[i]) == new_target) {
      throw std::invalid_argument("deviation: doubled generator collides with an out-link");
    }
  }

  DeviationGain gain;
  gain.generator = generator_index;
  const LabelAnalysis labels = label_sets(spec);
  gain.heavy_count = static_cast<int>(labels.heavy_sets[generator_index].size());
  const auto diam = diameter(w.out);
  gain.diam = *diam;
  gain.lower_bound = static_cast<double>(gain.heavy_count) - (gain.diam + 2);

  Wiring moved = w;
  for (int& t : moved.out[0]) {
    if (t == old_target) t = new_target;
  }
  normalize_wiring(moved);
  gain.exact_delta = node_cost(g, w, 0) - node_cost(g, moved, 0);
  return gain;
}

namespace {

void partitions_of(int e, int max_part, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (e == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(e, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_of(e - p, p, cur, out);
    cur.pop_back();
  }
}

// All abelian groups of order n as descending prime-power factor lists.
std::vector<std::vector<int>> abelian_factorizations(int n) {
  std::vector<std::pair<int, int>> primes;  // (p, exponent)
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      primes.push_back({p, e});
    }
  }
  if (m > 1) primes.push_back({m, 1});

  std::vector<std::vector<int>> groups = {{}};
  for (const auto& [p, e] : primes) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions_of(e, e, cur, parts);
    std::vector<std::vector<int>> next;
    for (const auto& base : groups) {
      for (const auto& part : parts) {
        std::vector<int> factors = base;
        for (int lambda : part) {
          int pw = 1;
          for (int i = 0; i < lambda; ++i) pw *= p;
          factors.push_back(pw);
        }
        next.push_back(std::move(factors));
      }
    }
    groups = std::move(next);
  }
  for (auto& g : groups) std::sort(g.rbegin(), g.rend());
  std::sort(groups.begin(), groups.end());
  return groups;
}

}  // namespace

std::vector<DenseScanRow> dense_cayley_stability_scan(int max_n) {
  if (max_n < 2 || max_n > 16) {
    throw std::invalid_argument("scan: max_n out of supported range");
  }
  std::vector<DenseScanRow> rows;
  for (int n = 2; n <= max_n; ++n) {
    for (const auto& factors : abelian_factorizations(n)) {
      CayleySpec spec;
      spec.factors = factors;
      const int k_min = (n - 2) / 2 + 1;
      for (int k = k_min; k <= n - 1; ++k) {
        // Generator subsets are k-subsets of the non-identity elements.
        std::vector<int> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i + 1;
        while (true) {
          spec.generators.clear();
          for (int idx : pick) spec.generators.push_back(element_digits(spec, idx));
          DenseScanRow row;
          row.factors = factors;
          row.generators = spec.generators;
          row.n = n;
          row.k = k;
          const Wiring w = generate_cayley(spec);
          const GameInstance g = uniform_game(n, k);
          row.stable = is_stable_fast(g, w).stable;
          rows.push_back(std::move(row));

          int i = k - 1;
          while (i >= 0 && pick[i] == n - 1 - (k - 1 - i)) --i;
          if (i < 0) break;
          ++pick[i];
          for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
      }
    }
  }
  return rows;
}

}  // namespace bdnf
