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

#include "bdnf/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace bdnf {

std::vector<int> single_source_distances(const Adjacency& adj, int source) {
  const int n = static_cast<int>(adj.size());
  if (source < 0 || source >= n) {
    throw std::invalid_argument("single_source_distances: source out of range");
  }
  std::vector<int> dist(static_cast<size_t>(n), kUnreachable);
  std::vector<int> queue;
  queue.reserve(static_cast<size_t>(n));
  dist[static_cast<size_t>(source)] = 0;
  queue.push_back(source);
  for (size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    int du = dist[static_cast<size_t>(u)];
    for (int t : adj[static_cast<size_t>(u)]) {
      if (dist[static_cast<size_t>(t)] == kUnreachable) {
        dist[static_cast<size_t>(t)] = du + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

std::vector<std::vector<int>> all_pairs_distances(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> d;
  d.reserve(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) d.push_back(single_source_distances(adj, v));
  return d;
}

int reach_count(const Adjacency& adj, int v) {
  auto dist = single_source_distances(adj, v);
  int r = 0;
  for (size_t j = 0; j < dist.size(); ++j) {
    if (static_cast<int>(j) != v && dist[j] != kUnreachable) ++r;
  }
  return r;
}

std::vector<int> reach_counts(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> rs(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) rs[static_cast<size_t>(v)] = reach_count(adj, v);
  return rs;
}

namespace {

// Iterative Tarjan; recursion would overflow on long chains.
struct TarjanState {
  const Adjacency& adj;
  std::vector<int> index, low, comp;
  std::vector<char> on_stack;
  std::vector<int> stack;
  int next_index = 0;
  int next_comp = 0;

  explicit TarjanState(const Adjacency& a)
      : adj(a),
        index(a.size(), -1),
        low(a.size(), 0),
        comp(a.size(), -1),
        on_stack(a.size(), 0) {}

  void run(int root) {
    // Frames of (node, position in its adjacency list).
    std::vector<std::pair<int, size_t>> frames;
    frames.emplace_back(root, 0);
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& ts = adj[static_cast<size_t>(v)];
      if (pos < ts.size()) {
        int t = ts[pos++];
        if (index[static_cast<size_t>(t)] == -1) {
          index[static_cast<size_t>(t)] = low[static_cast<size_t>(t)] = next_index++;
          stack.push_back(t);
          on_stack[static_cast<size_t>(t)] = 1;
          frames.emplace_back(t, 0);
        } else if (on_stack[static_cast<size_t>(t)]) {
          low[static_cast<size_t>(v)] =
              std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(t)]);
        }
      } else {
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
          while (true) {
            int u = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(u)] = 0;
            comp[static_cast<size_t>(u)] = next_comp;
            if (u == v) break;
          }
          ++next_comp;
        }
        int child = v;
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().first;
          low[static_cast<size_t>(parent)] =
              std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(child)]);
        }
      }
    }
  }
};

}  // namespace

SccResult strongly_connected_components(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  TarjanState st(adj);
  for (int v = 0; v < n; ++v) {
    if (st.index[static_cast<size_t>(v)] == -1) st.run(v);
  }
  SccResult res;
  res.component = std::move(st.comp);
  res.count = st.next_comp;
  res.dag.assign(static_cast<size_t>(res.count), {});
  std::vector<char> has_out(static_cast<size_t>(res.count), 0);
  for (int v = 0; v < n; ++v) {
    int cv = res.component[static_cast<size_t>(v)];
    for (int t : adj[static_cast<size_t>(v)]) {
      int ct = res.component[static_cast<size_t>(t)];
      if (cv != ct) {
        res.dag[static_cast<size_t>(cv)].push_back(ct);
        has_out[static_cast<size_t>(cv)] = 1;
      }
    }
  }
  for (auto& es : res.dag) {
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
  }
  for (int c = 0; c < res.count; ++c) {
    if (!has_out[static_cast<size_t>(c)]) res.sink_components.push_back(c);
  }
  return res;
}

bool is_strongly_connected(const Adjacency& adj) {
  if (adj.empty()) return true;
  auto d = single_source_distances(adj, 0);
  for (int x : d) {
    if (x == kUnreachable) return false;
  }
  // One forward pass plus a pass on the reverse graph settles it.
  Adjacency rev(adj.size());
  for (size_t v = 0; v < adj.size(); ++v) {
    for (int t : adj[v]) rev[static_cast<size_t>(t)].push_back(static_cast<int>(v));
  }
  auto dr = single_source_distances(rev, 0);
  for (int x : dr) {
    if (x == kUnreachable) return false;
  }
  return true;
}

std::optional<int> diameter(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  int best = 0;
  for (int v = 0; v < n; ++v) {
    auto d = single_source_distances(adj, v);
    for (int j = 0; j < n; ++j) {
      if (j == v) continue;
      if (d[static_cast<size_t>(j)] == kUnreachable) return std::nullopt;
      best = std::max(best, d[static_cast<size_t>(j)]);
    }
  }
  return best;
}

}  // namespace bdnf
