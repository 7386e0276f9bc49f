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

#ifndef BDNF_GRAPH_HPP_
#define BDNF_GRAPH_HPP_

#include <optional>
#include <vector>

namespace bdnf {

// "No path" marker in distance tables. Game-level code substitutes the
// game's penalty distance; graph-level code keeps the marker.
inline constexpr int kUnreachable = -1;

using Adjacency = std::vector<std::vector<int>>;

std::vector<int> single_source_distances(const Adjacency& adj, int source);

std::vector<std::vector<int>> all_pairs_distances(const Adjacency& adj);

// Nodes reachable from v, excluding v itself. Range [0, n-1].
int reach_count(const Adjacency& adj, int v);
std::vector<int> reach_counts(const Adjacency& adj);

struct SccResult {
  std::vector<int> component;         // node id -> component id
  int count = 0;
  std::vector<std::vector<int>> dag;  // condensation edges, deduplicated
  std::vector<int> sink_components;   // components without outgoing dag edges
};

SccResult strongly_connected_components(const Adjacency& adj);

bool is_strongly_connected(const Adjacency& adj);

// Largest finite pairwise distance, or nullopt when some ordered pair has
// no path.
std::optional<int> diameter(const Adjacency& adj);

}  // namespace bdnf

#endif  // BDNF_GRAPH_HPP_
