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

#ifndef BDNF_STABLE_CONSTRUCTION_HPP_
#define BDNF_STABLE_CONSTRUCTION_HPP_

#include <utility>
#include <vector>

#include "bdnf/game.hpp"
#include "bdnf/wiring.hpp"

namespace bdnf {

// Skeleton of the constructed wiring: a complete k-ary tree plus t extra
// root-like nodes. Tree labels are 1-based level-order (root 1, hubs
// 2..k+1); the public wiring converts to 0-based ids.
struct TreeLayout {
  int n = 0;
  int k = 0;
  int h = 0;       // tree height, root at level 0
  int n_tree = 0;  // nodes in the complete tree
  int t = 0;       // roots beyond the tree
  int tau = 0;     // full k-tuples over the t+1 roots (node 1 included)
  int t1 = 0;      // roots left over for the bridge
};

TreeLayout compute_layout(int n, int k);

// 1-based level-order helpers.
int first_leaf_label(const TreeLayout& ly);
std::vector<int> subtree_leaves(const TreeLayout& ly, int root_label);

struct TuplePlan {
  // feeder leaf label -> the tuple of root labels it links.
  std::vector<std::pair<int, std::vector<int>>> assignments;
  std::vector<int> bridge_roots;    // untupled roots, bridge-fed
  int bridge_label = 0;             // 0 when no bridge is needed
  std::vector<int> bridge_targets;  // bridge's full target list
};

// Tuple packing and bridge placement for k >= 3. Exposed for tests.
TuplePlan pack_tuples(const TreeLayout& ly);
std::pair<int, std::vector<int>> bridge_wiring(const TreeLayout& ly, const TuplePlan& plan);

// Builds a wiring for n nodes with out-degree k, 1 <= k < n, and verifies
// stability of the uniform game on it before returning. Throws
// std::invalid_argument on bad sizes and std::runtime_error if no stable
// wiring was reached.
Wiring build_stable(int n, int k);

// is_stable with a shortcut: when weights are uniform and every node already
// sits at its utopian cost, no strict improvement can exist. Falls back to
// the full check otherwise.
StabilityReport is_stable_fast(const GameInstance& g, const Wiring& w);

}  // namespace bdnf

#endif  // BDNF_STABLE_CONSTRUCTION_HPP_
