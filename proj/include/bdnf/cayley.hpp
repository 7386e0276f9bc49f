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

#ifndef BDNF_CAYLEY_HPP_
#define BDNF_CAYLEY_HPP_

#include <vector>

#include "bdnf/wiring.hpp"

namespace bdnf {

// Direct product of cyclic groups; a generator is a digit vector, one entry
// per factor. Element ids are mixed-radix with the first factor most
// significant.
struct CayleySpec {
  std::vector<int> factors;
  std::vector<std::vector<int>> generators;
};

void validate_cayley(const CayleySpec& spec);
int group_order(const CayleySpec& spec);
int element_index(const CayleySpec& spec, const std::vector<int>& digits);
std::vector<int> element_digits(const CayleySpec& spec, int index);

// Every node links node + g for each generator g.
Wiring generate_cayley(const CayleySpec& spec);

// Single cyclic factor; offsets in [1, n-1], distinct.
CayleySpec circulant_spec(int n, const std::vector<int>& offsets);
Wiring regular_wiring(int n, const std::vector<int>& offsets);

CayleySpec hypercube_spec(int dims);

struct LabelAnalysis {
  std::vector<int> dist;  // BFS distance from the identity node
  // labels[v]: generator use-count vectors of v's shortest paths.
  std::vector<std::vector<std::vector<int>>> labels;
  // heavy_sets[i]: nodes with a shortest path using generator i twice or more.
  std::vector<std::vector<int>> heavy_sets;
};

LabelAnalysis label_sets(const CayleySpec& spec);

struct DeviationGain {
  int generator = -1;
  int heavy_count = 0;       // |heavy_sets[generator]|
  int diam = 0;
  double lower_bound = 0.0;  // heavy_count - (diam + 2)
  double exact_delta = 0.0;  // old cost minus cost after the re-pointed link
};

// Node 0 re-points its generator-i link to the generator applied twice, in
// the uniform game on the Cayley wiring. Throws when the doubled generator
// is the identity or collides with another out-link, or when the wiring is
// not strongly connected.
DeviationGain root_deviation_gain(const CayleySpec& spec, int generator_index);

struct DenseScanRow {
  std::vector<int> factors;
  std::vector<std::vector<int>> generators;
  int n = 0;
  int k = 0;
  bool stable = false;
};

// Every abelian group of order <= max_n, every generator set with
// k > (n-2)/2: checks stability of the uniform game on the Cayley wiring.
std::vector<DenseScanRow> dense_cayley_stability_scan(int max_n);

}  // namespace bdnf

#endif  // BDNF_CAYLEY_HPP_
