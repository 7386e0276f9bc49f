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

#ifndef BDNF_WIRING_HPP_
#define BDNF_WIRING_HPP_

#include <vector>

namespace bdnf {

// A wiring gives every node an out-neighbor set. k caps the out-degree;
// individual nodes may use fewer links. Node ids are 0-based everywhere.
struct Wiring {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> out;
};

Wiring make_empty_wiring(int n, int k);

// Throws std::invalid_argument on out-of-range ids, self-loops, repeated
// targets, or an adjacency list longer than k.
void validate_wiring(const Wiring& w);

// Sorts every adjacency list ascending. Library code keeps wirings in this
// canonical form; constructors and parsers normalize on the way in.
void normalize_wiring(Wiring& w);

bool same_wiring(const Wiring& a, const Wiring& b);

}  // namespace bdnf

#endif  // BDNF_WIRING_HPP_
