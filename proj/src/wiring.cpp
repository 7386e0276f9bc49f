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

#include "bdnf/wiring.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bdnf {

Wiring make_empty_wiring(int n, int k) {
  if (n < 1 || k < 0) {
    throw std::invalid_argument("wiring: need n >= 1 and k >= 0");
  }
  Wiring w;
  w.n = n;
  w.k = k;
  w.out.assign(static_cast<size_t>(n), {});
  return w;
}

void validate_wiring(const Wiring& w) {
  if (w.n < 1) throw std::invalid_argument("wiring: n must be positive");
  if (w.k < 0) throw std::invalid_argument("wiring: k must be non-negative");
  if (static_cast<int>(w.out.size()) != w.n) {
    throw std::invalid_argument("wiring: adjacency size differs from n");
  }
  std::vector<char> seen(static_cast<size_t>(w.n), 0);
  for (int v = 0; v < w.n; ++v) {
    const auto& ts = w.out[static_cast<size_t>(v)];
    if (static_cast<int>(ts.size()) > w.k) {
      throw std::invalid_argument("wiring: node " + std::to_string(v) +
                                  " exceeds out-degree cap " + std::to_string(w.k));
    }
    for (int t : ts) {
      if (t < 0 || t >= w.n) {
        throw std::invalid_argument("wiring: node " + std::to_string(v) +
                                    " has out-of-range target " + std::to_string(t));
      }
      if (t == v) {
        throw std::invalid_argument("wiring: node " + std::to_string(v) + " links itself");
      }
      if (seen[static_cast<size_t>(t)]) {
        throw std::invalid_argument("wiring: node " + std::to_string(v) +
                                    " repeats target " + std::to_string(t));
      }
      seen[static_cast<size_t>(t)] = 1;
    }
    for (int t : ts) seen[static_cast<size_t>(t)] = 0;
  }
}

void normalize_wiring(Wiring& w) {
  for (auto& ts : w.out) std::sort(ts.begin(), ts.end());
}

bool same_wiring(const Wiring& a, const Wiring& b) {
  return a.n == b.n && a.k == b.k && a.out == b.out;
}

}  // namespace bdnf
