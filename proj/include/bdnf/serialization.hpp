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

#ifndef BDNF_SERIALIZATION_HPP_
#define BDNF_SERIALIZATION_HPP_

#include <iosfwd>
#include <string>

#include "bdnf/game.hpp"
#include "bdnf/wiring.hpp"

namespace bdnf {

// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// Text wiring format, line oriented:
//   bdnf-wiring v1
//   n=<n> k=<k>
//   <id>: <t1> <t2> ...
// Ids are 0-based; a node line may list fewer than k targets and nodes
// without a line have none. Blank lines and `#` comments are ignored.
std::string serialize_wiring(const Wiring& w);
Wiring parse_wiring(std::istream& in);
Wiring parse_wiring_text(const std::string& text);
void write_wiring_file(const Wiring& w, const std::string& path);
Wiring read_wiring_file(const std::string& path);

// Text game format:
//   bdnf-game v1
//   uniform <n> <k>
// or
//   bdnf-game v1
//   n=<n>
//   [budgets]   lines `<v> <k_v>`  (omitted nodes default to 1)
//   [weights]   lines `<v> <u> <w>` (sparse, omitted pairs are 0)
//   [allowed]   lines `<v> <t1> <t2> ...` (omitted nodes allow everyone)
//   [penalty]   one value (defaults to 10 n)
// Both forms accept a trailing [penalty] section; blank lines and `#`
// comments are ignored. Round-trips are bit exact.
std::string serialize_game(const GameInstance& g);
GameInstance parse_game(std::istream& in);
GameInstance parse_game_text(const std::string& text);
void write_game_file(const GameInstance& g, const std::string& path);
GameInstance read_game_file(const std::string& path);

// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& text, const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace bdnf

#endif  // BDNF_SERIALIZATION_HPP_
