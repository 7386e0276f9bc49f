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

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdnf/game.hpp"
#include "bdnf/serialization.hpp"
#include "bdnf/stable_construction.hpp"
#include "bdnf/wiring.hpp"
#include "doctest.h"

namespace {

using bdnf::GameInstance;
using bdnf::Wiring;

}  // namespace

TEST_CASE("wiring round-trips are byte stable") {
  Wiring w = bdnf::build_stable(7, 2);
  const std::string text = bdnf::serialize_wiring(w);
  Wiring back = bdnf::parse_wiring_text(text);
  CHECK(back.n == w.n);
  CHECK(back.k == w.k);
  CHECK(back.out == w.out);
  CHECK(bdnf::serialize_wiring(back) == text);
}

TEST_CASE("wiring parser tolerates comments and missing node lines") {
  Wiring w = bdnf::parse_wiring_text(
      "# leading comment\n"
      "bdnf-wiring v1\n"
      "n=4 k=1\n"
      "\n"
      "0: 1\n");
  CHECK(w.n == 4);
  CHECK(w.k == 1);
  CHECK(w.out[0] == std::vector<int>{1});
  CHECK(w.out[1].empty());
  CHECK(w.out[2].empty());
  CHECK(w.out[3].empty());
}

TEST_CASE("wiring parser rejects malformed inputs") {
  // Self loop.
  CHECK_THROWS_AS(bdnf::parse_wiring_text(
                      "bdnf-wiring v1\nn=5 k=2\n0: 1 2\n3: 3\n"),
                  std::invalid_argument);
  // Degree above k.
  CHECK_THROWS_AS(bdnf::parse_wiring_text(
                      "bdnf-wiring v1\nn=5 k=2\n0: 1 2 3\n"),
                  std::invalid_argument);
  // Duplicate target.
  CHECK_THROWS_AS(bdnf::parse_wiring_text(
                      "bdnf-wiring v1\nn=5 k=2\n0: 1 1\n"),
                  std::invalid_argument);
  // Duplicate node line.
  CHECK_THROWS_AS(bdnf::parse_wiring_text(
                      "bdnf-wiring v1\nn=5 k=2\n1: 2\n1: 3\n"),
                  std::invalid_argument);
  // Target out of range.
  CHECK_THROWS_AS(bdnf::parse_wiring_text(
                      "bdnf-wiring v1\nn=4 k=1\n0: 9\n"),
                  std::invalid_argument);
  // Wrong magic and wrong version.
  CHECK_THROWS_AS(bdnf::parse_wiring_text("wiring v1\nn=4 k=1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bdnf::parse_wiring_text("bdnf-wiring v2\nn=4 k=1\n"),
                  std::invalid_argument);
}

TEST_CASE("uniform games keep the compact form through a round-trip") {
  GameInstance g = bdnf::uniform_game(7, 2);
  const std::string text = bdnf::serialize_game(g);
  GameInstance back = bdnf::parse_game_text(text);
  CHECK(back.n == g.n);
  CHECK(back.budgets == g.budgets);
  CHECK(back.weights == g.weights);
  CHECK(back.allowed == g.allowed);
  CHECK(back.penalty == g.penalty);
  CHECK(bdnf::serialize_game(back) == text);
}

TEST_CASE("general games round-trip bit exactly") {
  GameInstance g;
  g.n = 4;
  g.budgets = {1, 2, 1, 1};
  g.weights.assign(4, std::vector<double>(4, 0.0));
  g.weights[0][1] = 2.5;
  g.weights[1][2] = 0.125;
  g.weights[2][0] = 1.0 / 3.0;
  g.weights[3][0] = 1.0;
  g.allowed = {{1, 2, 3}, {0, 2, 3}, {0, 1}, {0, 1, 2}};
  g.penalty = 17.5;
  bdnf::validate_game(g);

  const std::string text = bdnf::serialize_game(g);
  GameInstance back = bdnf::parse_game_text(text);
  CHECK(back.n == g.n);
  CHECK(back.budgets == g.budgets);
  CHECK(back.weights == g.weights);
  CHECK(back.allowed == g.allowed);
  CHECK(back.penalty == g.penalty);
  CHECK(bdnf::serialize_game(back) == text);
}

TEST_CASE("game parser rejects a bad header") {
  CHECK_THROWS_AS(bdnf::parse_game_text("uniform 5 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(bdnf::parse_game_text("bdnf-game v2\nuniform 5 2\n"),
                  std::invalid_argument);
}

TEST_CASE("format_double is shortest and parses back exactly") {
  CHECK(bdnf::format_double(1.0) == "1");
  CHECK(bdnf::format_double(0.5) == "0.5");
  CHECK(bdnf::format_double(0.1) == "0.1");
  CHECK(bdnf::format_double(-2.0) == "-2");
  for (double x : {1.0 / 3.0, 0.1, 1e300, 3.14159265358979, -7.0 / 11.0}) {
    CHECK(std::stod(bdnf::format_double(x)) == x);
  }
}

TEST_CASE("file helpers round-trip and report failures") {
  const std::string dir = "/tmp/bdnf_ser_test";
  std::remove((dir + "/w.txt").c_str());

  Wiring w = bdnf::build_stable(9, 2);
  const std::string path = "/tmp/bdnf_ser_test_wiring.txt";
  bdnf::write_wiring_file(w, path);
  Wiring back = bdnf::read_wiring_file(path);
  CHECK(back.out == w.out);
  std::remove(path.c_str());

  const std::string tpath = "/tmp/bdnf_ser_test_text.txt";
  bdnf::write_text_file("hello\n", tpath);
  CHECK(bdnf::read_text_file(tpath) == "hello\n");
  std::remove(tpath.c_str());

  CHECK_THROWS_AS(bdnf::read_text_file("/tmp/bdnf_no_such_file_42"),
                  std::runtime_error);
  CHECK_THROWS_AS(bdnf::write_text_file("x", "/tmp/no_dir_42/x.txt"),
                  std::runtime_error);
}
