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

#include "bdnf/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace bdnf {

namespace {

constexpr char kWiringHeader[] = "bdnf-wiring v1";
constexpr char kGameHeader[] = "bdnf-game v1";

// Strips a trailing `# comment` and surrounding whitespace; empty result
// means the line carries nothing.
std::string strip_line(const std::string& raw) {
  std::string s = raw;
  const size_t hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Pulls the next non-empty content line; false at end of stream.
bool next_line(std::istream& in, std::string& out) {
  std::string raw;
  while (std::getline(in, raw)) {
    out = strip_line(raw);
    if (!out.empty()) return true;
  }
  return false;
}

int parse_int(const std::string& tok, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, const char* what) {
  try {
    size_t used = 0;
    double value = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing junk");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ls(line);
  std::string t;
  while (ls >> t) toks.push_back(t);
  return toks;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string serialize_wiring(const Wiring& w) {
  validate_wiring(w);
  std::string out = std::string(kWiringHeader) + "\n";
  out += "n=" + std::to_string(w.n) + " k=" + std::to_string(w.k) + "\n";
  for (int v = 0; v < w.n; ++v) {
    out += std::to_string(v) + ":";
    for (int t : w.out[static_cast<size_t>(v)]) out += " " + std::to_string(t);
    out += "\n";
  }
  return out;
}

Wiring parse_wiring(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != kWiringHeader) {
    throw std::invalid_argument("wiring: missing 'bdnf-wiring v1' header");
  }
  if (!next_line(in, line)) throw std::invalid_argument("wiring: missing shape line");
  auto toks = split_ws(line);
  if (toks.size() != 2 || toks[0].rfind("n=", 0) != 0 || toks[1].rfind("k=", 0) != 0) {
    throw std::invalid_argument("wiring: shape line must be 'n=<n> k=<k>'");
  }
  const int n = parse_int(toks[0].substr(2), "wiring n");
  const int k = parse_int(toks[1].substr(2), "wiring k");
  Wiring w = make_empty_wiring(n, k);
  std::vector<bool> seen(static_cast<size_t>(n), false);
  while (next_line(in, line)) {
    const size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("wiring: node line missing ':' in '" + line + "'");
    }
    const int id = parse_int(strip_line(line.substr(0, colon)), "wiring node id");
    if (id < 0 || id >= n) {
      throw std::invalid_argument("wiring: node id " + std::to_string(id) + " out of range");
    }
    if (seen[static_cast<size_t>(id)]) {
      throw std::invalid_argument("wiring: duplicate line for node " + std::to_string(id));
    }
    seen[static_cast<size_t>(id)] = true;
    for (const auto& t : split_ws(line.substr(colon + 1))) {
      w.out[static_cast<size_t>(id)].push_back(parse_int(t, "wiring target"));
    }
  }
  validate_wiring(w);
  return w;
}

Wiring parse_wiring_text(const std::string& text) {
  std::istringstream in(text);
  return parse_wiring(in);
}

std::string serialize_game(const GameInstance& g) {
  validate_game(g);
  std::string out = std::string(kGameHeader) + "\n";
  if (has_uniform_weights(g)) {
    bool uniform = g.penalty == 10.0 * g.n;
    const int k = g.budgets[0];
    for (int v = 0; v < g.n && uniform; ++v) {
      uniform = g.budgets[static_cast<size_t>(v)] == k &&
                static_cast<int>(g.allowed[static_cast<size_t>(v)].size()) == g.n - 1;
    }
    if (uniform) {
      out += "uniform " + std::to_string(g.n) + " " + std::to_string(k) + "\n";
      return out;
    }
  }
  out += "n=" + std::to_string(g.n) + "\n";
  out += "[budgets]\n";
  for (int v = 0; v < g.n; ++v) {
    out += std::to_string(v) + " " + std::to_string(g.budgets[static_cast<size_t>(v)]) + "\n";
  }
  out += "[weights]\n";
  for (int v = 0; v < g.n; ++v) {
    for (int u = 0; u < g.n; ++u) {
      const double wt = g.weights[static_cast<size_t>(v)][static_cast<size_t>(u)];
      if (wt != 0.0) {
        out += std::to_string(v) + " " + std::to_string(u) + " " + format_double(wt) + "\n";
      }
    }
  }
  bool any_restricted = false;
  for (int v = 0; v < g.n; ++v) {
    if (static_cast<int>(g.allowed[static_cast<size_t>(v)].size()) != g.n - 1) {
      any_restricted = true;
    }
  }
  if (any_restricted) {
    out += "[allowed]\n";
    for (int v = 0; v < g.n; ++v) {
      if (static_cast<int>(g.allowed[static_cast<size_t>(v)].size()) == g.n - 1) continue;
      out += std::to_string(v);
      for (int t : g.allowed[static_cast<size_t>(v)]) out += " " + std::to_string(t);
      out += "\n";
    }
  }
  out += "[penalty]\n" + format_double(g.penalty) + "\n";
  return out;
}

GameInstance parse_game(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != kGameHeader) {
    throw std::invalid_argument("game: missing 'bdnf-game v1' header");
  }
  if (!next_line(in, line)) throw std::invalid_argument("game: empty body");

  auto first = split_ws(line);
  GameInstance g;
  if (first.size() == 3 && first[0] == "uniform") {
    g = uniform_game(parse_int(first[1], "game n"), parse_int(first[2], "game k"));
    if (!next_line(in, line)) return g;
  } else if (first.size() == 1 && first[0].rfind("n=", 0) == 0) {
    const int n = parse_int(first[0].substr(2), "game n");
    if (n < 2) throw std::invalid_argument("game: need n >= 2");
    g.n = n;
    g.budgets.assign(static_cast<size_t>(n), 1);
    g.weights.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    g.allowed.assign(static_cast<size_t>(n), {});
    for (int v = 0; v < n; ++v) {
      for (int u = 0; u < n; ++u) {
        if (u != v) g.allowed[static_cast<size_t>(v)].push_back(u);
      }
    }
    g.penalty = 10.0 * n;
    if (!next_line(in, line)) {
      validate_game(g);
      return g;
    }
  } else {
    throw std::invalid_argument("game: expected 'uniform <n> <k>' or 'n=<n>'");
  }

  std::string section;
  std::vector<bool> allowed_set(static_cast<size_t>(g.n), false);
  do {
    if (line.front() == '[') {
      if (line == "[budgets]" || line == "[weights]" || line == "[allowed]" ||
          line == "[penalty]") {
        section = line;
        continue;
      }
      throw std::invalid_argument("game: unknown section " + line);
    }
    auto toks = split_ws(line);
    if (section == "[budgets]") {
      if (toks.size() != 2) throw std::invalid_argument("game: budgets line needs '<v> <k>'");
      const int v = parse_int(toks[0], "game budget node");
      if (v < 0 || v >= g.n) throw std::invalid_argument("game: budget node out of range");
      g.budgets[static_cast<size_t>(v)] = parse_int(toks[1], "game budget");
    } else if (section == "[weights]") {
      if (toks.size() != 3) throw std::invalid_argument("game: weights line needs '<v> <u> <w>'");
      const int v = parse_int(toks[0], "game weight source");
      const int u = parse_int(toks[1], "game weight target");
      if (v < 0 || v >= g.n || u < 0 || u >= g.n) {
        throw std::invalid_argument("game: weight pair out of range");
      }
      g.weights[static_cast<size_t>(v)][static_cast<size_t>(u)] =
          parse_real(toks[2], "game weight");
    } else if (section == "[allowed]") {
      if (toks.empty()) continue;
      const int v = parse_int(toks[0], "game allowed node");
      if (v < 0 || v >= g.n) throw std::invalid_argument("game: allowed node out of range");
      if (allowed_set[static_cast<size_t>(v)]) {
        throw std::invalid_argument("game: duplicate allowed line for node " +
                                    std::to_string(v));
      }
      allowed_set[static_cast<size_t>(v)] = true;
      g.allowed[static_cast<size_t>(v)].clear();
      for (size_t i = 1; i < toks.size(); ++i) {
        g.allowed[static_cast<size_t>(v)].push_back(parse_int(toks[i], "game allowed target"));
      }
    } else if (section == "[penalty]") {
      if (toks.size() != 1) throw std::invalid_argument("game: penalty needs one value");
      g.penalty = parse_real(toks[0], "game penalty");
    } else {
      throw std::invalid_argument("game: data line before any section");
    }
  } while (next_line(in, line));

  validate_game(g);
  return g;
}

GameInstance parse_game_text(const std::string& text) {
  std::istringstream in(text);
  return parse_game(in);
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_wiring_file(const Wiring& w, const std::string& path) {
  write_text_file(serialize_wiring(w), path);
}

Wiring read_wiring_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_wiring(in);
}

void write_game_file(const GameInstance& g, const std::string& path) {
  write_text_file(serialize_game(g), path);
}

GameInstance read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_game(in);
}

}  // namespace bdnf
