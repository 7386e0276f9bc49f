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

#include "bdnf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bdnf/cayley.hpp"
#include "bdnf/rng.hpp"
#include "bdnf/serialization.hpp"

namespace bdnf {

const char* family_name(WiringFamily f) {
  switch (f) {
    case WiringFamily::kRegular: return "regular";
    case WiringFamily::kRandom: return "random";
    case WiringFamily::kEmpty: return "empty";
    case WiringFamily::kFile: return "file";
  }
  throw std::invalid_argument("family_name: bad family");
}

WiringFamily parse_family(const std::string& name) {
  if (name == "regular") return WiringFamily::kRegular;
  if (name == "random") return WiringFamily::kRandom;
  if (name == "empty") return WiringFamily::kEmpty;
  if (name == "file") return WiringFamily::kFile;
  throw std::invalid_argument("unknown wiring family '" + name + "'");
}

const char* scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kRoundRobin: return "round-robin";
    case SchedulerKind::kRoundRobinShuffled: return "round-robin-shuffled";
    case SchedulerKind::kMaxCostFirst: return "max-cost-first";
    case SchedulerKind::kRandom: return "random";
    case SchedulerKind::kTailChase: return "tail-chase";
  }
  throw std::invalid_argument("scheduler_name: bad kind");
}

SchedulerKind parse_scheduler(const std::string& name) {
  if (name == "round-robin") return SchedulerKind::kRoundRobin;
  if (name == "round-robin-shuffled") return SchedulerKind::kRoundRobinShuffled;
  if (name == "max-cost-first") return SchedulerKind::kMaxCostFirst;
  if (name == "random") return SchedulerKind::kRandom;
  if (name == "tail-chase") return SchedulerKind::kTailChase;
  throw std::invalid_argument("unknown scheduler '" + name + "'");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kStable: return "Stable";
    case Termination::kLoopDetected: return "LoopDetected";
    case Termination::kStepLimit: return "StepLimit";
  }
  throw std::invalid_argument("termination_name: bad termination");
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.ns.empty() || cfg.ks.empty()) {
    throw std::invalid_argument("experiment: n and k ranges must be non-empty");
  }
  if (cfg.trials < 1) throw std::invalid_argument("experiment: need trials >= 1");
  for (int n : cfg.ns) {
    if (n < 2) throw std::invalid_argument("experiment: need n >= 2");
    if (cfg.step_limit != 0 && cfg.step_limit < static_cast<long long>(n) * n) {
      throw std::invalid_argument("experiment: step limit below n^2 for n=" +
                                  std::to_string(n));
    }
  }
  for (int k : cfg.ks) {
    if (k < 1) throw std::invalid_argument("experiment: need k >= 1");
  }
  if (cfg.family == WiringFamily::kFile && cfg.initial_file.empty()) {
    throw std::invalid_argument("experiment: file family needs an initial wiring path");
  }
}

Wiring initial_wiring(WiringFamily family, int n, int k, uint64_t seed,
                      const std::string& file_path) {
  switch (family) {
    case WiringFamily::kRegular: {
      std::vector<int> offsets(static_cast<size_t>(std::min(k, n - 1)));
      for (size_t i = 0; i < offsets.size(); ++i) offsets[i] = static_cast<int>(i) + 1;
      return regular_wiring(n, offsets);
    }
    case WiringFamily::kRandom: {
      // Hamiltonian cycle i -> i+1, then k-1 extra links drawn uniformly
      // from the remaining candidates of each node.
      Wiring w = make_empty_wiring(n, k);
      Rng rng(seed);
      std::vector<int> cand;
      for (int v = 0; v < n; ++v) {
        const int succ = (v + 1) % n;
        auto& outs = w.out[static_cast<size_t>(v)];
        outs.push_back(succ);
        cand.clear();
        for (int u = 0; u < n; ++u) {
          if (u != v && u != succ) cand.push_back(u);
        }
        const int extra = std::min(k - 1, static_cast<int>(cand.size()));
        for (int i = 0; i < extra; ++i) {
          const int j =
              i + static_cast<int>(rng.below(static_cast<uint64_t>(cand.size() - i)));
          std::swap(cand[static_cast<size_t>(i)], cand[static_cast<size_t>(j)]);
          outs.push_back(cand[static_cast<size_t>(i)]);
        }
      }
      normalize_wiring(w);
      validate_wiring(w);
      return w;
    }
    case WiringFamily::kEmpty:
      return make_empty_wiring(n, k);
    case WiringFamily::kFile: {
      Wiring w = read_wiring_file(file_path);
      if (w.n != n || w.k != k) {
        throw std::invalid_argument("experiment: wiring file is " + std::to_string(w.n) +
                                    "/" + std::to_string(w.k) + ", cell wants " +
                                    std::to_string(n) + "/" + std::to_string(k));
      }
      return w;
    }
  }
  throw std::invalid_argument("initial_wiring: bad family");
}

uint64_t row_seed(uint64_t config_seed, int n, int k, WiringFamily family, int trial) {
  uint64_t h = mix64(config_seed ^ 0x6b79746c656e6f64ULL);
  h = mix64(h ^ (static_cast<uint64_t>(n) << 32 | static_cast<uint64_t>(k)));
  h = mix64(h ^ (static_cast<uint64_t>(static_cast<int>(family)) << 16 |
                 static_cast<uint64_t>(trial)));
  return h;
}

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BDNF_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<ExperimentRow> run_convergence_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);

  struct Cell {
    int n, k, trial;
  };
  std::vector<Cell> cells;
  for (int n : cfg.ns) {
    for (int k : cfg.ks) {
      for (int trial = 0; trial < cfg.trials; ++trial) {
        cells.push_back({n, k, trial});
      }
    }
  }

  std::vector<ExperimentRow> rows(cells.size());
  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mu;

  auto worker = [&]() {
    while (true) {
      const size_t i = cursor.fetch_add(1);
      if (i >= cells.size() || failed.load()) break;
      const Cell& cell = cells[i];
      try {
        const uint64_t seed = row_seed(cfg.seed, cell.n, cell.k, cfg.family, cell.trial);
        const GameInstance game = uniform_game(cell.n, cell.k);
        const Wiring start =
            initial_wiring(cfg.family, cell.n, cell.k, seed, cfg.initial_file);
        Scheduler sched{cfg.scheduler, {}, mix64(seed ^ 0x736368656475ULL)};
        WalkOptions options;
        options.max_steps = cfg.step_limit;
        WalkResult res = run_walk(game, start, sched, options);

        ExperimentRow& row = rows[i];
        row.n = cell.n;
        row.k = cell.k;
        row.trial = cell.trial;
        row.seed = seed;
        row.family = cfg.family;
        row.scheduler = cfg.scheduler;
        row.steps = res.total_steps;
        row.deviations = res.deviations;
        row.termination = res.termination;
        row.connectivity_step = res.connectivity_step;
        row.social_cost = social_cost(game, res.final_wiring);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  const int workers = std::min<int>(thread_budget(cfg.threads),
                                    static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("experiment: " + first_error);
  return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "n,k,trial,seed,family,scheduler,steps,deviations,termination,"
      "connectivity_step,social_cost\n";
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::to_string(r.trial) +
           "," + std::to_string(r.seed) + "," + family_name(r.family) + "," +
           scheduler_name(r.scheduler) + "," + std::to_string(r.steps) + "," +
           std::to_string(r.deviations) + "," + termination_name(r.termination) + "," +
           std::to_string(r.connectivity_step) + "," + format_double(r.social_cost) + "\n";
  }
  return out;
}

namespace {

std::string join_targets(const std::vector<int>& targets) {
  if (targets.empty()) return "-";
  std::string s;
  for (size_t i = 0; i < targets.size(); ++i) {
    if (i > 0) s += ";";
    s += std::to_string(targets[i]);
  }
  return s;
}

}  // namespace

std::string trace_to_text(const WalkResult& result) {
  std::string out;
  for (const WalkStep& st : result.trace) {
    out += std::to_string(st.step) + "," + std::to_string(st.node) + "," +
           join_targets(st.old_targets) + "|" + join_targets(st.new_targets) + "," +
           format_double(st.old_cost) + "," + format_double(st.new_cost) + "\n";
  }
  out += "# terminated=" + std::string(termination_name(result.termination)) +
         " steps=" + std::to_string(result.total_steps) +
         " deviations=" + std::to_string(result.deviations);
  if (result.termination == Termination::kLoopDetected) {
    out += " loop_start=" + std::to_string(result.loop_start) +
           " period=" + std::to_string(result.loop_period);
  }
  out += "\n";
  return out;
}

}  // namespace bdnf
