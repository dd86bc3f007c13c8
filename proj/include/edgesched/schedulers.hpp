// Copyright 2026 The edgesched Authors
//
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesched/load_index.hpp"
#include "edgesched/placement.hpp"

namespace edgesched {

enum class Strategy { kTopSet, kTopSetP, kGai, kGag, kBrute };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct ScheduleDiagnostics {
  std::size_t evaluations = 0;
  std::size_t generations = 0;
  std::string reason;  // set on rejection
  // Best valid fitness after each generation (GA only).
  std::vector<double> best_valid_history;
};

struct ScheduleResult {
  bool accepted = false;
  // One mapping for incremental strategies; the full set for GA-Global.
  std::vector<Mapping> mappings;
  double planning_time_sec = 0.0;
  ScheduleDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// TopSet and TopSet/P

/// Places an arriving dataflow by walking its level sets. Within a set,
/// queries go in decreasing edge-class latency. Each query lands on the valid
/// resource minimizing its critical-path-to-here cost (plus the interference
/// penalty when penalty_mode is set). Existing mappings are never touched.
ScheduleResult topset_place(const PlacementState& state, const ResourcePool& pool,
                            const RatedDataflow& dag, bool penalty_mode);

/// Estimated growth of the to-here latencies of the queries already on a
/// resource if (dag, v) joins it. Uses the effective latency
/// lambda * m / (1 + pi(m)) before and after; never negative.
double estimate_penalty(const LoadIndex& loads, ResourceId r, const RatedDataflow& dag, VertexId v);

// ---------------------------------------------------------------------------
// Genetic algorithm

struct GaParams {
  std::size_t population_size = 100;
  std::size_t max_generations = 500;
  double crossover_rate = 0.8;
  double mutation_rate = 0.02;
  std::size_t elite_count = 2;
  std::size_t tournament_size = 2;
  double no_improvement_window_fraction = 0.5;
  // <= 0 selects 10x the mean objective of the initial population.
  double penalty_weight = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Chromosome {
  std::vector<ResourceId> genes;
  double fitness = 0.0;
  double objective = 0.0;
  std::size_t violations = 0;

  bool valid() const { return violations == 0; }
};

/// Queries to place (the genes, in dataflow order) against residual loads.
struct GaProblem {
  std::vector<const RatedDataflow*> dags;
  const LoadIndex* residual = nullptr;  // null means full capacities
};

/// Every query of the active dataflows joined under a dummy source and a
/// dummy sink. Dummies carry no latency or event size and are never placed;
/// gene i of a global chromosome is global vertex i.
struct GlobalDag {
  std::vector<const RatedDataflow*> components;
  std::vector<std::size_t> offsets;  // first global vertex of each component
  std::size_t query_count = 0;
  std::size_t dummy_source = 0;
  std::size_t dummy_sink = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

GlobalDag build_global_dag(const PlacementState& state);

ScheduleResult ga_place(const GaProblem& problem, const ResourcePool& pool, const GaParams& params);

/// GA over the arriving dataflow's queries only, against capacities reduced
/// by what is already running. Prior mappings are kept.
ScheduleResult ga_incremental(const PlacementState& state, const ResourcePool& pool,
                              const RatedDataflow& dag, const GaParams& params);

/// GA over every query of every active dataflow against full capacities. On
/// success the mappings replace the whole set.
ScheduleResult ga_global(const PlacementState& state, const ResourcePool& pool,
                         const GaParams& params);

// ---------------------------------------------------------------------------
// Exhaustive oracle

inline constexpr std::size_t kBruteForceMaxQueries = 8;
inline constexpr std::size_t kBruteForceMaxResources = 5;

struct BruteForceResult {
  bool feasible = false;
  std::vector<Mapping> mappings;
  double objective = 0.0;
  std::size_t valid_count = 0;
  std::size_t enumerated = 0;
};

/// Enumerates all |R|^n joint assignments of the given dataflows on an
/// otherwise empty pool. Mappings come back in input order. Throws kGuard
/// beyond 8 queries or 5 resources.
BruteForceResult brute_force_place(const std::vector<const RatedDataflow*>& dags,
                                   const ResourcePool& pool);

}  // namespace edgesched
