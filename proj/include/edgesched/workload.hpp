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
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "edgesched/model.hpp"
#include "edgesched/placement.hpp"
#include "edgesched/resources.hpp"

namespace edgesched {

// ---------------------------------------------------------------------------
// Dataflow pool

struct DagPoolConfig {
  std::size_t count = 39;
  std::size_t min_vertices = 4;
  std::size_t max_vertices = 50;
  std::size_t max_fan_out = 5;
  std::size_t max_sources = 4;
  std::size_t max_sinks = 3;
  double input_rate = 100.0;
  // Chance of an extra edge from a vertex to a later layer.
  double extra_edge_probability = 0.2;
  // Ceiling on the number of middle layers as a fraction of middle vertices.
  double max_layer_fraction = 0.6;
  std::size_t max_attempts = 200;

  void validate() const;
};

struct DagPool {
  std::vector<DataflowSpec> dataflows;

  /// Vertex count -> indices into dataflows.
  std::map<std::size_t, std::vector<std::size_t>> size_index() const;
};

/// Layered random DAGs. Every dataflow has 4..50 vertices, fan-out at most 5,
/// 1..4 sources sharing the cumulative input rate, 1..3 sinks, and uniformly
/// drawn CEP query types. Candidates TopSet cannot place on an empty copy of
/// the reference pool are rejected and redrawn.
DagPool generate_pool(const DagPoolConfig& config, std::uint64_t seed, const ResourcePool& pool);

// ---------------------------------------------------------------------------
// Utilization and activity models

/// Active query count divided by resource count.
double utilization(const PlacementState& state, const ResourcePool& pool);

enum class ActivityKind { kNone, kArrive, kDepart };

std::string_view to_string(ActivityKind kind);
std::optional<ActivityKind> parse_activity_kind(std::string_view name);

struct Activity {
  ActivityKind kind = ActivityKind::kNone;
  std::size_t pool_index = 0;  // dataflow in the pool
  std::uint64_t instance = 0;  // unique per arrival; departures name it

  friend bool operator==(const Activity&, const Activity&) = default;
};

/// Instance key used for an arrival's dataflow id in the placement state.
std::string instance_id(const DagPool& pool, const Activity& activity);

enum class RwPhase { kAdding, kRemoving };

struct RwDecision {
  ActivityKind kind = ActivityKind::kArrive;
  RwPhase phase = RwPhase::kAdding;
};

/// Hysteresis walk around target +/- band: keep adding while below
/// target + band, then keep removing while above target - band.
RwDecision next_activity_rw(double current_utilization, double target, double band, RwPhase phase);

/// The first warmup intervals add; afterwards removals and additions
/// alternate, starting with a removal.
ActivityKind next_activity_poisson(std::size_t interval, std::size_t warmup);

/// Draws a size with probability proportional to 1/size over the distinct
/// sizes present in the pool.
class InverseSizeSampler {
 public:
  explicit InverseSizeSampler(std::vector<std::size_t> sizes);
  std::size_t operator()(std::mt19937_64& rng);
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  double probability(std::size_t size) const;

 private:
  std::vector<std::size_t> sizes_;
  std::discrete_distribution<std::size_t> dist_;
};

/// Poisson(mean) conditioned on [lo, hi].
class TruncatedPoissonSampler {
 public:
  TruncatedPoissonSampler(double mean, std::size_t lo, std::size_t hi);
  std::size_t operator()(std::mt19937_64& rng);
  double probability(std::size_t size) const;
  std::size_t lo() const { return lo_; }
  std::size_t hi() const { return hi_; }

 private:
  std::size_t lo_;
  std::size_t hi_;
  std::vector<double> pmf_;
  std::discrete_distribution<std::size_t> dist_;
};

// ---------------------------------------------------------------------------
// Workload scripts

enum class WorkloadModel { kRandomWalk, kPoisson };

std::string_view to_string(WorkloadModel model);
std::optional<WorkloadModel> parse_workload_model(std::string_view name);

struct WorkloadConfig {
  WorkloadModel model = WorkloadModel::kRandomWalk;
  std::size_t horizon = 100;
  std::size_t resource_count = 100;
  double target_utilization = 2.0;  // U
  double band = 0.5;                // u
  std::size_t warmup = 16;
  double poisson_mean = 12.0;
  std::size_t removal_attempts = 100;

  /// small: 100 resources, 100 intervals, warmup 16; large: 1000, 400, 70.
  static WorkloadConfig preset(const std::string& name, WorkloadModel model);
  void validate() const;
};

struct WorkloadScript {
  WorkloadConfig config;
  std::uint64_t seed = 0;
  std::vector<Activity> intervals;
};

/// Pre-generates the activity sequence, assuming every arrival is admitted.
WorkloadScript generate_workload(const DagPool& pool, const WorkloadConfig& config,
                                 std::uint64_t seed);

/// Utilization after each interval of the script under the same assumption.
std::vector<double> scripted_utilization(const DagPool& pool, const WorkloadScript& script);

}  // namespace edgesched
