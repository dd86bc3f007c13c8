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
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "edgesched/placement.hpp"
#include "edgesched/rebalance.hpp"
#include "edgesched/resources.hpp"
#include "edgesched/schedulers.hpp"
#include "edgesched/workload.hpp"

namespace edgesched {

struct ScenarioConfig {
  PoolConfig pool;
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::kTopSetP;
  RebalanceMode rebalance = RebalanceMode::kNone;
  double migration_cost_sec = 1.0;  // eta
  double psi_max_sec = 60.0;
  GaParams ga;
  // Logical length of a control interval; informational only.
  double control_interval_sec = 1.0;

  void validate() const;
};

struct IntervalRecord {
  std::size_t t = 0;
  Activity activity;
  bool accepted = true;
  double objective_sec = 0.0;
  double planning_time_sec = 0.0;
  std::size_t migrations = 0;
  double stabilization_sec = 0.0;
  double utilization = 0.0;
  std::vector<std::pair<std::string, double>> per_dag_makespans;

  // Rebalance bookkeeping for this interval (zero when no pass ran).
  bool rebalanced = false;
  std::size_t rebalance_moves = 0;
  double objective_before_rebalance = 0.0;
  std::size_t active_dataflows = 0;
  std::vector<std::string> warnings;
};

struct MetricSummary {
  double mean = 0.0;
  double median = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

MetricSummary summarize(std::vector<double> values);

struct TraceSummary {
  MetricSummary objective;
  MetricSummary planning_time;
  MetricSummary migrations;
  MetricSummary stabilization;
  MetricSummary utilization;
  std::size_t arrivals = 0;
  std::size_t rejected = 0;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string strategy;
  std::string rebalance;
  std::string config_hash;
  std::string pool_hash;
  std::string workload_hash;
};

struct SimTrace {
  Provenance provenance;
  std::vector<IntervalRecord> records;
  TraceSummary summary;
  PlacementState final_state;
};

/// Called after every interval with the committed state.
using IntervalObserver = std::function<void(const IntervalRecord&, const PlacementState&)>;

/// Plays the workload script one control interval at a time: applies the
/// activity, invokes the configured strategy and rebalance pass, and records
/// the metrics. Rejected arrivals leave the state untouched.
SimTrace run_scenario(const ScenarioConfig& config, const DagPool& dag_pool,
                      const WorkloadScript& script, const IntervalObserver& observer = {});

/// Same, with a pool the caller already built from config.pool and config.seed.
SimTrace run_scenario(const ScenarioConfig& config, std::shared_ptr<const ResourcePool> pool,
                      const DagPool& dag_pool, const WorkloadScript& script,
                      const IntervalObserver& observer = {});

struct RunComparison {
  struct Row {
    std::size_t t = 0;
    double objective_a = 0.0;
    double objective_b = 0.0;
    double delta_sec = 0.0;     // a - b
    double relative = 0.0;      // (a - b) / a, positive when b is better
  };
  std::vector<Row> rows;
  double max_relative = 0.0;
  double mean_relative = 0.0;
};

/// Per-interval objective deltas of b against a. Throws kProvenanceMismatch
/// unless both traces come from the same pool, workload and strategy.
RunComparison compare_runs(const SimTrace& a, const SimTrace& b);

// Baselines that ignore every constraint; used as weak lower bounds.

/// Every non-sink query on its own edge device with free edge-to-edge links;
/// one edge-to-cloud hop (the cheapest in the pool) into each sink.
double baseline_edge_only(const RatedDataflow& dag, const ResourcePool& pool);

/// Every non-source query on its own cloud VM with free cloud-to-cloud links;
/// one edge-to-cloud hop (the cheapest in the pool) out of each source.
double baseline_cloud_only(const RatedDataflow& dag, const ResourcePool& pool);

}  // namespace edgesched
