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

#include "edgesched/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <spdlog/spdlog.h>

#include "edgesched/error.hpp"
#include "edgesched/serialization.hpp"

namespace edgesched {

void ScenarioConfig::validate() const {
  pool.validate();
  ga.validate();
  if (!(migration_cost_sec > 0.0)) throw Error(ErrorCode::kConfig, "eta must be positive");
  if (!(psi_max_sec > 0.0)) throw Error(ErrorCode::kConfig, "psi max must be positive");
  if (!(control_interval_sec > 0.0)) {
    throw Error(ErrorCode::kConfig, "control interval must be positive");
  }
  if (strategy == Strategy::kGag && rebalance != RebalanceMode::kNone) {
    throw Error(ErrorCode::kConfig, "GA-Global re-places every dataflow and takes no rebalance");
  }
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n)));
  s.p99 = values[std::max<std::size_t>(rank, 1) - 1];
  s.max = values.back();
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Engine {
  const ScenarioConfig& config;
  const ResourcePool& pool;
  std::vector<DataflowPtr> rated;  // by pool index, before renaming

  GaParams ga_for(std::size_t t) const {
    GaParams p = config.ga;
    p.seed = config.ga.seed + t;
    return p;
  }

  // Re-places every dataflow in `dags` from scratch.
  std::optional<PlacementState> place_globally(const std::vector<DataflowPtr>& dags,
                                               std::size_t t, ScheduleResult& result) const {
    std::vector<const RatedDataflow*> raw;
    for (const auto& d : dags) raw.push_back(d.get());
    if (config.strategy == Strategy::kBrute) {
      const BruteForceResult bf = brute_force_place(raw, pool);
      result.accepted = bf.feasible;
      result.mappings = bf.mappings;
    } else {
      result = ga_place(GaProblem{raw, nullptr}, pool, ga_for(t));
    }
    if (!result.accepted) return std::nullopt;
    PlacementState next;
    for (std::size_t i = 0; i < dags.size(); ++i) next.add(dags[i], result.mappings[i]);
    return next;
  }

  bool global() const {
    return config.strategy == Strategy::kGag || config.strategy == Strategy::kBrute;
  }

  // Applies an arrival; false when the scheduler rejects it.
  bool arrive(PlacementState& state, DataflowPtr dag, std::size_t t) const {
    ScheduleResult result;
    if (global()) {
      std::vector<DataflowPtr> dags;
      for (const auto& [id, active] : state.dataflows()) dags.push_back(active.dag);
      dags.push_back(dag);
      auto next = place_globally(dags, t, result);
      if (!next) return false;
      state = std::move(*next);
      return true;
    }
    switch (config.strategy) {
      case Strategy::kTopSet: result = topset_place(state, pool, *dag, false); break;
      case Strategy::kTopSetP: result = topset_place(state, pool, *dag, true); break;
      default: result = ga_incremental(state, pool, *dag, ga_for(t)); break;
    }
    if (!result.accepted) return false;
    state.add(std::move(dag), result.mappings.front());
    return true;
  }

  void depart(PlacementState& state, const std::string& id, std::size_t t) const {
    if (!state.contains(id)) {
      spdlog::info("t={} departure of {} ignored: it was never admitted", t, id);
      return;
    }
    state.remove(id);
    if (config.strategy != Strategy::kGag || state.empty()) return;
    std::vector<DataflowPtr> dags;
    for (const auto& [did, active] : state.dataflows()) dags.push_back(active.dag);
    ScheduleResult result;
    if (auto next = place_globally(dags, t, result)) state = std::move(*next);
  }
};

}  // namespace

SimTrace run_scenario(const ScenarioConfig& config, const DagPool& dag_pool,
                      const WorkloadScript& script, const IntervalObserver& observer) {
  config.validate();
  return run_scenario(config, build_pool(config.pool, config.seed), dag_pool, script, observer);
}

SimTrace run_scenario(const ScenarioConfig& config, std::shared_ptr<const ResourcePool> pool_ptr,
                      const DagPool& dag_pool, const WorkloadScript& script,
                      const IntervalObserver& observer) {
  config.validate();
  if (!pool_ptr) throw Error(ErrorCode::kConfig, "resource pool is missing");
  const ResourcePool& pool = *pool_ptr;

  Engine engine{config, pool, {}};
  for (const DataflowSpec& spec : dag_pool.dataflows) {
    engine.rated.push_back(std::make_shared<const RatedDataflow>(propagate_rates(spec, pool.catalog())));
  }

  SimTrace trace;
  trace.provenance.seed = config.seed;
  trace.provenance.strategy = std::string(to_string(config.strategy));
  trace.provenance.rebalance = std::string(to_string(config.rebalance));
  trace.provenance.config_hash = content_hash(to_json(config));
  trace.provenance.pool_hash = content_hash(to_json(dag_pool));
  trace.provenance.workload_hash = content_hash(to_json(script));

  PlacementState state;
  for (std::size_t t = 0; t < script.intervals.size(); ++t) {
    const Activity& act = script.intervals[t];
    const PlacementState before = state;
    IntervalRecord rec;
    rec.t = t;
    rec.activity = act;

    const auto started = Clock::now();
    bool changed = false;
    if (act.kind == ActivityKind::kArrive) {
      const std::string id = instance_id(dag_pool, act);
      auto dag = std::make_shared<const RatedDataflow>(
          engine.rated.at(act.pool_index)->renamed(id));
      rec.accepted = engine.arrive(state, std::move(dag), t);
      if (!rec.accepted) spdlog::info("t={} arrival of {} rejected", t, id);
      changed = rec.accepted;
    } else if (act.kind == ActivityKind::kDepart) {
      engine.depart(state, instance_id(dag_pool, act), t);
      changed = true;
    }

    rec.objective_before_rebalance = objective(state, pool);
    if (changed && config.rebalance != RebalanceMode::kNone && !state.empty()) {
      RebalanceOutcome out = rebalance(state, pool, config.rebalance);
      rec.rebalanced = true;
      rec.rebalance_moves = out.plan.moves.size();
      state = std::move(out.state);
    }
    rec.planning_time_sec = std::chrono::duration<double>(Clock::now() - started).count();

    const ConstraintReport report = validate_state(state, pool);
    if (!report.ok()) {
      throw Error(ErrorCode::kInvariant,
                  fmt::format("t={}: state breaks a constraint: {}", t,
                              report.violations.front().detail));
    }

    rec.objective_sec = objective(state, pool);
    rec.migrations = count_migrations(before, state);
    const StabilizationResult psi =
        stabilization_time(before, state, pool, config.migration_cost_sec, config.psi_max_sec);
    rec.stabilization_sec = psi.max_sec;
    rec.warnings = psi.warnings;
    for (const auto& w : psi.warnings) spdlog::warn("t={} {}", t, w);
    rec.utilization = utilization(state, pool);
    rec.active_dataflows = state.size();
    for (const auto& [id, active] : state.dataflows()) {
      rec.per_dag_makespans.emplace_back(id, makespan(*active.dag, active.mapping, pool));
    }

    if (observer) observer(rec, state);
    trace.records.push_back(std::move(rec));
  }

  std::vector<double> obj, plan, mig, stab, util;
  for (const auto& r : trace.records) {
    obj.push_back(r.objective_sec);
    plan.push_back(r.planning_time_sec);
    mig.push_back(static_cast<double>(r.migrations));
    stab.push_back(r.stabilization_sec);
    util.push_back(r.utilization);
    if (r.activity.kind == ActivityKind::kArrive) {
      ++trace.summary.arrivals;
      if (!r.accepted) ++trace.summary.rejected;
    }
  }
  trace.summary.objective = summarize(obj);
  trace.summary.planning_time = summarize(plan);
  trace.summary.migrations = summarize(mig);
  trace.summary.stabilization = summarize(stab);
  trace.summary.utilization = summarize(util);
  trace.final_state = std::move(state);
  return trace;
}

RunComparison compare_runs(const SimTrace& a, const SimTrace& b) {
  const Provenance& pa = a.provenance;
  const Provenance& pb = b.provenance;
  if (pa.seed != pb.seed || pa.strategy != pb.strategy || pa.pool_hash != pb.pool_hash ||
      pa.workload_hash != pb.workload_hash || a.records.size() != b.records.size()) {
    throw Error(ErrorCode::kProvenanceMismatch,
                "traces differ in seed, strategy, dataflow pool, workload or length");
  }
  RunComparison cmp;
  double total = 0.0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    RunComparison::Row row;
    row.t = a.records[i].t;
    row.objective_a = a.records[i].objective_sec;
    row.objective_b = b.records[i].objective_sec;
    row.delta_sec = row.objective_a - row.objective_b;
    row.relative = row.objective_a > 0.0 ? row.delta_sec / row.objective_a : 0.0;
    cmp.max_relative = i == 0 ? row.relative : std::max(cmp.max_relative, row.relative);
    total += row.relative;
    cmp.rows.push_back(row);
  }
  if (!cmp.rows.empty()) cmp.mean_relative = total / static_cast<double>(cmp.rows.size());
  return cmp;
}

namespace {

// Longest source-to-sink path where each vertex runs on `cls_of(v)` alone and
// `hop(u, v)` prices the edge u -> v. Sink latency is left out.
template <typename ClassOf, typename Hop>
double fictitious_makespan(const RatedDataflow& dag, ClassOf cls_of, Hop hop) {
  std::vector<double> reach(dag.vertex_count(), 0.0);
  double best = 0.0;
  for (VertexId v : dag.topo_order()) {
    double in = 0.0;
    for (VertexId u : dag.predecessors(v)) in = std::max(in, reach[u] + hop(u, v));
    reach[v] = in + (dag.is_sink(v) ? 0.0 : dag.latency(v, cls_of(v)));
    if (dag.is_sink(v)) best = std::max(best, reach[v]);
  }
  return best;
}

}  // namespace

double baseline_edge_only(const RatedDataflow& dag, const ResourcePool& pool) {
  return fictitious_makespan(
      dag, [&](VertexId v) { return dag.is_sink(v) ? ResourceClass::kCloud : ResourceClass::kEdge; },
      [&](VertexId u, VertexId v) {
        return dag.is_sink(v)
                   ? pool.min_link_cost(ResourceClass::kEdge, ResourceClass::kCloud,
                                        dag.event_size(u))
                   : 0.0;
      });
}

double baseline_cloud_only(const RatedDataflow& dag, const ResourcePool& pool) {
  return fictitious_makespan(
      dag,
      [&](VertexId v) { return dag.is_source(v) ? ResourceClass::kEdge : ResourceClass::kCloud; },
      [&](VertexId u, VertexId) {
        return dag.is_source(u)
                   ? pool.min_link_cost(ResourceClass::kEdge, ResourceClass::kCloud,
                                        dag.event_size(u))
                   : 0.0;
      });
}

}  // namespace edgesched
