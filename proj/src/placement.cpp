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

#include "edgesched/placement.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "edgesched/error.hpp"

namespace edgesched {

void PlacementState::add(DataflowPtr dag, Mapping mapping) {
  if (!dag) throw Error(ErrorCode::kConfig, "null dataflow");
  if (mapping.dataflow_id != dag->id()) {
    throw Error(ErrorCode::kConfig, fmt::format("mapping id '{}' does not match dataflow '{}'",
                                                mapping.dataflow_id, dag->id()));
  }
  if (mapping.size() != dag->vertex_count() || !mapping.complete()) {
    throw Error(ErrorCode::kIncompleteMapping, fmt::format("{}: mapping is partial", dag->id()));
  }
  if (contains(dag->id())) {
    throw Error(ErrorCode::kConfig, fmt::format("dataflow '{}' is already active", dag->id()));
  }
  std::string key = dag->id();
  dataflows_.emplace(std::move(key), ActiveDataflow{std::move(dag), std::move(mapping)});
}

void PlacementState::remove(const std::string& dataflow_id) {
  if (dataflows_.erase(dataflow_id) == 0) {
    throw Error(ErrorCode::kNotFound, fmt::format("dataflow '{}' is not active", dataflow_id));
  }
}

const ActiveDataflow& PlacementState::at(const std::string& dataflow_id) const {
  auto it = dataflows_.find(dataflow_id);
  if (it == dataflows_.end()) {
    throw Error(ErrorCode::kNotFound, fmt::format("dataflow '{}' is not active", dataflow_id));
  }
  return it->second;
}

void PlacementState::reassign(const std::string& dataflow_id, VertexId v, ResourceId to) {
  auto it = dataflows_.find(dataflow_id);
  if (it == dataflows_.end()) {
    throw Error(ErrorCode::kNotFound, fmt::format("dataflow '{}' is not active", dataflow_id));
  }
  if (v >= it->second.mapping.size()) {
    throw Error(ErrorCode::kNotFound, fmt::format("{}: no vertex {}", dataflow_id, v));
  }
  it->second.mapping.assignments[v] = to;
}

void PlacementState::replace_mapping(Mapping mapping) {
  auto it = dataflows_.find(mapping.dataflow_id);
  if (it == dataflows_.end()) {
    throw Error(ErrorCode::kNotFound,
                fmt::format("dataflow '{}' is not active", mapping.dataflow_id));
  }
  if (mapping.size() != it->second.dag->vertex_count() || !mapping.complete()) {
    throw Error(ErrorCode::kIncompleteMapping,
                fmt::format("{}: mapping is partial", mapping.dataflow_id));
  }
  it->second.mapping = std::move(mapping);
}

std::size_t PlacementState::vertex_count() const {
  std::size_t n = 0;
  for (const auto& [id, active] : dataflows_) n += active.dag->vertex_count();
  return n;
}

std::map<ResourceId, std::vector<QueryRef>> PlacementState::per_resource_load() const {
  std::map<ResourceId, std::vector<QueryRef>> load;
  for (const auto& [id, active] : dataflows_) {
    for (VertexId v = 0; v < active.mapping.size(); ++v) {
      load[active.mapping[v]].push_back(QueryRef{id, v});
    }
  }
  return load;
}

void ConstraintReport::record(Violation v) {
  switch (v.constraint) {
    case ConstraintId::kPlacementClass: c1_ok = false; break;
    case ConstraintId::kComputeCapacity: c2_ok = false; break;
    case ConstraintId::kEnergy: c3_ok = false; break;
  }
  violations.push_back(std::move(v));
}

void ConstraintReport::merge(const ConstraintReport& other) {
  for (const Violation& v : other.violations) record(v);
}

ConstraintReport check_constraint1(const PlacementState& state, const ResourcePool& pool) {
  ConstraintReport report;
  for (const auto& [id, active] : state.dataflows()) {
    const RatedDataflow& dag = *active.dag;
    for (VertexId v = 0; v < dag.vertex_count(); ++v) {
      const ResourceId r = active.mapping[v];
      const ResourceClass cls = pool.resource(r).cls;
      if (dag.is_source(v) && cls != ResourceClass::kEdge) {
        report.record({ConstraintId::kPlacementClass, id, v, r, "source query on a cloud VM"});
      } else if (dag.is_sink(v) && cls != ResourceClass::kCloud) {
        report.record({ConstraintId::kPlacementClass, id, v, r, "sink query on an edge device"});
      }
    }
  }
  return report;
}

ConstraintReport check_constraint2(const PlacementState& state, const ResourcePool& pool) {
  ConstraintReport report;
  const ParallelismTable& pi = pool.catalog().parallelism();
  for (const auto& [r, queries] : state.per_resource_load()) {
    const ResourceClass cls = pool.resource(r).cls;
    std::size_t m = 0;
    double latency_sum = 0.0;
    for (const QueryRef& q : queries) {
      const RatedDataflow& dag = *state.at(q.dataflow_id).dag;
      if (dag.is_source(q.vertex)) continue;
      ++m;
      latency_sum += dag.latency(q.vertex, cls);
    }
    if (m == 0) continue;
    const double bound = pi.capacity_factor(m) / latency_sum;
    for (const QueryRef& q : queries) {
      const RatedDataflow& dag = *state.at(q.dataflow_id).dag;
      if (dag.is_source(q.vertex)) continue;
      const double rate = dag.in_rate(q.vertex);
      if (!(rate < bound)) {
        report.record({ConstraintId::kComputeCapacity, q.dataflow_id, q.vertex, r,
                       fmt::format("in-rate {:.6g} e/s not below bound {:.6g} e/s ({} queries)",
                                   rate, bound, m)});
      }
    }
  }
  return report;
}

ConstraintReport check_constraint3(const PlacementState& state, const ResourcePool& pool) {
  ConstraintReport report;
  const auto load = state.per_resource_load();
  for (ResourceId r : pool.edge_ids()) {
    const Resource& res = pool.resource(r);
    double incremental = 0.0;  // mAh per second
    if (auto it = load.find(r); it != load.end()) {
      for (const QueryRef& q : it->second) {
        const RatedDataflow& dag = *state.at(q.dataflow_id).dag;
        if (dag.is_source(q.vertex)) continue;
        incremental += dag.in_rate(q.vertex) * dag.energy(q.vertex, ResourceClass::kEdge);
      }
    }
    const double drain = res.recharge_interval_sec * (res.base_load_ma / 3600.0 + incremental);
    if (!(drain <= res.battery_capacity_mah)) {
      report.record({ConstraintId::kEnergy, "", 0, r,
                     fmt::format("drain {:.6g} mAh exceeds capacity {:.6g} mAh", drain,
                                 res.battery_capacity_mah)});
    }
  }
  return report;
}

ConstraintReport validate_state(const PlacementState& state, const ResourcePool& pool) {
  ConstraintReport report = check_constraint1(state, pool);
  report.merge(check_constraint2(state, pool));
  report.merge(check_constraint3(state, pool));
  return report;
}

double makespan(const RatedDataflow& dag, const Mapping& mapping, const ResourcePool& pool) {
  return enumerate_critical_path(dag, mapping, pool).latency_sec;
}

double objective(const PlacementState& state, const ResourcePool& pool) {
  double total = 0.0;
  for (const auto& [id, active] : state.dataflows()) {
    total += makespan(*active.dag, active.mapping, pool);
  }
  return total;
}

std::size_t count_migrations(const PlacementState& before, const PlacementState& after) {
  std::size_t moved = 0;
  for (const auto& [id, active] : after.dataflows()) {
    auto it = before.dataflows().find(id);
    if (it == before.dataflows().end()) continue;
    const Mapping& prev = it->second.mapping;
    for (VertexId v = 0; v < active.mapping.size() && v < prev.size(); ++v) {
      if (prev[v] != active.mapping[v]) ++moved;
    }
  }
  return moved;
}

StabilizationResult stabilization_time(const PlacementState& before, const PlacementState& after,
                                       const ResourcePool& pool, double migration_cost_sec,
                                       double psi_max_sec) {
  StabilizationResult result;
  for (const auto& [id, active] : after.dataflows()) {
    auto it = before.dataflows().find(id);
    if (it == before.dataflows().end()) continue;
    const Mapping& prev = it->second.mapping;
    const RatedDataflow& dag = *active.dag;
    for (VertexId v = 0; v < active.mapping.size(); ++v) {
      if (prev[v] == active.mapping[v]) continue;
      ++result.migrated;
      const double rate = dag.in_rate(v);
      const double latency = dag.latency(v, pool.resource(active.mapping[v]).cls);
      if (latency == 0.0) continue;  // dummy sources have no service time
      const double queued = rate * migration_cost_sec;
      const double headroom = 1.0 / latency - rate;
      double psi = 0.0;
      if (headroom <= 0.0) {
        result.unstable = true;
        result.warnings.push_back(fmt::format(
            "{}: vertex {} cannot drain its backlog on resource {}; capped at {} s", id, v,
            active.mapping[v], psi_max_sec));
        psi = psi_max_sec;
      } else {
        psi = queued / headroom;
      }
      result.max_sec = std::max(result.max_sec, psi);
    }
  }
  return result;
}

}  // namespace edgesched
