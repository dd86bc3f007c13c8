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

#include "edgesched/load_index.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "edgesched/error.hpp"

namespace edgesched {

bool class_allowed(QueryKind kind, ResourceClass cls) {
  if (kind == QueryKind::kSource) return cls == ResourceClass::kEdge;
  if (kind == QueryKind::kSink) return cls == ResourceClass::kCloud;
  return true;
}

void ResourceLoad::recompute() {
  latency_sum = 0.0;
  max_in_rate = 0.0;
  energy_rate = 0.0;
  for (const Entry& e : entries) {
    latency_sum += e.latency;
    max_in_rate = std::max(max_in_rate, e.in_rate);
    energy_rate += e.in_rate * e.energy;
  }
}

LoadIndex::LoadIndex(const ResourcePool& pool) : pool_(&pool), loads_(pool.size()) {}

LoadIndex LoadIndex::from_state(const PlacementState& state, const ResourcePool& pool) {
  LoadIndex index(pool);
  for (const auto& [id, active] : state.dataflows()) {
    for (VertexId v = 0; v < active.mapping.size(); ++v) {
      index.add(*active.dag, v, active.mapping[v]);
    }
  }
  return index;
}

void LoadIndex::add(const RatedDataflow& dag, VertexId v, ResourceId r) {
  ResourceLoad& load = loads_.at(r);
  if (dag.is_source(v)) {
    ++load.sources;
    return;
  }
  const ResourceClass cls = pool_->resource(r).cls;
  ResourceLoad::Entry e{&dag, v, dag.in_rate(v), dag.latency(v, cls),
                        cls == ResourceClass::kEdge ? dag.energy(v, cls) : 0.0};
  load.entries.push_back(e);
  load.latency_sum += e.latency;
  load.max_in_rate = std::max(load.max_in_rate, e.in_rate);
  load.energy_rate += e.in_rate * e.energy;
}

void LoadIndex::remove(const RatedDataflow& dag, VertexId v, ResourceId r) {
  ResourceLoad& load = loads_.at(r);
  if (dag.is_source(v)) {
    if (load.sources > 0) --load.sources;
    return;
  }
  auto it = std::find_if(load.entries.begin(), load.entries.end(), [&](const auto& e) {
    return e.dag == &dag && e.vertex == v;
  });
  if (it == load.entries.end()) {
    throw Error(ErrorCode::kNotFound,
                fmt::format("{}: vertex {} is not loaded on resource {}", dag.id(), v, r));
  }
  load.entries.erase(it);
  load.recompute();
}

bool LoadIndex::within_limits(ResourceId r, std::size_t count, double latency_sum,
                              double max_in_rate, double energy_rate) const {
  const Resource& res = pool_->resource(r);
  if (count > 0 && latency_sum > 0.0) {
    const double bound = pool_->catalog().parallelism().capacity_factor(count) / latency_sum;
    if (!(max_in_rate < bound * (1.0 - kAdmissionSlack))) return false;
  }
  if (res.is_edge()) {
    const double drain = res.recharge_interval_sec * (res.base_load_ma / 3600.0 + energy_rate);
    if (!(drain <= res.battery_capacity_mah * (1.0 - kAdmissionSlack))) return false;
  }
  return true;
}

bool LoadIndex::resource_ok(ResourceId r) const {
  const ResourceLoad& l = loads_.at(r);
  return within_limits(r, l.count(), l.latency_sum, l.max_in_rate, l.energy_rate);
}

bool LoadIndex::admits(const RatedDataflow& dag, VertexId v, ResourceId r) const {
  const ResourceClass cls = pool_->resource(r).cls;
  if (!class_allowed(dag.kind(v), cls)) return false;
  if (dag.is_source(v)) return resource_ok(r);
  const ResourceLoad& l = loads_[r];
  const double rate = dag.in_rate(v);
  const double energy = cls == ResourceClass::kEdge ? rate * dag.energy(v, cls) : 0.0;
  return within_limits(r, l.count() + 1, l.latency_sum + dag.latency(v, cls),
                       std::max(l.max_in_rate, rate), l.energy_rate + energy);
}

bool LoadIndex::admits_move(const RatedDataflow& dag, VertexId v, ResourceId from,
                            ResourceId to) const {
  if (from == to) return resource_ok(from);
  if (!class_allowed(dag.kind(v), pool_->resource(to).cls)) return false;
  if (dag.is_source(v)) return resource_ok(to);

  // The origin without this query.
  const ResourceLoad& origin = loads_.at(from);
  std::size_t count = 0;
  double latency_sum = 0.0;
  double max_rate = 0.0;
  double energy_rate = 0.0;
  bool found = false;
  for (const auto& e : origin.entries) {
    if (!found && e.dag == &dag && e.vertex == v) {
      found = true;
      continue;
    }
    ++count;
    latency_sum += e.latency;
    max_rate = std::max(max_rate, e.in_rate);
    energy_rate += e.in_rate * e.energy;
  }
  if (!found) {
    throw Error(ErrorCode::kNotFound,
                fmt::format("{}: vertex {} is not loaded on resource {}", dag.id(), v, from));
  }
  if (!within_limits(from, count, latency_sum, max_rate, energy_rate)) return false;
  return admits(dag, v, to);
}

}  // namespace edgesched
