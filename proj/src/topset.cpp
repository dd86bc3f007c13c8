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

#include <algorithm>
#include <chrono>
#include <limits>

#include <fmt/format.h>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"

namespace edgesched {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kTopSet: return "topset";
    case Strategy::kTopSetP: return "topset-p";
    case Strategy::kGai: return "gai";
    case Strategy::kGag: return "gag";
    case Strategy::kBrute: return "brute";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kTopSet, Strategy::kTopSetP, Strategy::kGai, Strategy::kGag,
                     Strategy::kBrute}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

double estimate_penalty(const LoadIndex& loads, ResourceId r, const RatedDataflow& dag,
                        VertexId v) {
  if (dag.is_source(v)) return 0.0;
  const ResourceLoad& load = loads.at(r);
  const std::size_t m = load.count();
  if (m == 0) return 0.0;
  const ParallelismTable& pi = loads.pool().catalog().parallelism();
  // Effective latency under interference: lambda * m / (1 + pi(m)).
  const double before = static_cast<double>(m) / pi.capacity_factor(m);
  const double after = static_cast<double>(m + 1) / pi.capacity_factor(m + 1);
  double increase = 0.0;
  for (const auto& e : load.entries) {
    // Only the query's own latency term of its to-here length changes.
    increase += e.latency * after - e.latency * before;
  }
  return std::max(0.0, increase);
}

ScheduleResult topset_place(const PlacementState& state, const ResourcePool& pool,
                            const RatedDataflow& dag, bool penalty_mode) {
  const auto started = std::chrono::steady_clock::now();
  ScheduleResult result;
  if (state.contains(dag.id())) {
    throw Error(ErrorCode::kConfig, fmt::format("dataflow '{}' is already placed", dag.id()));
  }

  LoadIndex loads = LoadIndex::from_state(state, pool);
  Mapping mapping(dag.id(), dag.vertex_count());
  std::vector<double> to_here(dag.vertex_count(), 0.0);

  std::vector<ResourceId> candidates = pool.edge_ids();
  candidates.insert(candidates.end(), pool.cloud_ids().begin(), pool.cloud_ids().end());

  auto finish = [&] {
    result.planning_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  };

  for (std::vector<VertexId> set : dag.level_sets().sets) {
    std::stable_sort(set.begin(), set.end(), [&](VertexId a, VertexId b) {
      return dag.latency(a, ResourceClass::kEdge) > dag.latency(b, ResourceClass::kEdge);
    });
    for (VertexId v : set) {
      double best_cost = std::numeric_limits<double>::infinity();
      double best_to_here = 0.0;
      ResourceId best = kUnassigned;
      for (ResourceId r : candidates) {
        ++result.diagnostics.evaluations;
        if (!loads.admits(dag, v, r)) continue;
        const ResourceClass cls = pool.resource(r).cls;
        double arrival = 0.0;
        for (VertexId u : dag.predecessors(v)) {
          arrival = std::max(arrival, to_here[u] + pool.link_cost(mapping[u], r, dag.event_size(u)));
        }
        const double here = arrival + dag.latency(v, cls);
        const double cost = penalty_mode ? here + estimate_penalty(loads, r, dag, v) : here;
        if (cost < best_cost) {
          best_cost = cost;
          best_to_here = here;
          best = r;
        }
      }
      if (best == kUnassigned) {
        result.diagnostics.reason =
            fmt::format("{}: no valid resource for vertex {} ({})", dag.id(), v,
                        dag.spec().vertex_types[v]);
        return finish();
      }
      mapping.assignments[v] = best;
      to_here[v] = best_to_here;
      loads.add(dag, v, best);
    }
  }

  result.accepted = true;
  result.mappings.push_back(std::move(mapping));
  return finish();
}

}  // namespace edgesched
