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

#include "edgesched/rebalance.hpp"

#include <algorithm>
#include <cmath>

#include "edgesched/load_index.hpp"

namespace edgesched {

std::string_view to_string(RebalanceMode mode) {
  switch (mode) {
    case RebalanceMode::kNone: return "none";
    case RebalanceMode::kVertex: return "vertex";
    case RebalanceMode::kEdge: return "edge";
    case RebalanceMode::kVertexEdge: return "vertex+edge";
  }
  return "unknown";
}

std::optional<RebalanceMode> parse_rebalance_mode(std::string_view name) {
  for (RebalanceMode m : {RebalanceMode::kNone, RebalanceMode::kVertex, RebalanceMode::kEdge,
                          RebalanceMode::kVertexEdge}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

// Improvements below this relative size are treated as float noise.
bool strictly_better(double candidate, double current) {
  return candidate < current - 1e-12 * std::max(1.0, std::abs(current));
}

// Dataflow ids ordered by decreasing makespan, ties by id.
std::vector<std::string> slowest_first(const PlacementState& state, const ResourcePool& pool) {
  std::vector<std::pair<double, std::string>> spans;
  for (const auto& [id, active] : state.dataflows()) {
    spans.emplace_back(makespan(*active.dag, active.mapping, pool), id);
  }
  std::stable_sort(spans.begin(), spans.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> ids;
  for (auto& [span, id] : spans) ids.push_back(std::move(id));
  return ids;
}

struct Candidate {
  VertexId vertex = 0;
  ResourceId to = 0;
  double makespan = 0.0;
  bool found = false;
};

// Makespan of the dataflow with one vertex moved, or nullopt if the move
// breaks a constraint.
std::optional<double> try_move(const ActiveDataflow& active, const LoadIndex& loads,
                               const ResourcePool& pool, VertexId v, ResourceId to) {
  const ResourceId from = active.mapping[v];
  if (from == to) return std::nullopt;
  if (!loads.admits_move(*active.dag, v, from, to)) return std::nullopt;
  Mapping moved = active.mapping;
  moved.assignments[v] = to;
  return makespan(*active.dag, moved, pool);
}

void apply(PlacementState& state, LoadIndex& loads, RebalancePlan& plan, const std::string& id,
           VertexId v, ResourceId to) {
  const ActiveDataflow& active = state.at(id);
  const ResourceId from = active.mapping[v];
  loads.remove(*active.dag, v, from);
  loads.add(*active.dag, v, to);
  state.reassign(id, v, to);
  plan.moves.push_back(Move{id, v, from, to});
}

}  // namespace

RebalanceOutcome vertex_rebalance(const PlacementState& state, const ResourcePool& pool) {
  RebalanceOutcome out{state, {}};
  LoadIndex loads = LoadIndex::from_state(out.state, pool);
  out.plan.objective_before = objective(out.state, pool);

  for (const std::string& id : slowest_first(out.state, pool)) {
    const ActiveDataflow& active = out.state.at(id);
    const RatedDataflow& dag = *active.dag;
    const CriticalPath cp = enumerate_critical_path(dag, active.mapping, pool);

    // Costliest query on the critical path, by latency on its current resource.
    VertexId target = cp.path.front();
    double highest = -1.0;
    for (VertexId v : cp.path) {
      const double lambda = dag.latency(v, pool.resource(active.mapping[v]).cls);
      if (lambda > highest || (lambda == highest && v < target)) {
        highest = lambda;
        target = v;
      }
    }

    Candidate best;
    best.makespan = cp.latency_sec;
    for (ResourceId r = 0; r < pool.size(); ++r) {
      const auto span = try_move(active, loads, pool, target, r);
      if (span && strictly_better(*span, best.makespan)) {
        best = Candidate{target, r, *span, true};
      }
    }
    if (best.found) apply(out.state, loads, out.plan, id, best.vertex, best.to);
  }

  out.plan.objective_after = objective(out.state, pool);
  return out;
}

RebalanceOutcome edge_rebalance(const PlacementState& state, const ResourcePool& pool) {
  RebalanceOutcome out{state, {}};
  LoadIndex loads = LoadIndex::from_state(out.state, pool);
  out.plan.objective_before = objective(out.state, pool);

  for (const std::string& id : slowest_first(out.state, pool)) {
    const ActiveDataflow& active = out.state.at(id);
    const RatedDataflow& dag = *active.dag;
    const CriticalPath cp = enumerate_critical_path(dag, active.mapping, pool);

    // Costliest network hop along the critical path.
    double worst = 0.0;
    std::size_t hop = cp.path.size();
    for (std::size_t i = 0; i + 1 < cp.path.size(); ++i) {
      const VertexId u = cp.path[i];
      const double cost =
          pool.link_cost(active.mapping[u], active.mapping[cp.path[i + 1]], dag.event_size(u));
      if (cost > worst) {
        worst = cost;
        hop = i;
      }
    }
    if (hop == cp.path.size()) continue;

    const VertexId up = cp.path[hop];
    const VertexId down = cp.path[hop + 1];
    Candidate best;
    best.makespan = cp.latency_sec;
    // Upstream joins downstream's resource, or the reverse; keep the better.
    for (const auto& [v, to] : {std::pair{up, active.mapping[down]},
                                std::pair{down, active.mapping[up]}}) {
      const auto span = try_move(active, loads, pool, v, to);
      if (span && strictly_better(*span, best.makespan)) {
        best = Candidate{v, to, *span, true};
      }
    }
    if (best.found) apply(out.state, loads, out.plan, id, best.vertex, best.to);
  }

  out.plan.objective_after = objective(out.state, pool);
  return out;
}

RebalanceOutcome combined_rebalance(const PlacementState& state, const ResourcePool& pool) {
  RebalanceOutcome first = vertex_rebalance(state, pool);
  RebalanceOutcome second = edge_rebalance(first.state, pool);
  RebalanceOutcome out{std::move(second.state), {}};
  out.plan.objective_before = first.plan.objective_before;
  out.plan.objective_after = second.plan.objective_after;
  out.plan.moves = std::move(first.plan.moves);
  out.plan.moves.insert(out.plan.moves.end(), second.plan.moves.begin(), second.plan.moves.end());
  return out;
}

RebalanceOutcome rebalance(const PlacementState& state, const ResourcePool& pool,
                           RebalanceMode mode) {
  switch (mode) {
    case RebalanceMode::kVertex: return vertex_rebalance(state, pool);
    case RebalanceMode::kEdge: return edge_rebalance(state, pool);
    case RebalanceMode::kVertexEdge: return combined_rebalance(state, pool);
    case RebalanceMode::kNone: break;
  }
  RebalanceOutcome out{state, {}};
  out.plan.objective_before = out.plan.objective_after = objective(state, pool);
  return out;
}

}  // namespace edgesched
