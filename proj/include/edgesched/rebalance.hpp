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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesched/placement.hpp"

namespace edgesched {

enum class RebalanceMode { kNone, kVertex, kEdge, kVertexEdge };

std::string_view to_string(RebalanceMode mode);
std::optional<RebalanceMode> parse_rebalance_mode(std::string_view name);

struct Move {
  std::string dataflow_id;
  VertexId vertex = 0;
  ResourceId from = 0;
  ResourceId to = 0;
};

struct RebalancePlan {
  std::vector<Move> moves;
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct RebalanceOutcome {
  PlacementState state;
  RebalancePlan plan;
};

/// Per dataflow (slowest first) moves the highest-latency query of its
/// critical path to the valid resource giving the largest objective drop.
RebalanceOutcome vertex_rebalance(const PlacementState& state, const ResourcePool& pool);

/// Per dataflow (slowest first) collapses the costliest network hop of its
/// critical path by moving one endpoint onto the other's resource.
RebalanceOutcome edge_rebalance(const PlacementState& state, const ResourcePool& pool);

/// Vertex pass followed by an edge pass on the intermediate state.
RebalanceOutcome combined_rebalance(const PlacementState& state, const ResourcePool& pool);

RebalanceOutcome rebalance(const PlacementState& state, const ResourcePool& pool,
                           RebalanceMode mode);

}  // namespace edgesched
