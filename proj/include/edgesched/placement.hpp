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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "edgesched/mapping.hpp"
#include "edgesched/model.hpp"
#include "edgesched/resources.hpp"

namespace edgesched {

using DataflowPtr = std::shared_ptr<const RatedDataflow>;

struct ActiveDataflow {
  DataflowPtr dag;
  Mapping mapping;
};

struct QueryRef {
  std::string dataflow_id;
  VertexId vertex = 0;

  friend auto operator<=>(const QueryRef&, const QueryRef&) = default;
};

/// Active dataflows and their mappings at one control interval. Keyed by
/// dataflow id, so iteration order is deterministic.
class PlacementState {
 public:
  /// Throws kIncompleteMapping for partial mappings, kConfig for duplicates.
  void add(DataflowPtr dag, Mapping mapping);
  void remove(const std::string& dataflow_id);
  void reassign(const std::string& dataflow_id, VertexId v, ResourceId to);
  void replace_mapping(Mapping mapping);

  bool contains(const std::string& dataflow_id) const { return dataflows_.count(dataflow_id) > 0; }
  const ActiveDataflow& at(const std::string& dataflow_id) const;
  const std::map<std::string, ActiveDataflow>& dataflows() const { return dataflows_; }
  std::size_t size() const { return dataflows_.size(); }
  bool empty() const { return dataflows_.empty(); }
  std::size_t vertex_count() const;

  /// Queries mapped to each resource, rebuilt from the mappings.
  std::map<ResourceId, std::vector<QueryRef>> per_resource_load() const;

 private:
  std::map<std::string, ActiveDataflow> dataflows_;
};

enum class ConstraintId { kPlacementClass = 1, kComputeCapacity = 2, kEnergy = 3 };

struct Violation {
  ConstraintId constraint;
  std::string dataflow_id;  // empty for resource-level findings
  VertexId vertex = 0;
  ResourceId resource = 0;
  std::string detail;
};

struct ConstraintReport {
  bool c1_ok = true;
  bool c2_ok = true;
  bool c3_ok = true;
  std::vector<Violation> violations;

  bool ok() const { return c1_ok && c2_ok && c3_ok; }
  void merge(const ConstraintReport& other);
  void record(Violation v);
};

/// Sources on edges, sinks on cloud VMs.
ConstraintReport check_constraint1(const PlacementState& state, const ResourcePool& pool);

/// Every non-source query on a resource hosting m non-source queries with
/// latency sum S must have in-rate below (1 + pi(m)) / S.
ConstraintReport check_constraint2(const PlacementState& state, const ResourcePool& pool);

/// Battery drain over the recharge interval stays within capacity:
///   tau * (kappa / 3600 + sum(omega_in * epsilon)) <= C
/// kappa is a current in mA; dividing by 3600 turns it into mAh per second so
/// every term is a charge.
ConstraintReport check_constraint3(const PlacementState& state, const ResourcePool& pool);

ConstraintReport validate_state(const PlacementState& state, const ResourcePool& pool);

double makespan(const RatedDataflow& dag, const Mapping& mapping, const ResourcePool& pool);

/// Sum of makespans over all active dataflows.
double objective(const PlacementState& state, const ResourcePool& pool);

/// Number of vertices present in both states whose resource differs.
std::size_t count_migrations(const PlacementState& before, const PlacementState& after);

struct StabilizationResult {
  double max_sec = 0.0;
  std::size_t migrated = 0;
  std::vector<std::string> warnings;
  bool unstable = false;
};

/// psi = q / (1/lambda_new - omega_in) with q = omega_in * eta for each
/// migrated vertex; returns the maximum. Denominators that are not positive
/// are reported as unstable and clamped to psi_max_sec.
StabilizationResult stabilization_time(const PlacementState& before, const PlacementState& after,
                                       const ResourcePool& pool, double migration_cost_sec,
                                       double psi_max_sec = 60.0);

}  // namespace edgesched
