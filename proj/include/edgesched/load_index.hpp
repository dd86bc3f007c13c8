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
#include <vector>

#include "edgesched/model.hpp"
#include "edgesched/placement.hpp"
#include "edgesched/resources.hpp"

namespace edgesched {

/// Running per-resource totals used by the schedulers to test whether one
/// more query (or one move) keeps every constraint satisfied.
// Running sums drift from a fresh summation by a few ulps. Admitting only with
// this much relative slack keeps admitted states valid under validate_state.
inline constexpr double kAdmissionSlack = 1e-9;

struct ResourceLoad {
  struct Entry {
    const RatedDataflow* dag = nullptr;
    VertexId vertex = 0;
    double in_rate = 0.0;
    double latency = 0.0;
    double energy = 0.0;
  };

  std::vector<Entry> entries;  // non-source queries only
  std::size_t sources = 0;
  double latency_sum = 0.0;
  double max_in_rate = 0.0;
  double energy_rate = 0.0;  // mAh per second

  std::size_t count() const { return entries.size(); }
  void recompute();
};

class LoadIndex {
 public:
  explicit LoadIndex(const ResourcePool& pool);
  static LoadIndex from_state(const PlacementState& state, const ResourcePool& pool);

  void add(const RatedDataflow& dag, VertexId v, ResourceId r);
  void remove(const RatedDataflow& dag, VertexId v, ResourceId r);

  /// True when placing (dag, v) on r satisfies the class rule and keeps the
  /// capacity and energy constraints of r satisfied for every query on it.
  bool admits(const RatedDataflow& dag, VertexId v, ResourceId r) const;

  /// True when moving (dag, v) from its resource to another keeps both
  /// resources within their constraints.
  bool admits_move(const RatedDataflow& dag, VertexId v, ResourceId from, ResourceId to) const;

  /// Whether the resource as currently loaded satisfies capacity and energy.
  bool resource_ok(ResourceId r) const;

  const ResourceLoad& at(ResourceId r) const { return loads_[r]; }
  const ResourcePool& pool() const { return *pool_; }

 private:
  bool within_limits(ResourceId r, std::size_t count, double latency_sum, double max_in_rate,
                     double energy_rate) const;

  const ResourcePool* pool_;
  std::vector<ResourceLoad> loads_;
};

/// Whether a query of this kind may sit on a resource of this class.
bool class_allowed(QueryKind kind, ResourceClass cls);

}  // namespace edgesched
