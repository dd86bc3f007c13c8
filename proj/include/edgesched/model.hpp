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

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "edgesched/catalog.hpp"
#include "edgesched/mapping.hpp"
#include "edgesched/resources.hpp"

namespace edgesched {

using Edge = std::pair<VertexId, VertexId>;

/// An analytic dataflow: a DAG of typed CEP queries. Vertex ids are indices
/// into vertex_types. The input rate is split uniformly across sources.
struct DataflowSpec {
  std::string id;
  std::vector<std::string> vertex_types;
  std::vector<Edge> edges;
  double input_rate = 100.0;

  std::size_t vertex_count() const { return vertex_types.size(); }
};

/// Checks structure and catalog coverage; throws kInvalidDag or
/// kProfileNotFound.
void validate_dataflow(const DataflowSpec& spec, const ProfileCatalog& catalog);

/// Level sets S_0..S_k: S_0 holds every predecessor-free vertex, and each
/// later set holds the vertices whose predecessors all sit in earlier sets.
struct TopoSetOrder {
  std::vector<std::vector<VertexId>> sets;

  std::vector<VertexId> flatten() const;
};

TopoSetOrder topo_set_order(const DataflowSpec& spec);

/// A dataflow with propagated stream rates and per-class costs resolved from
/// the catalog. Immutable once built.
class RatedDataflow {
 public:
  const DataflowSpec& spec() const { return spec_; }
  const std::string& id() const { return spec_.id; }
  std::size_t vertex_count() const { return kinds_.size(); }

  QueryKind kind(VertexId v) const { return kinds_[v]; }
  bool is_source(VertexId v) const { return kinds_[v] == QueryKind::kSource; }
  bool is_sink(VertexId v) const { return kinds_[v] == QueryKind::kSink; }

  double in_rate(VertexId v) const { return in_rate_[v]; }
  double out_rate(VertexId v) const { return out_rate_[v]; }
  double selectivity(VertexId v) const { return selectivity_[v]; }
  double event_size(VertexId v) const { return event_size_[v]; }
  double latency(VertexId v, ResourceClass cls) const {
    return latency_[static_cast<std::size_t>(cls)][v];
  }
  double energy(VertexId v, ResourceClass cls) const {
    return energy_[static_cast<std::size_t>(cls)][v];
  }

  double output_rate() const { return output_rate_; }
  double dag_selectivity() const { return output_rate_ / spec_.input_rate; }

  const std::vector<VertexId>& predecessors(VertexId v) const { return preds_[v]; }
  const std::vector<VertexId>& successors(VertexId v) const { return succs_[v]; }
  const std::vector<VertexId>& sources() const { return sources_; }
  const std::vector<VertexId>& sinks() const { return sinks_; }
  /// Vertices in a fixed topological order (level sets concatenated).
  const std::vector<VertexId>& topo_order() const { return topo_order_; }
  const TopoSetOrder& level_sets() const { return level_sets_; }

  /// A copy under a different id (each active instance needs its own key).
  RatedDataflow renamed(std::string id) const;

 private:
  friend RatedDataflow propagate_rates(const DataflowSpec&, const ProfileCatalog&);

  DataflowSpec spec_;
  std::vector<QueryKind> kinds_;
  std::vector<double> in_rate_;
  std::vector<double> out_rate_;
  std::vector<double> selectivity_;
  std::vector<double> event_size_;
  std::array<std::vector<double>, 2> latency_;
  std::array<std::vector<double>, 2> energy_;
  std::vector<std::vector<VertexId>> preds_;
  std::vector<std::vector<VertexId>> succs_;
  std::vector<VertexId> sources_;
  std::vector<VertexId> sinks_;
  std::vector<VertexId> topo_order_;
  TopoSetOrder level_sets_;
  double output_rate_ = 0.0;
};

RatedDataflow propagate_rates(const DataflowSpec& spec, const ProfileCatalog& catalog);

struct CriticalPath {
  std::vector<VertexId> path;
  double latency_sec = 0.0;
};

/// Cost of the stream edge (from, to) under a mapping: the upstream query's
/// latency on its resource plus the network cost of one upstream event.
double edge_cost(const RatedDataflow& dag, const Mapping& mapping, const ResourcePool& pool,
                 VertexId from, VertexId to);

/// Longest source-to-sink path by dynamic programming over the topological
/// order. Equal-length paths resolve to the lexicographically smallest vertex
/// sequence. Throws kIncompleteMapping when a vertex is unassigned.
CriticalPath enumerate_critical_path(const RatedDataflow& dag, const Mapping& mapping,
                                     const ResourcePool& pool);

}  // namespace edgesched
