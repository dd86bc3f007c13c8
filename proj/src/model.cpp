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

#include "edgesched/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "edgesched/error.hpp"

namespace edgesched {

namespace {

struct Adjacency {
  std::vector<std::vector<VertexId>> preds;
  std::vector<std::vector<VertexId>> succs;
};

Adjacency build_adjacency(const DataflowSpec& spec) {
  const std::size_t n = spec.vertex_count();
  Adjacency adj{std::vector<std::vector<VertexId>>(n), std::vector<std::vector<VertexId>>(n)};
  std::set<Edge> seen;
  for (const auto& [from, to] : spec.edges) {
    if (from >= n || to >= n) {
      throw Error(ErrorCode::kInvalidDag,
                  fmt::format("{}: edge ({}, {}) references a missing vertex", spec.id, from, to));
    }
    if (from == to) {
      throw Error(ErrorCode::kInvalidDag, fmt::format("{}: self-loop on {}", spec.id, from));
    }
    if (!seen.insert({from, to}).second) {
      throw Error(ErrorCode::kInvalidDag,
                  fmt::format("{}: duplicate edge ({}, {})", spec.id, from, to));
    }
    adj.succs[from].push_back(to);
    adj.preds[to].push_back(from);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj.preds[v].begin(), adj.preds[v].end());
    std::sort(adj.succs[v].begin(), adj.succs[v].end());
  }
  return adj;
}

TopoSetOrder level_sets(const DataflowSpec& spec, const Adjacency& adj) {
  const std::size_t n = spec.vertex_count();
  std::vector<std::size_t> pending(n);
  std::vector<VertexId> frontier;
  for (VertexId v = 0; v < n; ++v) {
    pending[v] = adj.preds[v].size();
    if (pending[v] == 0) frontier.push_back(v);
  }
  TopoSetOrder order;
  std::size_t visited = 0;
  while (!frontier.empty()) {
    visited += frontier.size();
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      for (VertexId w : adj.succs[v]) {
        if (--pending[w] == 0) next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    order.sets.push_back(std::move(frontier));
    frontier = std::move(next);
  }
  if (visited != n) {
    throw Error(ErrorCode::kInvalidDag, fmt::format("{}: graph has a cycle", spec.id));
  }
  return order;
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<VertexId> TopoSetOrder::flatten() const {
  std::vector<VertexId> flat;
  for (const auto& s : sets) flat.insert(flat.end(), s.begin(), s.end());
  return flat;
}

void validate_dataflow(const DataflowSpec& spec, const ProfileCatalog& catalog) {
  const std::size_t n = spec.vertex_count();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidDag, fmt::format("{}: needs a source and a sink", spec.id));
  }
  if (!(spec.input_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidDag, fmt::format("{}: input rate must be positive", spec.id));
  }
  const Adjacency adj = build_adjacency(spec);
  level_sets(spec, adj);
  for (VertexId v = 0; v < n; ++v) {
    const QueryKind kind = catalog.at(spec.vertex_types[v]).type.kind;
    const bool no_preds = adj.preds[v].empty();
    const bool no_succs = adj.succs[v].empty();
    if (no_preds != (kind == QueryKind::kSource)) {
      throw Error(ErrorCode::kInvalidDag,
                  fmt::format("{}: vertex {} ({}) {}", spec.id, v, spec.vertex_types[v],
                              no_preds ? "has no predecessors but is not a source"
                                       : "is a source with predecessors"));
    }
    if (no_succs != (kind == QueryKind::kSink)) {
      throw Error(ErrorCode::kInvalidDag,
                  fmt::format("{}: vertex {} ({}) {}", spec.id, v, spec.vertex_types[v],
                              no_succs ? "has no successors but is not a sink"
                                       : "is a sink with successors"));
    }
  }
}

TopoSetOrder topo_set_order(const DataflowSpec& spec) {
  return level_sets(spec, build_adjacency(spec));
}

RatedDataflow RatedDataflow::renamed(std::string id) const {
  RatedDataflow copy = *this;
  copy.spec_.id = std::move(id);
  return copy;
}

RatedDataflow propagate_rates(const DataflowSpec& spec, const ProfileCatalog& catalog) {
  validate_dataflow(spec, catalog);
  const std::size_t n = spec.vertex_count();
  Adjacency adj = build_adjacency(spec);

  RatedDataflow dag;
  dag.spec_ = spec;
  dag.level_sets_ = level_sets(spec, adj);
  dag.topo_order_ = dag.level_sets_.flatten();
  dag.kinds_.resize(n);
  dag.selectivity_.resize(n);
  dag.event_size_.resize(n);
  for (auto& v : dag.latency_) v.resize(n);
  for (auto& v : dag.energy_) v.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    const CatalogEntry& e = catalog.at(spec.vertex_types[v]);
    dag.kinds_[v] = e.type.kind;
    dag.selectivity_[v] = e.type.selectivity;
    dag.event_size_[v] = e.type.event_size_bytes;
    for (ResourceClass cls : {ResourceClass::kEdge, ResourceClass::kCloud}) {
      const auto c = static_cast<std::size_t>(cls);
      dag.latency_[c][v] = e.profile(cls).latency_sec;
      dag.energy_[c][v] = e.profile(cls).energy_mah;
    }
    if (e.type.kind == QueryKind::kSource) dag.sources_.push_back(v);
    if (e.type.kind == QueryKind::kSink) dag.sinks_.push_back(v);
  }

  dag.in_rate_.assign(n, 0.0);
  dag.out_rate_.assign(n, 0.0);
  const double per_source = spec.input_rate / static_cast<double>(dag.sources_.size());
  for (VertexId v : dag.topo_order_) {
    if (dag.kinds_[v] == QueryKind::kSource) {
      dag.in_rate_[v] = per_source;
      dag.out_rate_[v] = per_source;
      continue;
    }
    // Inputs interleave: the in-rate is the sum over incoming streams, each
    // carrying the full output of its upstream query.
    double in = 0.0;
    for (VertexId u : adj.preds[v]) in += dag.out_rate_[u];
    dag.in_rate_[v] = in;
    dag.out_rate_[v] = in * dag.selectivity_[v];
  }
  for (VertexId v : dag.sinks_) dag.output_rate_ += dag.out_rate_[v];

  dag.preds_ = std::move(adj.preds);
  dag.succs_ = std::move(adj.succs);
  return dag;
}

double edge_cost(const RatedDataflow& dag, const Mapping& mapping, const ResourcePool& pool,
                 VertexId from, VertexId to) {
  const ResourceId rf = mapping[from];
  const ResourceId rt = mapping[to];
  return dag.latency(from, pool.resource(rf).cls) + pool.link_cost(rf, rt, dag.event_size(from));
}

CriticalPath enumerate_critical_path(const RatedDataflow& dag, const Mapping& mapping,
                                     const ResourcePool& pool) {
  const std::size_t n = dag.vertex_count();
  if (mapping.size() != n) {
    throw Error(ErrorCode::kIncompleteMapping,
                fmt::format("{}: mapping covers {} of {} vertices", dag.id(), mapping.size(), n));
  }
  for (VertexId v = 0; v < n; ++v) {
    if (mapping[v] == kUnassigned || !pool.contains(mapping[v])) {
      throw Error(ErrorCode::kIncompleteMapping,
                  fmt::format("{}: vertex {} is not mapped to a pool resource", dag.id(), v));
    }
  }

  // tail[v]: longest path from v to any sink.
  std::vector<double> tail(n, 0.0);
  const auto& order = dag.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    double best = 0.0;
    for (VertexId w : dag.successors(v)) {
      best = std::max(best, edge_cost(dag, mapping, pool, v, w) + tail[w]);
    }
    tail[v] = best;
  }

  auto pick = [&](const std::vector<VertexId>& candidates, auto&& value) {
    double best = -1.0;
    for (VertexId c : candidates) best = std::max(best, value(c));
    for (VertexId c : candidates) {  // candidates are sorted ascending
      if (nearly_equal(value(c), best)) return c;
    }
    return candidates.front();
  };

  CriticalPath cp;
  VertexId v = pick(dag.sources(), [&](VertexId s) { return tail[s]; });
  cp.latency_sec = tail[v];
  cp.path.push_back(v);
  while (!dag.successors(v).empty()) {
    const VertexId from = v;
    v = pick(dag.successors(from),
             [&](VertexId w) { return edge_cost(dag, mapping, pool, from, w) + tail[w]; });
    cp.path.push_back(v);
  }
  return cp;
}

}  // namespace edgesched
