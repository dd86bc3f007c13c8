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

#include "edgesched/catalog.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "edgesched/error.hpp"

namespace edgesched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kProfileNotFound: return "profile-not-found";
    case ErrorCode::kInvalidDag: return "invalid-dag";
    case ErrorCode::kIncompleteMapping: return "incomplete-mapping";
    case ErrorCode::kConfig: return "config-error";
    case ErrorCode::kDomain: return "domain-error";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kGuard: return "guard-error";
    case ErrorCode::kGeneration: return "generation-error";
    case ErrorCode::kProvenanceMismatch: return "provenance-mismatch";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kInvariant: return "invariant-breach";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::pair<QueryKind, std::string_view>, 7> kKindNames{{
    {QueryKind::kFilter, "filter"},
    {QueryKind::kSequence, "sequence"},
    {QueryKind::kPattern, "pattern"},
    {QueryKind::kSlidingAggregate, "sliding-aggregate"},
    {QueryKind::kBatchAggregate, "batch-aggregate"},
    {QueryKind::kSource, "source"},
    {QueryKind::kSink, "sink"},
}};

}  // namespace

std::string_view to_string(QueryKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<QueryKind> parse_query_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ResourceClass cls) {
  return cls == ResourceClass::kEdge ? "edge" : "cloud";
}

std::optional<ResourceClass> parse_resource_class(std::string_view name) {
  if (name == "edge") return ResourceClass::kEdge;
  if (name == "cloud") return ResourceClass::kCloud;
  return std::nullopt;
}

ParallelismTable::ParallelismTable(std::vector<double> overhead, double sign)
    : overhead_(std::move(overhead)), sign_(sign) {
  if (overhead_.empty()) {
    throw Error(ErrorCode::kConfig, "parallelism table must cover m = 1");
  }
  if (overhead_.front() != 0.0) {
    throw Error(ErrorCode::kConfig, "parallelism overhead for m = 1 must be 0");
  }
}

double ParallelismTable::overhead(std::size_t m) const {
  if (m == 0) {
    throw Error(ErrorCode::kDomain, "parallelism overhead is undefined for m = 0");
  }
  return overhead_[std::min(m, overhead_.size()) - 1];
}

bool ParallelismTable::non_decreasing() const {
  return std::is_sorted(overhead_.begin(), overhead_.end());
}

void ProfileCatalog::add(QueryType type, QueryProfile edge, QueryProfile cloud) {
  std::string key = type.id;
  entries_.insert_or_assign(std::move(key), CatalogEntry{std::move(type), edge, cloud});
}

bool ProfileCatalog::contains(std::string_view type_id) const {
  return entries_.find(type_id) != entries_.end();
}

const CatalogEntry& ProfileCatalog::at(std::string_view type_id) const {
  auto it = entries_.find(type_id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kProfileNotFound, fmt::format("no catalog entry for '{}'", type_id));
  }
  return it->second;
}

std::vector<std::string> ProfileCatalog::type_ids_of_kind(QueryKind kind) const {
  std::vector<std::string> ids;
  for (const auto& [id, entry] : entries_) {
    if (entry.type.kind == kind) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> ProfileCatalog::cep_type_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, entry] : entries_) {
    if (entry.type.kind != QueryKind::kSource && entry.type.kind != QueryKind::kSink) {
      ids.push_back(id);
    }
  }
  return ids;
}

std::vector<std::string> ProfileCatalog::validate() const {
  std::vector<std::string> warnings;
  if (type_ids_of_kind(QueryKind::kSource).empty() || type_ids_of_kind(QueryKind::kSink).empty()) {
    throw Error(ErrorCode::kConfig, "catalog needs at least one source and one sink type");
  }
  for (const auto& [id, e] : entries_) {
    const bool source = e.type.kind == QueryKind::kSource;
    if (e.type.event_size_bytes <= 0.0) {
      throw Error(ErrorCode::kConfig, fmt::format("'{}': event size must be positive", id));
    }
    if (e.type.kind != QueryKind::kSink && e.type.selectivity <= 0.0) {
      throw Error(ErrorCode::kConfig, fmt::format("'{}': selectivity must be positive", id));
    }
    if (!source && (e.edge.latency_sec <= 0.0 || e.cloud.latency_sec <= 0.0)) {
      throw Error(ErrorCode::kConfig, fmt::format("'{}': latency must be positive", id));
    }
    if (e.edge.latency_sec < 0.0 || e.cloud.latency_sec < 0.0 || e.edge.energy_mah < 0.0 ||
        e.cloud.energy_mah < 0.0) {
      throw Error(ErrorCode::kConfig, fmt::format("'{}': negative cost", id));
    }
    if (e.edge.latency_sec < e.cloud.latency_sec) {
      warnings.push_back(fmt::format("'{}': edge latency below cloud latency", id));
    }
  }
  if (!parallelism_.non_decreasing()) {
    warnings.emplace_back("parallelism table is not non-decreasing");
  }
  return warnings;
}

ProfileCatalog ProfileCatalog::synthetic_default() {
  struct Row {
    const char* id;
    QueryKind kind;
    double edge_latency_ms;
    double selectivity;
    double event_size;
  };
  // Edge-class latencies per event; cloud runs at three times the speed.
  static constexpr Row kRows[] = {
      {"filter-eq", QueryKind::kFilter, 0.7, 0.1, 64},
      {"filter-lt", QueryKind::kFilter, 0.8, 0.5, 64},
      {"filter-multi", QueryKind::kFilter, 1.5, 0.6, 96},
      {"filter-pass", QueryKind::kFilter, 0.6, 0.9, 64},
      {"filter-range", QueryKind::kFilter, 1.0, 0.3, 64},
      {"sequence-2", QueryKind::kSequence, 2.0, 0.2, 128},
      {"sequence-3", QueryKind::kSequence, 3.0, 0.1, 160},
      {"sequence-5", QueryKind::kSequence, 4.5, 0.05, 192},
      {"sequence-trend", QueryKind::kSequence, 3.5, 0.4, 128},
      {"pattern-and", QueryKind::kPattern, 3.0, 0.8, 160},
      {"pattern-every", QueryKind::kPattern, 2.5, 1.5, 128},
      {"pattern-not", QueryKind::kPattern, 2.8, 0.3, 128},
      {"pattern-or", QueryKind::kPattern, 2.2, 2.0, 128},
      {"slide-avg-12", QueryKind::kSlidingAggregate, 1.8, 1.0, 96},
      {"slide-group", QueryKind::kSlidingAggregate, 3.2, 1.2, 256},
      {"slide-max-60", QueryKind::kSlidingAggregate, 2.6, 1.0, 96},
      {"slide-sum-5", QueryKind::kSlidingAggregate, 1.2, 1.0, 96},
      {"batch-avg-12", QueryKind::kBatchAggregate, 1.5, 1.0 / 12.0, 96},
      {"batch-count-60", QueryKind::kBatchAggregate, 1.4, 1.0 / 60.0, 96},
      {"batch-group-10", QueryKind::kBatchAggregate, 2.8, 0.3, 256},
      {"batch-stddev-30", QueryKind::kBatchAggregate, 2.4, 1.0 / 30.0, 128},
  };
  constexpr double kActiveDrawMa = 200.0;

  ProfileCatalog catalog;
  for (const Row& row : kRows) {
    const double edge_latency = row.edge_latency_ms * 1e-3;
    catalog.add(QueryType{row.id, row.kind, row.selectivity, row.event_size},
                QueryProfile{edge_latency, edge_latency * kActiveDrawMa / 3600.0},
                QueryProfile{edge_latency / 3.0, 0.0});
  }
  catalog.add(QueryType{"source", QueryKind::kSource, 1.0, 64}, QueryProfile{0.0, 0.0},
              QueryProfile{0.0, 0.0});
  catalog.add(QueryType{"sink", QueryKind::kSink, 1.0, 64},
              QueryProfile{0.3e-3, 0.3e-3 * kActiveDrawMa / 3600.0},
              QueryProfile{0.1e-3, 0.0});
  return catalog;
}

}  // namespace edgesched
