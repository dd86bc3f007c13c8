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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgesched {

enum class QueryKind {
  kFilter,
  kSequence,
  kPattern,
  kSlidingAggregate,
  kBatchAggregate,
  kSource,
  kSink,
};

std::string_view to_string(QueryKind kind);
std::optional<QueryKind> parse_query_kind(std::string_view name);

enum class ResourceClass : std::uint8_t { kEdge = 0, kCloud = 1 };

std::string_view to_string(ResourceClass cls);
std::optional<ResourceClass> parse_resource_class(std::string_view name);

/// A CEP query type as benchmarked. Selectivity is output events per input
/// event; the event size is the size of each emitted event.
struct QueryType {
  std::string id;
  QueryKind kind = QueryKind::kFilter;
  double selectivity = 1.0;
  double event_size_bytes = 64.0;
};

/// Per-event cost of a query type on an exclusive resource of one class.
struct QueryProfile {
  double latency_sec = 0.0;
  double energy_mah = 0.0;
};

struct CatalogEntry {
  QueryType type;
  QueryProfile edge;
  QueryProfile cloud;

  const QueryProfile& profile(ResourceClass cls) const {
    return cls == ResourceClass::kEdge ? edge : cloud;
  }
};

/// Parallelism overhead table pi(m) for m = 1..size(), extended with the last
/// entry beyond. The capacity factor applied to a resource hosting m queries
/// is 1 + sign * pi(m).
class ParallelismTable {
 public:
  ParallelismTable() = default;
  explicit ParallelismTable(std::vector<double> overhead, double sign = 1.0);

  double overhead(std::size_t m) const;
  double capacity_factor(std::size_t m) const { return 1.0 + sign_ * overhead(m); }

  const std::vector<double>& entries() const { return overhead_; }
  double sign() const { return sign_; }
  bool non_decreasing() const;

 private:
  std::vector<double> overhead_{0.0};
  double sign_ = 1.0;
};

class ProfileCatalog {
 public:
  void add(QueryType type, QueryProfile edge, QueryProfile cloud);

  bool contains(std::string_view type_id) const;
  const CatalogEntry& at(std::string_view type_id) const;
  const QueryProfile& profile(std::string_view type_id, ResourceClass cls) const {
    return at(type_id).profile(cls);
  }

  const std::map<std::string, CatalogEntry, std::less<>>& entries() const { return entries_; }
  std::vector<std::string> type_ids_of_kind(QueryKind kind) const;

  /// Type ids of every CEP query (not source or sink), sorted.
  std::vector<std::string> cep_type_ids() const;

  const ParallelismTable& parallelism() const { return parallelism_; }
  void set_parallelism(ParallelismTable table) { parallelism_ = std::move(table); }

  /// Throws kConfig on hard violations; returns soft findings as text.
  std::vector<std::string> validate() const;

  /// 21 synthetic CEP query types plus "source" and "sink". Cloud latency is a
  /// third of the edge latency; incremental energy assumes a 200 mA active
  /// draw while processing.
  static ProfileCatalog synthetic_default();

 private:
  std::map<std::string, CatalogEntry, std::less<>> entries_;
  ParallelismTable parallelism_{{0.0, 0.2, 0.35, 0.5}};
};

}  // namespace edgesched
