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

#include <limits>

#include <fmt/format.h>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"

namespace edgesched {

BruteForceResult brute_force_place(const std::vector<const RatedDataflow*>& dags,
                                   const ResourcePool& pool) {
  std::size_t n = 0;
  for (const RatedDataflow* dag : dags) n += dag->vertex_count();
  if (n == 0) throw Error(ErrorCode::kDomain, "nothing to place");
  if (n > kBruteForceMaxQueries || pool.size() > kBruteForceMaxResources) {
    throw Error(ErrorCode::kGuard,
                fmt::format("instance too large for exhaustive search: {} queries on {} resources",
                            n, pool.size()));
  }

  // Non-owning handles so the candidate state can refer to the caller's
  // dataflows.
  PlacementState candidate;
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const RatedDataflow* dag : dags) {
    offsets.push_back(offset);
    offset += dag->vertex_count();
    candidate.add(DataflowPtr(DataflowPtr{}, dag),
                  Mapping(dag->id(), std::vector<ResourceId>(dag->vertex_count(), 0)));
  }

  BruteForceResult result;
  result.objective = std::numeric_limits<double>::infinity();
  const auto radix = static_cast<ResourceId>(pool.size());
  std::vector<ResourceId> digits(n, 0);
  for (;;) {
    ++result.enumerated;
    bool class_ok = true;
    for (std::size_t d = 0; d < dags.size() && class_ok; ++d) {
      for (VertexId v = 0; v < dags[d]->vertex_count(); ++v) {
        const ResourceClass cls = pool.resource(digits[offsets[d] + v]).cls;
        if ((dags[d]->is_source(v) && cls != ResourceClass::kEdge) ||
            (dags[d]->is_sink(v) && cls != ResourceClass::kCloud)) {
          class_ok = false;
          break;
        }
      }
    }
    if (class_ok) {
      for (std::size_t d = 0; d < dags.size(); ++d) {
        std::vector<ResourceId> a(digits.begin() + static_cast<std::ptrdiff_t>(offsets[d]),
                                  digits.begin() + static_cast<std::ptrdiff_t>(
                                                       offsets[d] + dags[d]->vertex_count()));
        candidate.replace_mapping(Mapping(dags[d]->id(), std::move(a)));
      }
      if (validate_state(candidate, pool).ok()) {
        ++result.valid_count;
        const double value = objective(candidate, pool);
        if (value < result.objective) {
          result.objective = value;
          result.mappings.clear();
          for (const RatedDataflow* dag : dags) {
            result.mappings.push_back(candidate.at(dag->id()).mapping);
          }
        }
      }
    }
    // Odometer increment.
    std::size_t i = 0;
    while (i < n && ++digits[i] == radix) digits[i++] = 0;
    if (i == n) break;
  }
  result.feasible = result.valid_count > 0;
  if (!result.feasible) result.objective = 0.0;
  return result;
}

}  // namespace edgesched
