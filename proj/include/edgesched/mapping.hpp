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
#include <string>
#include <vector>

#include "edgesched/resources.hpp"

namespace edgesched {

using VertexId = std::uint32_t;

/// Assignment of every query of one dataflow to a resource.
struct Mapping {
  std::string dataflow_id;
  std::vector<ResourceId> assignments;

  Mapping() = default;
  Mapping(std::string id, std::size_t vertex_count)
      : dataflow_id(std::move(id)), assignments(vertex_count, kUnassigned) {}
  Mapping(std::string id, std::vector<ResourceId> assigned)
      : dataflow_id(std::move(id)), assignments(std::move(assigned)) {}

  ResourceId operator[](VertexId v) const { return assignments[v]; }
  std::size_t size() const { return assignments.size(); }

  bool complete() const {
    for (ResourceId r : assignments) {
      if (r == kUnassigned) return false;
    }
    return true;
  }

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

}  // namespace edgesched
