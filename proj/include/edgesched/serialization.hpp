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

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "edgesched/catalog.hpp"
#include "edgesched/model.hpp"
#include "edgesched/placement.hpp"
#include "edgesched/resources.hpp"
#include "edgesched/simulator.hpp"
#include "edgesched/workload.hpp"

namespace edgesched {

using Json = nlohmann::ordered_json;

Json to_json(const ProfileCatalog& catalog);
ProfileCatalog catalog_from_json(const Json& j);

Json to_json(const PoolConfig& config);
/// Starts from the named preset ("preset" key, default small) and overrides
/// any field present.
PoolConfig pool_config_from_json(const Json& j);

Json to_json(const DataflowSpec& spec);
DataflowSpec dataflow_from_json(const Json& j);

Json to_json(const DagPool& pool);
DagPool dag_pool_from_json(const Json& j);

Json to_json(const WorkloadScript& script);
WorkloadScript workload_from_json(const Json& j);

Json to_json(const GaParams& params);
GaParams ga_params_from_json(const Json& j, GaParams base = {});

Json to_json(const ScenarioConfig& config);
/// Overrides fields of base with those present in j.
ScenarioConfig scenario_from_json(const Json& j, ScenarioConfig base = {});

Json to_json(const ConstraintReport& report);

/// Active dataflow specs with their mappings.
Json to_json(const PlacementState& state);
PlacementState state_from_json(const Json& j, const ProfileCatalog& catalog);

Json to_json(const SimTrace& trace, const ScenarioConfig& config);
SimTrace trace_from_json(const Json& j);

/// One row per interval:
///   t,activity,accepted,objective_s,planning_s,migrations,stabilization_s,utilization
/// preceded by a comment line carrying the seed and config hash.
std::string trace_csv(const SimTrace& trace);
std::string comparison_csv(const RunComparison& cmp, const Provenance& a, const Provenance& b);

/// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string content_hash(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace edgesched
