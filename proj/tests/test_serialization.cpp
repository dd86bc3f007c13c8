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

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "edgesched/error.hpp"
#include "edgesched/serialization.hpp"
#include "support/fixtures.hpp"

using namespace edgesched;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "edgesched_serialization_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("content hash is FNV-1a of the compact dump") {
  // Reference values computed outside the library.
  CHECK(content_hash(Json{{"a", 1}}) == "9c3e82dd6fcae8b1");
  CHECK(content_hash(Json::array({1, 2})) == "6a12f12d4705a9b6");
  CHECK(content_hash(Json{{"a", 1}}) != content_hash(Json{{"a", 2}}));
}

TEST_CASE("catalog and pool config round trip") {
  const ProfileCatalog cat = ProfileCatalog::synthetic_default();
  const Json j = to_json(cat);
  CHECK(to_json(catalog_from_json(j)) == j);

  PoolConfig cfg = PoolConfig::preset("large");
  cfg.edge_count = 17;
  const Json pj = to_json(cfg);
  const PoolConfig back = pool_config_from_json(pj);
  CHECK(back.edge_count == 17);
  CHECK(to_json(back) == pj);

  // Missing keys fall back to the preset.
  const PoolConfig partial = pool_config_from_json(Json{{"preset", "small"}, {"cloud_count", 3}});
  CHECK(partial.cloud_count == 3);
  CHECK(partial.edge_count == PoolConfig::preset("small").edge_count);
}

TEST_CASE("dag pool and workload round trip") {
  const auto pool = build_pool(PoolConfig::preset("small"), 5);
  DagPoolConfig gen;
  gen.count = 12;
  const DagPool dags = generate_pool(gen, 5, *pool);
  const Json dj = to_json(dags);
  CHECK(to_json(dag_pool_from_json(dj)) == dj);
  CHECK(content_hash(to_json(dag_pool_from_json(dj))) == content_hash(dj));

  const WorkloadScript w =
      generate_workload(dags, WorkloadConfig::preset("small", WorkloadModel::kPoisson), 5);
  const Json wj = to_json(w);
  const WorkloadScript wb = workload_from_json(wj);
  CHECK(to_json(wb) == wj);
  REQUIRE(wb.intervals.size() == w.intervals.size());
  for (std::size_t t = 0; t < w.intervals.size(); ++t) {
    CHECK(wb.intervals[t].kind == w.intervals[t].kind);
    CHECK(wb.intervals[t].pool_index == w.intervals[t].pool_index);
    CHECK(wb.intervals[t].instance == w.intervals[t].instance);
  }
}

TEST_CASE("scenario config overrides") {
  ScenarioConfig base;
  base.seed = 11;
  const ScenarioConfig c = scenario_from_json(
      Json{{"strategy", "gai"}, {"rebalance", "vertex+edge"}, {"ga", {{"population_size", 40}}}},
      base);
  CHECK(c.seed == 11);
  CHECK(c.strategy == Strategy::kGai);
  CHECK(c.rebalance == RebalanceMode::kVertexEdge);
  CHECK(c.ga.population_size == 40);
  CHECK(c.ga.max_generations == GaParams{}.max_generations);
  CHECK(to_json(scenario_from_json(to_json(c))) == to_json(c));
  CHECK_THROWS_AS(scenario_from_json(Json{{"strategy", "nope"}}), Error);
}

TEST_CASE("trace round trip and CSV layout") {
  const auto pool = build_pool(PoolConfig::preset("small"), 9);
  DagPoolConfig gen;
  gen.count = 10;
  const DagPool dags = generate_pool(gen, 9, *pool);
  WorkloadConfig wc = WorkloadConfig::preset("small", WorkloadModel::kRandomWalk);
  wc.horizon = 30;
  const WorkloadScript w = generate_workload(dags, wc, 9);
  ScenarioConfig cfg;
  cfg.seed = 9;
  cfg.rebalance = RebalanceMode::kVertex;
  const SimTrace trace = run_scenario(cfg, pool, dags, w);

  const Json j = to_json(trace, cfg);
  for (const char* key : {"format", "provenance", "config", "summary", "records", "final_state"}) {
    CHECK(j.contains(key));
  }
  const SimTrace back = trace_from_json(j);
  CHECK(back.provenance.config_hash == trace.provenance.config_hash);
  CHECK(back.provenance.workload_hash == trace.provenance.workload_hash);
  REQUIRE(back.records.size() == trace.records.size());
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    CHECK(back.records[t].objective_sec == trace.records[t].objective_sec);
    CHECK(back.records[t].migrations == trace.records[t].migrations);
    CHECK(back.records[t].per_dag_makespans == trace.records[t].per_dag_makespans);
  }
  const PlacementState st = state_from_json(j.at("final_state"), pool->catalog());
  CHECK(st.size() == trace.final_state.size());
  CHECK(objective(st, *pool) == doctest::Approx(objective(trace.final_state, *pool)));

  std::istringstream csv(trace_csv(trace));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("#", 0) == 0);
  CHECK(line.find(trace.provenance.config_hash) != std::string::npos);
  std::getline(csv, line);
  CHECK(line == "t,activity,accepted,objective_s,planning_s,migrations,stabilization_s,utilization");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 30);
}

TEST_CASE("file helpers report failures with the right codes") {
  const auto path = scratch("nested/dir/x.json");
  std::filesystem::remove_all(path.parent_path());
  write_text_file(path, "{\"k\": [1, 2]}");
  CHECK(read_json_file(path).at("k").size() == 2);

  write_text_file(path, "{ not json");
  try {
    read_json_file(path);
    FAIL("expected a parse failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
  try {
    read_json_file(scratch("absent.json"));
    FAIL("expected a missing file");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}
