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

#include <map>
#include <set>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"
#include "edgesched/workload.hpp"
#include "support/fixtures.hpp"
#include "support/stats.hpp"

using namespace edgesched;

namespace {

const ResourcePool& small_pool() {
  static const auto pool = build_pool(PoolConfig::preset("small"), 1);
  return *pool;
}

const DagPool& default_dags() {
  static const DagPool dags = generate_pool(DagPoolConfig{}, 7, small_pool());
  return dags;
}

}  // namespace

TEST_CASE("generated pool respects the structural bounds") {
  const DagPool& dags = default_dags();
  REQUIRE(dags.dataflows.size() == 39);
  const ProfileCatalog& cat = small_pool().catalog();
  const auto cep = cat.cep_type_ids();
  std::set<std::string> ids;
  std::size_t smallest = 99;
  std::size_t largest = 0;
  for (const DataflowSpec& s : dags.dataflows) {
    CHECK(ids.insert(s.id).second);
    const std::size_t n = s.vertex_count();
    smallest = std::min(smallest, n);
    largest = std::max(largest, n);
    CHECK(n >= 4);
    CHECK(n <= 50);
    std::map<VertexId, int> fan_out;
    for (const auto& [u, v] : s.edges) ++fan_out[u];
    for (const auto& [u, k] : fan_out) CHECK(k <= 5);
    const RatedDataflow d = propagate_rates(s, cat);
    CHECK(s.input_rate == 100.0);
    CHECK(d.sources().size() <= 4);
    CHECK(d.sinks().size() <= 3);
    for (VertexId src : d.sources()) {
      CHECK(d.out_rate(src) >= 25.0);
      CHECK(d.out_rate(src) <= 100.0);
    }
    for (VertexId v = 0; v < n; ++v) {
      if (!d.is_source(v) && !d.is_sink(v)) {
        CHECK(std::find(cep.begin(), cep.end(), s.vertex_types[v]) != cep.end());
      }
    }
  }
  CHECK(smallest == 4);
  CHECK(largest == 50);
}

TEST_CASE("every generated dataflow has a feasible placement") {
  const DagPool& dags = default_dags();
  PoolConfig ref = PoolConfig::preset("small");
  ref.edge_count = 4;
  ref.cloud_count = 1;
  const auto five = build_pool(ref, 7);
  for (const DataflowSpec& s : dags.dataflows) {
    const RatedDataflow d = propagate_rates(s, small_pool().catalog());
    if (s.vertex_count() <= kBruteForceMaxQueries) {
      CHECK(brute_force_place({&d}, *five).feasible);
    } else {
      CHECK(topset_place(PlacementState{}, small_pool(), d, false).accepted);
    }
  }
}

TEST_CASE("pool generation is deterministic") {
  DagPoolConfig c;
  c.count = 10;
  const DagPool a = generate_pool(c, 3, small_pool());
  const DagPool b = generate_pool(c, 3, small_pool());
  REQUIRE(a.dataflows.size() == b.dataflows.size());
  for (std::size_t i = 0; i < a.dataflows.size(); ++i) {
    CHECK(a.dataflows[i].vertex_types == b.dataflows[i].vertex_types);
    CHECK(a.dataflows[i].edges == b.dataflows[i].edges);
  }
  DagPoolConfig bad;
  bad.count = 0;
  CHECK_THROWS_AS(generate_pool(bad, 1, small_pool()), Error);
}

TEST_CASE("generation gives up on impossible demands") {
  ProfileCatalog cat = ProfileCatalog::synthetic_default();
  PoolConfig cfg = PoolConfig::preset("small");
  cfg.energy.battery_capacity_mah = 100.0;  // the base load alone drains every edge
  const auto pool = build_pool(cfg, 1);
  DagPoolConfig c;
  c.count = 2;
  c.max_attempts = 5;
  try {
    generate_pool(c, 1, *pool);
    FAIL("expected a generation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGeneration);
  }
}

TEST_CASE("utilization") {
  const auto pool = fixtures::fixed_pool(96, 4);
  CHECK(utilization(PlacementState{}, *pool) == 0.0);
  PlacementState s;
  int k = 0;
  for (std::size_t n : {4, 5, 6}) {
    std::vector<std::string> types{"src"};
    std::vector<Edge> edges;
    for (VertexId v = 1; v + 1 < n; ++v) {
      types.push_back("f");
      edges.push_back({v - 1, v});
    }
    types.push_back("snk");
    edges.push_back({static_cast<VertexId>(n - 2), static_cast<VertexId>(n - 1)});
    const std::string id = "u" + std::to_string(k++);
    const auto d = fixtures::rated(fixtures::spec(id, types, edges), pool->catalog());
    std::vector<ResourceId> m(n, 0);
    m.back() = 96;
    s.add(d, Mapping(id, m));
  }
  CHECK(utilization(s, *pool) == doctest::Approx(0.15));
}

TEST_CASE("random walk hysteresis") {
  RwDecision d = next_activity_rw(2.6, 2.0, 0.5, RwPhase::kAdding);
  CHECK(d.kind == ActivityKind::kDepart);
  CHECK(d.phase == RwPhase::kRemoving);
  d = next_activity_rw(2.4, 2.0, 0.5, RwPhase::kAdding);
  CHECK(d.kind == ActivityKind::kArrive);
  d = next_activity_rw(1.6, 2.0, 0.5, RwPhase::kRemoving);
  CHECK(d.kind == ActivityKind::kDepart);
  d = next_activity_rw(1.5, 2.0, 0.5, RwPhase::kRemoving);
  CHECK(d.kind == ActivityKind::kArrive);
  CHECK(d.phase == RwPhase::kAdding);

  // Zero band: the walk flips at the threshold itself.
  CHECK(next_activity_rw(2.0, 2.0, 0.0, RwPhase::kAdding).kind == ActivityKind::kDepart);
  CHECK(next_activity_rw(2.0, 2.0, 0.0, RwPhase::kRemoving).kind == ActivityKind::kArrive);
  CHECK(next_activity_rw(1.9, 2.0, 0.0, RwPhase::kAdding).kind == ActivityKind::kArrive);
  CHECK(next_activity_rw(2.1, 2.0, 0.0, RwPhase::kRemoving).kind == ActivityKind::kDepart);
  CHECK_THROWS_AS(next_activity_rw(1.0, 2.0, -0.1, RwPhase::kAdding), Error);
}

TEST_CASE("poisson alternation") {
  CHECK(next_activity_poisson(5, 16) == ActivityKind::kArrive);
  CHECK(next_activity_poisson(15, 16) == ActivityKind::kArrive);
  CHECK(next_activity_poisson(16, 16) == ActivityKind::kDepart);
  CHECK(next_activity_poisson(20, 16) == ActivityKind::kDepart);
  CHECK(next_activity_poisson(21, 16) == ActivityKind::kArrive);
  CHECK(next_activity_poisson(69, 70) == ActivityKind::kArrive);
  CHECK(next_activity_poisson(70, 70) == ActivityKind::kDepart);
}

TEST_CASE("truncated poisson sampler fits its pmf") {
  TruncatedPoissonSampler sampler(12.0, 4, 50);
  double total = 0.0;
  for (std::size_t k = 4; k <= 50; ++k) total += sampler.probability(k);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sampler.probability(3) == 0.0);

  std::mt19937_64 rng(99);
  const int draws = 10000;
  std::vector<double> observed(47, 0.0);
  std::vector<double> p(47, 0.0);
  for (int i = 0; i < draws; ++i) {
    const std::size_t s = sampler(rng);
    REQUIRE(s >= 4);
    REQUIRE(s <= 50);
    observed[s - 4] += 1.0;
  }
  for (std::size_t k = 4; k <= 50; ++k) p[k - 4] = sampler.probability(k);
  const stats::Chi2 c = stats::chi2(observed, p, draws);
  CHECK(c.statistic < stats::chi2_critical_01(c.df));
}

TEST_CASE("inverse size sampler frequencies follow 1/size") {
  InverseSizeSampler sampler({4, 5, 8, 8, 12, 20, 33, 50});
  std::mt19937_64 rng(5);
  std::map<std::size_t, double> count;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) count[sampler(rng)] += 1.0;
  double norm = 0.0;
  for (std::size_t s : sampler.sizes()) norm += 1.0 / static_cast<double>(s);
  for (std::size_t s : sampler.sizes()) {
    const double expected = 1.0 / static_cast<double>(s) / norm;
    CHECK(sampler.probability(s) == doctest::Approx(expected));
    CHECK(std::abs(count[s] / draws - expected) / expected < 0.05);
  }
}

TEST_CASE("scripts are reproducible and consistent") {
  const DagPool& dags = default_dags();
  for (WorkloadModel model : {WorkloadModel::kRandomWalk, WorkloadModel::kPoisson}) {
    const WorkloadConfig cfg = WorkloadConfig::preset("small", model);
    const WorkloadScript a = generate_workload(dags, cfg, 4);
    const WorkloadScript b = generate_workload(dags, cfg, 4);
    CHECK(a.intervals == b.intervals);
    CHECK(a.intervals.size() == 100);
    std::set<std::uint64_t> live;
    std::set<std::uint64_t> seen;
    for (const Activity& act : a.intervals) {
      if (act.kind == ActivityKind::kArrive) {
        CHECK(seen.insert(act.instance).second);
        live.insert(act.instance);
      } else if (act.kind == ActivityKind::kDepart) {
        CHECK(live.erase(act.instance) == 1);
      }
    }
    CHECK_NOTHROW(scripted_utilization(dags, a));
  }
  const WorkloadScript p = generate_workload(
      dags, WorkloadConfig::preset("small", WorkloadModel::kPoisson), 4);
  for (std::size_t t = 0; t < 16; ++t) CHECK(p.intervals[t].kind == ActivityKind::kArrive);
  for (std::size_t t = 16; t < 100; ++t) {
    CHECK(p.intervals[t].kind ==
          ((t - 16) % 2 == 0 ? ActivityKind::kDepart : ActivityKind::kArrive));
  }
}

TEST_CASE("random walk utilization stays in its band") {
  const DagPool& dags = default_dags();
  const WorkloadConfig cfg = WorkloadConfig::preset("small", WorkloadModel::kRandomWalk);
  const double slack = 50.0 / static_cast<double>(cfg.resource_count);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto u = scripted_utilization(dags, generate_workload(dags, cfg, seed));
    bool warmed = false;
    for (double x : u) {
      warmed = warmed || x >= cfg.target_utilization - cfg.band;
      if (!warmed) continue;
      CHECK(x >= cfg.target_utilization - cfg.band - slack);
      CHECK(x <= cfg.target_utilization + cfg.band + slack);
    }
    CHECK(warmed);
  }
}

TEST_CASE("removal falls back to the nearest size") {
  const DagPool& dags = default_dags();
  WorkloadConfig cfg = WorkloadConfig::preset("small", WorkloadModel::kPoisson);
  cfg.removal_attempts = 1;
  cfg.warmup = 4;
  const WorkloadScript s = generate_workload(dags, cfg, 2);
  std::size_t departures = 0;
  for (const Activity& a : s.intervals) departures += a.kind == ActivityKind::kDepart ? 1 : 0;
  CHECK(departures == 48);
  CHECK_NOTHROW(scripted_utilization(dags, s));
}

TEST_CASE("workload config checks") {
  WorkloadConfig c;
  c.band = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(WorkloadConfig::preset("huge", WorkloadModel::kPoisson), Error);
  CHECK(WorkloadConfig::preset("large", WorkloadModel::kPoisson).horizon == 400);
  CHECK(WorkloadConfig::preset("large", WorkloadModel::kPoisson).warmup == 70);
  CHECK(parse_workload_model("rw") == WorkloadModel::kRandomWalk);
  CHECK(parse_activity_kind("depart") == ActivityKind::kDepart);
}
