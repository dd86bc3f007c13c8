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

#include <random>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace edgesched;
using fixtures::spec;

namespace {

PlacementState with(const std::shared_ptr<const RatedDataflow>& d, const Mapping& m,
                    PlacementState s = {}) {
  s.add(d, m);
  return s;
}

// Random instance small enough for the oracle: at most `max_vertices`.
DataflowSpec tiny_random(std::mt19937_64& rng, std::size_t max_vertices, std::string id) {
  DataflowSpec s = fixtures::random_spec(rng, 3 + rng() % (max_vertices - 2), std::move(id));
  s.input_rate = 50.0 + static_cast<double>(rng() % 250);
  return s;
}

GaParams quick_ga(std::uint64_t seed) {
  GaParams p;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("strategy names") {
  for (Strategy s : {Strategy::kTopSet, Strategy::kTopSetP, Strategy::kGai, Strategy::kGag,
                     Strategy::kBrute}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK_FALSE(parse_strategy("heft").has_value());
}

TEST_CASE("topset pins the endpoints and keeps the chain local") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto d = fixtures::rated(spec("c", {"src", "f", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const ScheduleResult r = topset_place(PlacementState{}, *pool, *d, false);
  REQUIRE(r.accepted);
  CHECK(r.mappings.at(0).assignments == std::vector<ResourceId>{0, 0, 2});
  CHECK(r.planning_time_sec >= 0.0);
}

TEST_CASE("topset spills to the cloud when edges saturate") {
  const auto pool = fixtures::fixed_pool(2, 1);
  // f sustains 500 e/s on an edge and 1000 e/s on the cloud.
  const auto d = fixtures::rated(spec("c", {"src", "f", "snk"}, {{0, 1}, {1, 2}}, 700.0),
                                 pool->catalog());
  for (bool penalty : {false, true}) {
    const ScheduleResult r = topset_place(PlacementState{}, *pool, *d, penalty);
    REQUIRE(r.accepted);
    CHECK(pool->resource(r.mappings[0][1]).cls == ResourceClass::kCloud);
  }
}

TEST_CASE("topset rejects what fits nowhere and leaves the state alone") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto d = fixtures::rated(spec("c", {"src", "f", "snk"}, {{0, 1}, {1, 2}}, 5000.0),
                                 pool->catalog());
  const ScheduleResult r = topset_place(PlacementState{}, *pool, *d, false);
  CHECK_FALSE(r.accepted);
  CHECK_FALSE(r.diagnostics.reason.empty());
  CHECK(r.mappings.empty());
}

TEST_CASE("topset never moves existing queries") {
  const auto pool = build_pool(PoolConfig::preset("small"), 2);
  std::mt19937_64 rng(8);
  PlacementState state;
  for (int k = 0; k < 30; ++k) {
    DataflowSpec s = fixtures::random_spec(rng, 3 + rng() % 10, "d" + std::to_string(k));
    for (auto& t : s.vertex_types) {
      t = t == "src" ? "source" : t == "snk" ? "sink" : "pattern-and";
    }
    const auto d = fixtures::rated(s, pool->catalog());
    const PlacementState before = state;
    const ScheduleResult r = topset_place(state, *pool, *d, k % 2 == 0);
    if (!r.accepted) continue;
    state.add(d, r.mappings[0]);
    CHECK(count_migrations(before, state) == 0);
    CHECK(oracle::audit(state, *pool).empty());
  }
}

TEST_CASE("interference penalty") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto a = fixtures::rated(spec("a", {"src", "a", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const auto b = fixtures::rated(spec("b", {"src", "f", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const LoadIndex empty(*pool);
  CHECK(estimate_penalty(empty, 1, *b, 1) == 0.0);

  const PlacementState s = with(a, Mapping("a", {0, 1, 2}));
  const LoadIndex loads = LoadIndex::from_state(s, *pool);
  CHECK(estimate_penalty(loads, 1, *b, 1) ==
        doctest::Approx(0.004 * 2.0 / 1.2 - 0.004).epsilon(1e-12));
  CHECK(estimate_penalty(loads, 1, *b, 0) == 0.0);
}

TEST_CASE("penalty is never negative") {
  ProfileCatalog cat = fixtures::tiny_catalog();
  // A decreasing table makes interference look like a speed-up.
  cat.set_parallelism(ParallelismTable({0.0, 2.0, 0.1}));
  const auto pool = fixtures::fixed_pool(3, 1, cat);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    PlacementState s;
    for (int k = 0; k < 3; ++k) {
      DataflowSpec sp = fixtures::random_spec(rng, 4, "p" + std::to_string(k));
      sp.input_rate = 10.0;
      const auto d = fixtures::rated(sp, pool->catalog());
      std::vector<ResourceId> m(4);
      for (VertexId v = 0; v < 4; ++v) {
        m[v] = d->is_sink(v) ? 3 : static_cast<ResourceId>(rng() % 3);
      }
      s.add(d, Mapping(sp.id, m));
    }
    const LoadIndex loads = LoadIndex::from_state(s, *pool);
    const auto probe = fixtures::rated(spec("q", {"src", "b", "snk"}, {{0, 1}, {1, 2}}, 10.0),
                                       pool->catalog());
    for (ResourceId r = 0; r < pool->size(); ++r) CHECK(estimate_penalty(loads, r, *probe, 1) >= 0.0);
  }
}

TEST_CASE("brute force basics") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto d = fixtures::rated(spec("c", {"src", "f", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const BruteForceResult r = brute_force_place({d.get()}, *pool);
  REQUIRE(r.feasible);
  CHECK(r.enumerated == 27);
  // Paying the edge-to-cloud hop before f beats running f on the edge.
  CHECK(r.objective == doctest::Approx(0.06 + 1e-4 + 0.001));
  CHECK(r.mappings[0][1] == 2);
  CHECK(r.mappings[0][2] == 2);
}

TEST_CASE("brute force reports infeasible energy budgets") {
  ProfileCatalog cat = fixtures::tiny_catalog();
  cat.add({"hog", QueryKind::kFilter, 1.0, 100.0}, {0.001, 1.0}, {0.1, 0.0});
  PoolConfig cfg;
  cfg.edge_count = 2;
  cfg.cloud_count = 1;
  cfg.catalog = cat;
  // The base load alone drains these batteries.
  cfg.energy = {100.0, 300.0, 86400.0};
  const auto pool = build_pool(cfg, 1);
  const auto d = fixtures::rated(spec("h", {"src", "hog", "snk"}, {{0, 1}, {1, 2}}), cat);
  const BruteForceResult r = brute_force_place({d.get()}, *pool);
  CHECK_FALSE(r.feasible);
  CHECK(r.mappings.empty());
  CHECK_FALSE(topset_place(PlacementState{}, *pool, *d, false).accepted);
}

TEST_CASE("brute force guard") {
  const auto pool = fixtures::fixed_pool(5, 1);
  const auto d = fixtures::rated(spec("c", {"src", "f", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  try {
    brute_force_place({d.get()}, *pool);
    FAIL("expected the guard to trip");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGuard);
  }
  const auto small = fixtures::fixed_pool(3, 1);
  const auto big = fixtures::rated(
      spec("big", {"src", "f", "f", "f", "f", "f", "f", "f", "snk"},
           {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}}),
      small->catalog());
  CHECK_THROWS_AS(brute_force_place({big.get()}, *small), Error);
}

TEST_CASE("heuristics never beat the oracle and always return valid placements") {
  const auto pool = fixtures::fixed_pool(2, 2, fixtures::tiny_catalog(), 0.004, 0.05, 0.002);
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const auto d = fixtures::rated(tiny_random(rng, 6, "t"), pool->catalog());
    const BruteForceResult best = brute_force_place({d.get()}, *pool);
    for (bool penalty : {false, true}) {
      const ScheduleResult r = topset_place(PlacementState{}, *pool, *d, penalty);
      if (!r.accepted) continue;
      REQUIRE(best.feasible);
      const PlacementState s = with(d, r.mappings[0]);
      CHECK(oracle::audit(s, *pool).empty());
      CHECK(objective(s, *pool) >= best.objective - 1e-12);
      ++compared;
    }
  }
  CHECK(compared > 60);
}

TEST_CASE("ga on a source-sink pair finds the optimum") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto d = fixtures::rated(spec("p", {"src", "snk"}, {{0, 1}}), pool->catalog());
  const ScheduleResult r = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(1));
  REQUIRE(r.accepted);
  CHECK(makespan(*d, r.mappings[0], *pool) ==
        doctest::Approx(brute_force_place({d.get()}, *pool).objective));
}

TEST_CASE("ga is deterministic per seed and its best valid fitness never rises") {
  const auto pool = fixtures::fixed_pool(3, 2);
  std::mt19937_64 rng(2);
  const auto d = fixtures::rated(tiny_random(rng, 6, "g"), pool->catalog());
  const ScheduleResult a = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(9));
  const ScheduleResult b = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(9));
  REQUIRE(a.accepted);
  CHECK(a.mappings == b.mappings);
  CHECK(a.diagnostics.generations == b.diagnostics.generations);
  const auto& h = a.diagnostics.best_valid_history;
  REQUIRE_FALSE(h.empty());
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1]);
  CHECK(a.diagnostics.generations <= quick_ga(9).max_generations);
}

TEST_CASE("ga lands within ten percent of the optimum on most seeds") {
  const auto pool = fixtures::fixed_pool(2, 2, fixtures::tiny_catalog(), 0.004, 0.05, 0.002);
  const auto d = fixtures::rated(
      spec("four", {"src", "a", "b", "snk"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), pool->catalog());
  const BruteForceResult best = brute_force_place({d.get()}, *pool);
  REQUIRE(best.feasible);
  int close = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ScheduleResult r = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(seed));
    REQUIRE(r.accepted);
    const double value = makespan(*d, r.mappings[0], *pool);
    CHECK(value >= best.objective - 1e-12);
    if (value <= 1.10 * best.objective) ++close;
  }
  CHECK(close >= 45);
}

TEST_CASE("ga incremental on an empty state is plain ga") {
  const auto pool = fixtures::fixed_pool(3, 2);
  std::mt19937_64 rng(6);
  const auto d = fixtures::rated(tiny_random(rng, 6, "i"), pool->catalog());
  const ScheduleResult inc = ga_incremental(PlacementState{}, *pool, *d, quick_ga(4));
  const ScheduleResult plain = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(4));
  CHECK(inc.accepted == plain.accepted);
  CHECK(inc.mappings == plain.mappings);
}

TEST_CASE("ga incremental respects residual capacity") {
  const auto pool = fixtures::fixed_pool(2, 1);
  // Alone, b (6 ms on an edge) sustains 166 e/s; sharing with a it cannot.
  const auto a = fixtures::rated(spec("a", {"src", "a", "snk"}, {{0, 1}, {1, 2}}, 100.0),
                                 pool->catalog());
  const PlacementState s = with(a, Mapping("a", {0, 1, 2}));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    DataflowSpec sp = tiny_random(rng, 5, "n" + std::to_string(i));
    const auto d = fixtures::rated(sp, pool->catalog());
    const ScheduleResult r = ga_incremental(s, *pool, *d, quick_ga(i + 1));
    if (!r.accepted) continue;
    PlacementState combined = s;
    combined.add(d, r.mappings[0]);
    CHECK(validate_state(combined, *pool).ok());
    CHECK(oracle::audit(combined, *pool).empty());
    CHECK(combined.at("a").mapping == s.at("a").mapping);
  }
  const auto flood = fixtures::rated(spec("x", {"src", "f", "snk"}, {{0, 1}, {1, 2}}, 5000.0),
                                     pool->catalog());
  const ScheduleResult r = ga_incremental(s, *pool, *flood, quick_ga(1));
  CHECK_FALSE(r.accepted);
  CHECK_FALSE(r.diagnostics.reason.empty());
}

TEST_CASE("global dag layout") {
  const auto pool = fixtures::fixed_pool(2, 1);
  const auto a = fixtures::rated(spec("a", {"src", "a", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const auto b = fixtures::rated(spec("b", {"src", "src", "join", "snk"}, {{0, 2}, {1, 2}, {2, 3}}),
                                 pool->catalog());
  PlacementState s = with(a, Mapping("a", {0, 1, 2}));
  s.add(b, Mapping("b", {0, 1, 1, 2}));
  const GlobalDag g = build_global_dag(s);
  CHECK(g.query_count == 7);
  CHECK(g.components.size() == 2);
  CHECK(g.offsets == std::vector<std::size_t>{0, 3});
  std::size_t from_dummy = 0;
  std::size_t to_dummy = 0;
  for (const auto& [u, v] : g.edges) {
    from_dummy += u == g.dummy_source ? 1 : 0;
    to_dummy += v == g.dummy_sink ? 1 : 0;
  }
  CHECK(from_dummy == 3);  // one per source
  CHECK(to_dummy == 2);    // one per sink
  CHECK(g.edges.size() == 2 + 3 + 3 + 2);
  CHECK_THROWS_AS(ga_global(PlacementState{}, *pool, quick_ga(1)), Error);
}

TEST_CASE("ga global with one dataflow matches plain ga") {
  const auto pool = fixtures::fixed_pool(3, 2);
  std::mt19937_64 rng(12);
  const auto d = fixtures::rated(tiny_random(rng, 6, "solo"), pool->catalog());
  const ScheduleResult first = topset_place(PlacementState{}, *pool, *d, false);
  REQUIRE(first.accepted);
  const ScheduleResult g = ga_global(with(d, first.mappings[0]), *pool, quick_ga(3));
  const ScheduleResult p = ga_place(GaProblem{{d.get()}, nullptr}, *pool, quick_ga(3));
  CHECK(g.mappings == p.mappings);
}

TEST_CASE("ga global on two tiny dataflows stays above the joint optimum") {
  const auto pool = fixtures::fixed_pool(2, 2, fixtures::tiny_catalog(), 0.004, 0.05, 0.002);
  const auto a = fixtures::rated(spec("a", {"src", "a", "snk"}, {{0, 1}, {1, 2}}), pool->catalog());
  const auto b = fixtures::rated(spec("b", {"src", "b", "f", "snk"}, {{0, 1}, {1, 2}, {2, 3}}),
                                 pool->catalog());
  const BruteForceResult joint = brute_force_place({a.get(), b.get()}, *pool);
  REQUIRE(joint.feasible);
  const BruteForceResult only_a = brute_force_place({a.get()}, *pool);
  CHECK(joint.objective >= only_a.objective);

  PlacementState s;
  s.add(a, topset_place(s, *pool, *a, false).mappings.at(0));
  s.add(b, topset_place(s, *pool, *b, false).mappings.at(0));
  const ScheduleResult g = ga_global(s, *pool, quick_ga(5));
  REQUIRE(g.accepted);
  PlacementState next;
  next.add(a, g.mappings[0]);
  next.add(b, g.mappings[1]);
  CHECK(oracle::audit(next, *pool).empty());
  CHECK(objective(next, *pool) >= joint.objective - 1e-12);
  CHECK(objective(next, *pool) <= 1.10 * joint.objective);
  if (next.at("a").mapping != s.at("a").mapping || next.at("b").mapping != s.at("b").mapping) {
    CHECK(count_migrations(s, next) > 0);
  }
}

TEST_CASE("ga params are checked") {
  GaParams p;
  p.crossover_rate = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = GaParams{};
  p.population_size = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = GaParams{};
  p.elite_count = p.population_size + 1;
  CHECK_THROWS_AS(p.validate(), Error);
}
