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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"

namespace edgesched {

void GaParams::validate() const {
  if (population_size == 0 || max_generations == 0 || tournament_size == 0) {
    throw Error(ErrorCode::kConfig, "GA sizes must be positive");
  }
  if (elite_count > population_size) {
    throw Error(ErrorCode::kConfig, "GA elite count exceeds the population");
  }
  for (double rate : {crossover_rate, mutation_rate, no_improvement_window_fraction}) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw Error(ErrorCode::kConfig, "GA rates must lie in [0, 1]");
    }
  }
}

GlobalDag build_global_dag(const PlacementState& state) {
  GlobalDag g;
  for (const auto& [id, active] : state.dataflows()) {
    g.components.push_back(active.dag.get());
    g.offsets.push_back(g.query_count);
    g.query_count += active.dag->vertex_count();
  }
  g.dummy_source = g.query_count;
  g.dummy_sink = g.query_count + 1;
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    const RatedDataflow& dag = *g.components[c];
    const std::size_t base = g.offsets[c];
    for (VertexId s : dag.sources()) g.edges.emplace_back(g.dummy_source, base + s);
    for (const auto& [from, to] : dag.spec().edges) g.edges.emplace_back(base + from, base + to);
    for (VertexId s : dag.sinks()) g.edges.emplace_back(base + s, g.dummy_sink);
  }
  return g;
}

namespace {

// Fitness evaluation over flat gene vectors. Keeps its own running loads so
// a chromosome is scored without touching a PlacementState.
class Evaluator {
 public:
  Evaluator(const GaProblem& problem, const ResourcePool& pool)
      : problem_(problem), pool_(pool), pi_(pool.catalog().parallelism()) {
    classes_.reserve(pool.size());
    for (const Resource& r : pool.resources()) classes_.push_back(r.cls);
    std::size_t longest = 0;
    for (const RatedDataflow* dag : problem.dags) {
      offsets_.push_back(gene_count_);
      gene_count_ += dag->vertex_count();
      longest = std::max(longest, dag->vertex_count());
    }
    arrival_.resize(longest);
    scratch_.resize(pool.size());
    touched_flag_.assign(pool.size(), 0);
  }

  std::size_t gene_count() const { return gene_count_; }

  void score(Chromosome& c) {
    c.objective = 0.0;
    for (std::size_t d = 0; d < problem_.dags.size(); ++d) {
      c.objective += makespan_of(*problem_.dags[d], &c.genes[offsets_[d]]);
    }
    c.violations = violations_of(c.genes);
  }

 private:
  struct Aggregate {
    std::size_t count = 0;
    double latency_sum = 0.0;
    double max_rate = 0.0;
    double energy_rate = 0.0;
  };

  double makespan_of(const RatedDataflow& dag, const ResourceId* genes) {
    double span = 0.0;
    for (VertexId v : dag.topo_order()) {
      double a = 0.0;
      for (VertexId u : dag.predecessors(v)) {
        const ResourceId from = genes[u];
        a = std::max(a, arrival_[u] + dag.latency(u, classes_[from]) +
                            pool_.link_cost(from, genes[v], dag.event_size(u)));
      }
      arrival_[v] = a;
      if (dag.is_sink(v)) span = std::max(span, a);
    }
    return span;
  }

  std::size_t violations_of(const std::vector<ResourceId>& genes) {
    std::size_t violations = 0;
    touched_.clear();
    for (std::size_t d = 0; d < problem_.dags.size(); ++d) {
      const RatedDataflow& dag = *problem_.dags[d];
      const ResourceId* g = &genes[offsets_[d]];
      for (VertexId v = 0; v < dag.vertex_count(); ++v) {
        const ResourceId r = g[v];
        const ResourceClass cls = classes_[r];
        if (!class_allowed(dag.kind(v), cls)) ++violations;
        Aggregate& agg = touch(r);  // sources still expose the base load
        if (dag.is_source(v)) continue;
        const double rate = dag.in_rate(v);
        ++agg.count;
        agg.latency_sum += dag.latency(v, cls);
        agg.max_rate = std::max(agg.max_rate, rate);
        if (cls == ResourceClass::kEdge) agg.energy_rate += rate * dag.energy(v, cls);
      }
    }
    for (ResourceId r : touched_) {
      const Aggregate& agg = scratch_[r];
      if (agg.count > 0 && agg.latency_sum > 0.0 &&
          !(agg.max_rate <
            pi_.capacity_factor(agg.count) / agg.latency_sum * (1.0 - kAdmissionSlack))) {
        ++violations;
      }
      const Resource& res = pool_.resources()[r];
      if (res.is_edge() &&
          !(res.recharge_interval_sec * (res.base_load_ma / 3600.0 + agg.energy_rate) <=
            res.battery_capacity_mah * (1.0 - kAdmissionSlack))) {
        ++violations;
      }
      touched_flag_[r] = 0;
    }
    return violations;
  }

  Aggregate& touch(ResourceId r) {
    if (!touched_flag_[r]) {
      touched_flag_[r] = 1;
      touched_.push_back(r);
      Aggregate& agg = scratch_[r];
      agg = Aggregate{};
      if (problem_.residual != nullptr) {
        const ResourceLoad& base = problem_.residual->at(r);
        agg.count = base.count();
        agg.latency_sum = base.latency_sum;
        agg.max_rate = base.max_in_rate;
        agg.energy_rate = base.energy_rate;
      }
    }
    return scratch_[r];
  }

  const GaProblem& problem_;
  const ResourcePool& pool_;
  const ParallelismTable& pi_;
  std::vector<ResourceClass> classes_;
  std::vector<std::size_t> offsets_;
  std::size_t gene_count_ = 0;
  std::vector<double> arrival_;
  std::vector<Aggregate> scratch_;
  std::vector<char> touched_flag_;
  std::vector<ResourceId> touched_;
};

}  // namespace

ScheduleResult ga_place(const GaProblem& problem, const ResourcePool& pool,
                        const GaParams& params) {
  const auto started = std::chrono::steady_clock::now();
  params.validate();
  ScheduleResult result;
  Evaluator eval(problem, pool);
  const std::size_t n = eval.gene_count();
  if (n == 0) throw Error(ErrorCode::kDomain, "GA needs at least one query to place");

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<ResourceId> any_resource(0, static_cast<ResourceId>(pool.size() - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Chromosome> population(params.population_size);
  double mean_objective = 0.0;
  for (Chromosome& c : population) {
    c.genes.resize(n);
    for (ResourceId& g : c.genes) g = any_resource(rng);
    eval.score(c);
    mean_objective += c.objective;
  }
  result.diagnostics.evaluations += population.size();
  mean_objective /= static_cast<double>(population.size());
  const double weight =
      params.penalty_weight > 0.0 ? params.penalty_weight : 10.0 * std::max(mean_objective, 1e-3);
  auto fitness = [weight](Chromosome& c) {
    c.fitness = c.objective + weight * static_cast<double>(c.violations);
  };
  for (Chromosome& c : population) fitness(c);

  constexpr double kNone = std::numeric_limits<double>::infinity();
  Chromosome best_valid;
  best_valid.fitness = kNone;
  double best_any = kNone;
  std::size_t last_improvement = 0;
  auto observe = [&](const std::vector<Chromosome>& pop, std::size_t generation) {
    bool improved = false;
    for (const Chromosome& c : pop) {
      if (c.valid() && c.fitness < best_valid.fitness) {
        best_valid = c;
        improved = true;
      }
      if (c.fitness < best_any) {
        best_any = c.fitness;
        // Before any valid chromosome exists, progress is measured on the
        // penalized fitness.
        if (best_valid.fitness == kNone) improved = true;
      }
    }
    if (improved) last_improvement = generation;
  };
  observe(population, 0);

  const auto window = static_cast<std::size_t>(
      std::ceil(params.no_improvement_window_fraction * static_cast<double>(params.max_generations)));

  auto tournament = [&]() -> const Chromosome& {
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    const Chromosome* winner = &population[pick(rng)];
    for (std::size_t i = 1; i < params.tournament_size; ++i) {
      const Chromosome& c = population[pick(rng)];
      if (c.fitness < winner->fitness) winner = &c;
    }
    return *winner;
  };

  std::vector<std::size_t> rank(population.size());
  std::size_t generation = 0;
  while (generation < params.max_generations) {
    ++generation;
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      return population[a].fitness < population[b].fitness;
    });
    std::vector<Chromosome> next;
    next.reserve(population.size());
    for (std::size_t i = 0; i < params.elite_count; ++i) next.push_back(population[rank[i]]);

    while (next.size() < population.size()) {
      Chromosome a = tournament();
      Chromosome b = tournament();
      if (n > 1 && unit(rng) < params.crossover_rate) {
        std::uniform_int_distribution<std::size_t> cut(1, n - 1);
        const std::size_t point = cut(rng);
        std::swap_ranges(a.genes.begin() + static_cast<std::ptrdiff_t>(point), a.genes.end(),
                         b.genes.begin() + static_cast<std::ptrdiff_t>(point));
      }
      for (Chromosome* child : {&a, &b}) {
        for (ResourceId& g : child->genes) {
          if (unit(rng) < params.mutation_rate) g = any_resource(rng);
        }
        eval.score(*child);
        fitness(*child);
        ++result.diagnostics.evaluations;
      }
      next.push_back(std::move(a));
      if (next.size() < population.size()) next.push_back(std::move(b));
    }
    population = std::move(next);
    observe(population, generation);
    result.diagnostics.best_valid_history.push_back(best_valid.fitness);
    if (window > 0 && generation - last_improvement >= window) break;
  }
  result.diagnostics.generations = generation;

  if (best_valid.fitness == kNone) {
    result.diagnostics.reason =
        fmt::format("no valid chromosome after {} generations", generation);
  } else {
    result.accepted = true;
    std::size_t offset = 0;
    for (const RatedDataflow* dag : problem.dags) {
      std::vector<ResourceId> genes(best_valid.genes.begin() + static_cast<std::ptrdiff_t>(offset),
                                    best_valid.genes.begin() +
                                        static_cast<std::ptrdiff_t>(offset + dag->vertex_count()));
      result.mappings.emplace_back(dag->id(), std::move(genes));
      offset += dag->vertex_count();
    }
  }
  result.planning_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ScheduleResult ga_incremental(const PlacementState& state, const ResourcePool& pool,
                              const RatedDataflow& dag, const GaParams& params) {
  const auto started = std::chrono::steady_clock::now();
  if (state.contains(dag.id())) {
    throw Error(ErrorCode::kConfig, fmt::format("dataflow '{}' is already placed", dag.id()));
  }
  const LoadIndex residual = LoadIndex::from_state(state, pool);
  GaProblem problem{{&dag}, &residual};
  ScheduleResult result = ga_place(problem, pool, params);
  result.planning_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ScheduleResult ga_global(const PlacementState& state, const ResourcePool& pool,
                         const GaParams& params) {
  const auto started = std::chrono::steady_clock::now();
  if (state.empty()) throw Error(ErrorCode::kDomain, "GA-Global needs an active dataflow");
  const GlobalDag global = build_global_dag(state);
  GaProblem problem{global.components, nullptr};
  ScheduleResult result = ga_place(problem, pool, params);
  result.planning_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace edgesched
