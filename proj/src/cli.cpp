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

#include "edgesched/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>
#include <optional>

#include "edgesched/error.hpp"
#include "edgesched/log.hpp"
#include "edgesched/serialization.hpp"
#include "edgesched/simulator.hpp"

namespace edgesched {

namespace {

struct PoolOptions {
  std::string preset = "small";
  std::size_t count = 39;
  std::uint64_t seed = 1;
  std::string out = "pool.json";
};

struct WorkloadOptions {
  std::string pool_path;
  std::string preset = "small";
  std::string model = "rw";
  std::optional<double> target;
  std::optional<double> band;
  std::optional<std::size_t> horizon;
  std::uint64_t seed = 1;
  std::string out = "workload.json";
};

struct RunOptions {
  std::string config_path;
  std::string preset = "small";
  std::string pool_path;
  std::string workload_path;
  std::string model = "rw";
  std::string strategy;
  std::string rebalance;
  std::optional<double> eta;
  std::optional<std::size_t> ga_population;
  std::optional<std::size_t> ga_generations;
  std::optional<std::uint64_t> seed;
  std::string out = "trace";
};

struct CompareOptions {
  std::string a;
  std::string b;
  std::string out = "compare.csv";
};

struct ValidateOptions {
  std::string trace;
};

Json generator_json(const DagPoolConfig& c) {
  return Json{{"count", c.count},
              {"min_vertices", c.min_vertices},
              {"max_vertices", c.max_vertices},
              {"max_fan_out", c.max_fan_out},
              {"max_sources", c.max_sources},
              {"max_sinks", c.max_sinks},
              {"input_rate", c.input_rate},
              {"extra_edge_probability", c.extra_edge_probability},
              {"max_layer_fraction", c.max_layer_fraction}};
}

// Pool file: the dataflows plus everything needed to regenerate them.
Json pool_document(const DagPool& dags, const DagPoolConfig& gen, const PoolConfig& resources,
                   std::uint64_t seed) {
  Json config{{"generator", generator_json(gen)}, {"resources", to_json(resources)}};
  Json doc = to_json(dags);
  doc["seed"] = seed;
  doc["config_hash"] = content_hash(config);
  doc["config"] = config;
  return doc;
}

Json workload_document(const WorkloadScript& script, const DagPool& dags) {
  Json doc = to_json(script);
  doc["config_hash"] = content_hash(doc["config"]);
  doc["pool_hash"] = content_hash(to_json(dags));
  return doc;
}

WorkloadModel model_of(const std::string& name) {
  const auto m = parse_workload_model(name);
  if (!m) throw Error(ErrorCode::kConfig, fmt::format("unknown workload model '{}'", name));
  return *m;
}

int gen_pool(const PoolOptions& o) {
  const PoolConfig resources = PoolConfig::preset(o.preset);
  DagPoolConfig gen;
  gen.count = o.count;
  const auto pool = build_pool(resources, o.seed);
  const DagPool dags = generate_pool(gen, o.seed, *pool);
  write_text_file(o.out, pool_document(dags, gen, resources, o.seed).dump(2) + "\n");
  std::cout << fmt::format("wrote {} dataflows to {}\n", dags.dataflows.size(), o.out);
  return kExitOk;
}

int gen_workload(const WorkloadOptions& o) {
  const DagPool dags = dag_pool_from_json(read_json_file(o.pool_path));
  WorkloadConfig config = WorkloadConfig::preset(o.preset, model_of(o.model));
  if (o.target) config.target_utilization = *o.target;
  if (o.band) config.band = *o.band;
  if (o.horizon) config.horizon = *o.horizon;
  const WorkloadScript script = generate_workload(dags, config, o.seed);
  write_text_file(o.out, workload_document(script, dags).dump(2) + "\n");
  std::cout << fmt::format("wrote {} intervals to {}\n", script.intervals.size(), o.out);
  return kExitOk;
}

int run(const RunOptions& o) {
  ScenarioConfig config;
  config.pool = PoolConfig::preset(o.preset);
  if (!o.config_path.empty()) config = scenario_from_json(read_json_file(o.config_path), config);
  if (o.seed) config.seed = *o.seed;
  if (!o.strategy.empty()) {
    const auto s = parse_strategy(o.strategy);
    if (!s) throw Error(ErrorCode::kConfig, fmt::format("unknown strategy '{}'", o.strategy));
    config.strategy = *s;
  }
  if (!o.rebalance.empty()) {
    const auto r = parse_rebalance_mode(o.rebalance);
    if (!r) throw Error(ErrorCode::kConfig, fmt::format("unknown rebalance '{}'", o.rebalance));
    config.rebalance = *r;
  }
  if (o.eta) config.migration_cost_sec = *o.eta;
  if (o.ga_population) config.ga.population_size = *o.ga_population;
  if (o.ga_generations) config.ga.max_generations = *o.ga_generations;
  config.validate();

  const auto pool = build_pool(config.pool, config.seed);
  DagPool dags;
  if (o.pool_path.empty()) {
    dags = generate_pool(DagPoolConfig{}, config.seed, *pool);
  } else {
    dags = dag_pool_from_json(read_json_file(o.pool_path));
  }
  WorkloadScript script;
  if (o.workload_path.empty()) {
    WorkloadConfig wc = WorkloadConfig::preset(o.preset, model_of(o.model));
    wc.resource_count = pool->size();
    script = generate_workload(dags, wc, config.seed);
  } else {
    script = workload_from_json(read_json_file(o.workload_path));
  }

  const SimTrace trace = run_scenario(config, pool, dags, script);
  write_text_file(o.out + ".csv", trace_csv(trace));
  write_text_file(o.out + ".json", to_json(trace, config).dump(2) + "\n");
  const TraceSummary& s = trace.summary;
  std::cout << fmt::format(
      "{} intervals, {} arrivals ({} rejected), mean objective {:.4f} s, p99 planning {:.4f} s, "
      "mean migrations {:.3f}\n",
      trace.records.size(), s.arrivals, s.rejected, s.objective.mean, s.planning_time.p99,
      s.migrations.mean);
  return kExitOk;
}

int compare(const CompareOptions& o) {
  const SimTrace a = trace_from_json(read_json_file(o.a));
  const SimTrace b = trace_from_json(read_json_file(o.b));
  const RunComparison cmp = compare_runs(a, b);
  write_text_file(o.out, comparison_csv(cmp, a.provenance, b.provenance));
  std::cout << fmt::format("max relative reduction {:.4f}, mean {:.4f}\n", cmp.max_relative,
                           cmp.mean_relative);
  return kExitOk;
}

int validate(const ValidateOptions& o) {
  const Json doc = read_json_file(o.trace);
  const ScenarioConfig config = scenario_from_json(doc.at("config"));
  const auto pool = build_pool(config.pool, config.seed);
  const PlacementState state = state_from_json(doc.at("final_state"), config.pool.catalog);
  const ConstraintReport report = validate_state(state, *pool);
  std::cout << to_json(report).dump(2) << "\n";
  return report.ok() ? kExitOk : kExitViolation;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::kInvariant ? kExitInvariant : kExitUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  init_logging();
  CLI::App app{"Edge and cloud placement of event analytic dataflows"};
  app.require_subcommand(1);

  PoolOptions pool_opts;
  auto* gp = app.add_subcommand("gen-pool", "Generate a dataflow pool");
  gp->add_option("--preset", pool_opts.preset, "Reference resource preset")
      ->check(CLI::IsMember({"small", "large"}));
  gp->add_option("--count", pool_opts.count, "Number of dataflows");
  gp->add_option("--seed", pool_opts.seed, "Random seed");
  gp->add_option("-o,--out", pool_opts.out, "Output file");

  WorkloadOptions wl;
  auto* gw = app.add_subcommand("gen-workload", "Generate an arrival/departure script");
  gw->add_option("--pool", wl.pool_path, "Dataflow pool file")->required();
  gw->add_option("--preset", wl.preset, "Setup preset")->check(CLI::IsMember({"small", "large"}));
  gw->add_option("--model", wl.model, "Workload model")->check(CLI::IsMember({"rw", "poisson"}));
  gw->add_option("--U", wl.target, "Target utilization");
  gw->add_option("--u", wl.band, "Utilization band");
  gw->add_option("--horizon", wl.horizon, "Number of control intervals");
  gw->add_option("--seed", wl.seed, "Random seed");
  gw->add_option("-o,--out", wl.out, "Output file");

  RunOptions ro;
  auto* rn = app.add_subcommand("run", "Run a scenario and write its trace");
  rn->add_option("--config", ro.config_path, "Scenario config file");
  rn->add_option("--preset", ro.preset, "Setup preset")->check(CLI::IsMember({"small", "large"}));
  rn->add_option("--pool", ro.pool_path, "Dataflow pool file");
  rn->add_option("--workload", ro.workload_path, "Workload script file");
  rn->add_option("--model", ro.model, "Workload model when no script is given")
      ->check(CLI::IsMember({"rw", "poisson"}));
  rn->add_option("--strategy", ro.strategy, "topset, topset-p, gai, gag or brute");
  rn->add_option("--rebalance", ro.rebalance, "none, vertex, edge or vertex+edge");
  rn->add_option("--eta", ro.eta, "Migration cost in seconds");
  rn->add_option("--ga-population", ro.ga_population, "GA population size");
  rn->add_option("--ga-generations", ro.ga_generations, "GA generation limit");
  rn->add_option("--seed", ro.seed, "Random seed");
  rn->add_option("-o,--out", ro.out, "Output prefix for .csv and .json");

  CompareOptions co;
  auto* cp = app.add_subcommand("compare", "Per-interval objective deltas of two traces");
  cp->add_option("a", co.a, "Baseline trace")->required();
  cp->add_option("b", co.b, "Compared trace")->required();
  cp->add_option("-o,--out", co.out, "Output CSV");
  std::uint64_t unused_seed = 0;
  cp->add_option("--seed", unused_seed, "Accepted for uniformity; traces carry their seed");

  ValidateOptions vo;
  auto* vd = app.add_subcommand("validate", "Re-check the final state of a trace");
  vd->add_option("trace", vo.trace, "Trace JSON file")->required();
  vd->add_option("--seed", unused_seed, "Accepted for uniformity; traces carry their seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gp) return gen_pool(pool_opts);
    if (*gw) return gen_workload(wl);
    if (*rn) return run(ro);
    if (*cp) return compare(co);
    if (*vd) return validate(vo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace edgesched
