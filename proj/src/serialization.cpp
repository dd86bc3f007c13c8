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

#include "edgesched/serialization.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "edgesched/error.hpp"

namespace edgesched {

namespace {

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Json profile_json(const QueryProfile& p) {
  return Json{{"latency_sec", p.latency_sec}, {"energy_mah", p.energy_mah}};
}

QueryProfile profile_from(const Json& j) {
  QueryProfile p;
  read_opt(j, "latency_sec", p.latency_sec);
  read_opt(j, "energy_mah", p.energy_mah);
  return p;
}

Json link_json(const LinkDistribution& d) {
  return Json{{"latency_mean_sec", d.latency_mean_sec},
              {"latency_stddev_sec", d.latency_stddev_sec},
              {"bandwidth_mean_bytes_per_sec", d.bandwidth_mean_bytes_per_sec},
              {"bandwidth_stddev_bytes_per_sec", d.bandwidth_stddev_bytes_per_sec}};
}

void link_from(const Json& j, LinkDistribution& d) {
  read_opt(j, "latency_mean_sec", d.latency_mean_sec);
  read_opt(j, "latency_stddev_sec", d.latency_stddev_sec);
  read_opt(j, "bandwidth_mean_bytes_per_sec", d.bandwidth_mean_bytes_per_sec);
  read_opt(j, "bandwidth_stddev_bytes_per_sec", d.bandwidth_stddev_bytes_per_sec);
}

template <typename Enum, typename Parse>
Enum parse_enum(const Json& j, const char* what, Parse parse) {
  const auto name = j.get<std::string>();
  const auto value = parse(name);
  if (!value) throw Error(ErrorCode::kConfig, fmt::format("unknown {} '{}'", what, name));
  return *value;
}

Json activity_json(const Activity& a) {
  Json j{{"kind", std::string(to_string(a.kind))}};
  if (a.kind != ActivityKind::kNone) {
    j["pool_index"] = a.pool_index;
    j["instance"] = a.instance;
  }
  return j;
}

Activity activity_from(const Json& j) {
  Activity a;
  a.kind = parse_enum<ActivityKind>(j.at("kind"), "activity", parse_activity_kind);
  read_opt(j, "pool_index", a.pool_index);
  read_opt(j, "instance", a.instance);
  return a;
}

Json summary_json(const MetricSummary& s) {
  return Json{{"mean", s.mean}, {"median", s.median}, {"p99", s.p99}, {"max", s.max}};
}

MetricSummary summary_from(const Json& j) {
  MetricSummary s;
  read_opt(j, "mean", s.mean);
  read_opt(j, "median", s.median);
  read_opt(j, "p99", s.p99);
  read_opt(j, "max", s.max);
  return s;
}

// Shortest text that reads back to the same double.
std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

Json to_json(const ProfileCatalog& catalog) {
  Json types = Json::array();
  for (const auto& [id, e] : catalog.entries()) {
    types.push_back(Json{{"id", e.type.id},
                         {"kind", std::string(to_string(e.type.kind))},
                         {"selectivity", e.type.selectivity},
                         {"event_size_bytes", e.type.event_size_bytes},
                         {"edge", profile_json(e.edge)},
                         {"cloud", profile_json(e.cloud)}});
  }
  return Json{{"parallelism",
               Json{{"overhead", catalog.parallelism().entries()},
                    {"sign", catalog.parallelism().sign()}}},
              {"types", types}};
}

ProfileCatalog catalog_from_json(const Json& j) {
  ProfileCatalog catalog;
  if (j.contains("parallelism")) {
    const Json& p = j.at("parallelism");
    catalog.set_parallelism(ParallelismTable(p.at("overhead").get<std::vector<double>>(),
                                             p.value("sign", 1.0)));
  }
  for (const Json& t : j.at("types")) {
    QueryType type;
    type.id = t.at("id").get<std::string>();
    type.kind = parse_enum<QueryKind>(t.at("kind"), "query kind", parse_query_kind);
    read_opt(t, "selectivity", type.selectivity);
    read_opt(t, "event_size_bytes", type.event_size_bytes);
    catalog.add(std::move(type), profile_from(t.at("edge")), profile_from(t.at("cloud")));
  }
  return catalog;
}

Json to_json(const PoolConfig& config) {
  return Json{{"preset", config.name},
              {"edge_count", config.edge_count},
              {"cloud_count", config.cloud_count},
              {"energy",
               Json{{"battery_capacity_mah", config.energy.battery_capacity_mah},
                    {"base_load_ma", config.energy.base_load_ma},
                    {"recharge_interval_sec", config.energy.recharge_interval_sec}}},
              {"network",
               Json{{"edge_edge", link_json(config.network.edge_edge)},
                    {"edge_cloud", link_json(config.network.edge_cloud)},
                    {"cloud_cloud", link_json(config.network.cloud_cloud)},
                    {"symmetric", config.network.symmetric}}},
              {"catalog", to_json(config.catalog)}};
}

PoolConfig pool_config_from_json(const Json& j) {
  PoolConfig c = PoolConfig::preset(j.value("preset", std::string("small")));
  read_opt(j, "edge_count", c.edge_count);
  read_opt(j, "cloud_count", c.cloud_count);
  if (j.contains("energy")) {
    const Json& e = j.at("energy");
    read_opt(e, "battery_capacity_mah", c.energy.battery_capacity_mah);
    read_opt(e, "base_load_ma", c.energy.base_load_ma);
    read_opt(e, "recharge_interval_sec", c.energy.recharge_interval_sec);
  }
  if (j.contains("network")) {
    const Json& n = j.at("network");
    if (n.contains("edge_edge")) link_from(n.at("edge_edge"), c.network.edge_edge);
    if (n.contains("edge_cloud")) link_from(n.at("edge_cloud"), c.network.edge_cloud);
    if (n.contains("cloud_cloud")) link_from(n.at("cloud_cloud"), c.network.cloud_cloud);
    read_opt(n, "symmetric", c.network.symmetric);
  }
  if (j.contains("catalog")) c.catalog = catalog_from_json(j.at("catalog"));
  return c;
}

Json to_json(const DataflowSpec& spec) {
  Json edges = Json::array();
  for (const auto& [u, v] : spec.edges) edges.push_back(Json::array({u, v}));
  return Json{{"id", spec.id},
              {"input_rate", spec.input_rate},
              {"vertices", spec.vertex_types},
              {"edges", edges}};
}

DataflowSpec dataflow_from_json(const Json& j) {
  DataflowSpec spec;
  spec.id = j.at("id").get<std::string>();
  read_opt(j, "input_rate", spec.input_rate);
  spec.vertex_types = j.at("vertices").get<std::vector<std::string>>();
  for (const Json& e : j.at("edges")) {
    spec.edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
  }
  return spec;
}

Json to_json(const DagPool& pool) {
  Json list = Json::array();
  for (const auto& spec : pool.dataflows) list.push_back(to_json(spec));
  return Json{{"format", "edgesched.dag-pool"}, {"dataflows", list}};
}

DagPool dag_pool_from_json(const Json& j) {
  DagPool pool;
  for (const Json& d : j.at("dataflows")) pool.dataflows.push_back(dataflow_from_json(d));
  return pool;
}

Json to_json(const WorkloadScript& script) {
  const WorkloadConfig& c = script.config;
  Json intervals = Json::array();
  for (const Activity& a : script.intervals) intervals.push_back(activity_json(a));
  return Json{{"format", "edgesched.workload"},
              {"seed", script.seed},
              {"config",
               Json{{"model", std::string(to_string(c.model))},
                    {"horizon", c.horizon},
                    {"resource_count", c.resource_count},
                    {"target_utilization", c.target_utilization},
                    {"band", c.band},
                    {"warmup", c.warmup},
                    {"poisson_mean", c.poisson_mean},
                    {"removal_attempts", c.removal_attempts}}},
              {"intervals", intervals}};
}

WorkloadScript workload_from_json(const Json& j) {
  WorkloadScript script;
  read_opt(j, "seed", script.seed);
  if (j.contains("config")) {
    const Json& c = j.at("config");
    WorkloadConfig& w = script.config;
    if (c.contains("model")) {
      w.model = parse_enum<WorkloadModel>(c.at("model"), "workload model", parse_workload_model);
    }
    read_opt(c, "horizon", w.horizon);
    read_opt(c, "resource_count", w.resource_count);
    read_opt(c, "target_utilization", w.target_utilization);
    read_opt(c, "band", w.band);
    read_opt(c, "warmup", w.warmup);
    read_opt(c, "poisson_mean", w.poisson_mean);
    read_opt(c, "removal_attempts", w.removal_attempts);
  }
  for (const Json& a : j.at("intervals")) script.intervals.push_back(activity_from(a));
  if (script.intervals.size() != script.config.horizon) {
    throw Error(ErrorCode::kConfig,
                fmt::format("workload has {} intervals but horizon {}", script.intervals.size(),
                            script.config.horizon));
  }
  return script;
}

Json to_json(const GaParams& p) {
  return Json{{"population_size", p.population_size},
              {"max_generations", p.max_generations},
              {"crossover_rate", p.crossover_rate},
              {"mutation_rate", p.mutation_rate},
              {"elite_count", p.elite_count},
              {"tournament_size", p.tournament_size},
              {"no_improvement_window_fraction", p.no_improvement_window_fraction},
              {"penalty_weight", p.penalty_weight},
              {"seed", p.seed}};
}

GaParams ga_params_from_json(const Json& j, GaParams p) {
  read_opt(j, "population_size", p.population_size);
  read_opt(j, "max_generations", p.max_generations);
  read_opt(j, "crossover_rate", p.crossover_rate);
  read_opt(j, "mutation_rate", p.mutation_rate);
  read_opt(j, "elite_count", p.elite_count);
  read_opt(j, "tournament_size", p.tournament_size);
  read_opt(j, "no_improvement_window_fraction", p.no_improvement_window_fraction);
  read_opt(j, "penalty_weight", p.penalty_weight);
  read_opt(j, "seed", p.seed);
  return p;
}

Json to_json(const ScenarioConfig& c) {
  return Json{{"pool", to_json(c.pool)},
              {"seed", c.seed},
              {"strategy", std::string(to_string(c.strategy))},
              {"rebalance", std::string(to_string(c.rebalance))},
              {"migration_cost_sec", c.migration_cost_sec},
              {"psi_max_sec", c.psi_max_sec},
              {"control_interval_sec", c.control_interval_sec},
              {"ga", to_json(c.ga)}};
}

ScenarioConfig scenario_from_json(const Json& j, ScenarioConfig c) {
  if (j.contains("pool")) c.pool = pool_config_from_json(j.at("pool"));
  read_opt(j, "seed", c.seed);
  if (j.contains("strategy")) {
    c.strategy = parse_enum<Strategy>(j.at("strategy"), "strategy", parse_strategy);
  }
  if (j.contains("rebalance")) {
    c.rebalance =
        parse_enum<RebalanceMode>(j.at("rebalance"), "rebalance mode", parse_rebalance_mode);
  }
  read_opt(j, "migration_cost_sec", c.migration_cost_sec);
  read_opt(j, "psi_max_sec", c.psi_max_sec);
  read_opt(j, "control_interval_sec", c.control_interval_sec);
  if (j.contains("ga")) c.ga = ga_params_from_json(j.at("ga"), c.ga);
  return c;
}

Json to_json(const ConstraintReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(Json{{"constraint", static_cast<int>(v.constraint)},
                              {"dataflow", v.dataflow_id},
                              {"vertex", v.vertex},
                              {"resource", v.resource},
                              {"detail", v.detail}});
  }
  return Json{{"ok", report.ok()},
              {"placement_class_ok", report.c1_ok},
              {"compute_capacity_ok", report.c2_ok},
              {"energy_ok", report.c3_ok},
              {"violations", violations}};
}

Json to_json(const PlacementState& state) {
  Json list = Json::array();
  for (const auto& [id, active] : state.dataflows()) {
    list.push_back(Json{{"spec", to_json(active.dag->spec())},
                        {"mapping", active.mapping.assignments}});
  }
  return Json{{"dataflows", list}};
}

PlacementState state_from_json(const Json& j, const ProfileCatalog& catalog) {
  PlacementState state;
  for (const Json& d : j.at("dataflows")) {
    auto dag = std::make_shared<const RatedDataflow>(
        propagate_rates(dataflow_from_json(d.at("spec")), catalog));
    Mapping m(dag->id(), d.at("mapping").get<std::vector<ResourceId>>());
    state.add(std::move(dag), std::move(m));
  }
  return state;
}

Json to_json(const SimTrace& trace, const ScenarioConfig& config) {
  const Provenance& p = trace.provenance;
  Json records = Json::array();
  for (const IntervalRecord& r : trace.records) {
    Json spans = Json::object();
    for (const auto& [id, span] : r.per_dag_makespans) spans[id] = span;
    records.push_back(Json{{"t", r.t},
                           {"activity", activity_json(r.activity)},
                           {"accepted", r.accepted},
                           {"objective_sec", r.objective_sec},
                           {"planning_time_sec", r.planning_time_sec},
                           {"migrations", r.migrations},
                           {"stabilization_sec", r.stabilization_sec},
                           {"utilization", r.utilization},
                           {"rebalanced", r.rebalanced},
                           {"rebalance_moves", r.rebalance_moves},
                           {"objective_before_rebalance_sec", r.objective_before_rebalance},
                           {"active_dataflows", r.active_dataflows},
                           {"per_dag_makespans", spans},
                           {"warnings", r.warnings}});
  }
  const TraceSummary& s = trace.summary;
  return Json{{"format", "edgesched.trace"},
              {"provenance",
               Json{{"seed", p.seed},
                    {"strategy", p.strategy},
                    {"rebalance", p.rebalance},
                    {"config_hash", p.config_hash},
                    {"pool_hash", p.pool_hash},
                    {"workload_hash", p.workload_hash}}},
              {"config", to_json(config)},
              {"summary",
               Json{{"objective_sec", summary_json(s.objective)},
                    {"planning_time_sec", summary_json(s.planning_time)},
                    {"migrations", summary_json(s.migrations)},
                    {"stabilization_sec", summary_json(s.stabilization)},
                    {"utilization", summary_json(s.utilization)},
                    {"arrivals", s.arrivals},
                    {"rejected", s.rejected}}},
              {"records", records},
              {"final_state", to_json(trace.final_state)}};
}

SimTrace trace_from_json(const Json& j) {
  SimTrace trace;
  const Json& p = j.at("provenance");
  trace.provenance.seed = p.at("seed").get<std::uint64_t>();
  trace.provenance.strategy = p.at("strategy").get<std::string>();
  trace.provenance.rebalance = p.at("rebalance").get<std::string>();
  trace.provenance.config_hash = p.at("config_hash").get<std::string>();
  trace.provenance.pool_hash = p.at("pool_hash").get<std::string>();
  trace.provenance.workload_hash = p.at("workload_hash").get<std::string>();

  for (const Json& r : j.at("records")) {
    IntervalRecord rec;
    rec.t = r.at("t").get<std::size_t>();
    rec.activity = activity_from(r.at("activity"));
    read_opt(r, "accepted", rec.accepted);
    read_opt(r, "objective_sec", rec.objective_sec);
    read_opt(r, "planning_time_sec", rec.planning_time_sec);
    read_opt(r, "migrations", rec.migrations);
    read_opt(r, "stabilization_sec", rec.stabilization_sec);
    read_opt(r, "utilization", rec.utilization);
    read_opt(r, "rebalanced", rec.rebalanced);
    read_opt(r, "rebalance_moves", rec.rebalance_moves);
    read_opt(r, "objective_before_rebalance_sec", rec.objective_before_rebalance);
    read_opt(r, "active_dataflows", rec.active_dataflows);
    read_opt(r, "warnings", rec.warnings);
    if (r.contains("per_dag_makespans")) {
      for (const auto& [id, span] : r.at("per_dag_makespans").items()) {
        rec.per_dag_makespans.emplace_back(id, span.get<double>());
      }
    }
    trace.records.push_back(std::move(rec));
  }

  if (j.contains("summary")) {
    const Json& s = j.at("summary");
    trace.summary.objective = summary_from(s.at("objective_sec"));
    trace.summary.planning_time = summary_from(s.at("planning_time_sec"));
    trace.summary.migrations = summary_from(s.at("migrations"));
    trace.summary.stabilization = summary_from(s.at("stabilization_sec"));
    trace.summary.utilization = summary_from(s.at("utilization"));
    read_opt(s, "arrivals", trace.summary.arrivals);
    read_opt(s, "rejected", trace.summary.rejected);
  }
  if (j.contains("final_state")) {
    const ScenarioConfig config = scenario_from_json(j.value("config", Json::object()));
    trace.final_state = state_from_json(j.at("final_state"), config.pool.catalog);
  }
  return trace;
}

std::string trace_csv(const SimTrace& trace) {
  const Provenance& p = trace.provenance;
  std::ostringstream out;
  out << fmt::format("# seed={} strategy={} rebalance={} config_hash={} pool_hash={} "
                     "workload_hash={}\n",
                     p.seed, p.strategy, p.rebalance, p.config_hash, p.pool_hash,
                     p.workload_hash);
  out << "t,activity,accepted,objective_s,planning_s,migrations,stabilization_s,utilization\n";
  for (const IntervalRecord& r : trace.records) {
    out << fmt::format("{},{},{},{},{:.6f},{},{},{}\n", r.t, to_string(r.activity.kind),
                       r.accepted ? 1 : 0, num(r.objective_sec), r.planning_time_sec,
                       r.migrations, num(r.stabilization_sec), num(r.utilization));
  }
  return out.str();
}

std::string comparison_csv(const RunComparison& cmp, const Provenance& a, const Provenance& b) {
  std::ostringstream out;
  out << fmt::format("# seed={} strategy={} a.rebalance={} a.config_hash={} b.rebalance={} "
                     "b.config_hash={}\n",
                     a.seed, a.strategy, a.rebalance, a.config_hash, b.rebalance, b.config_hash);
  out << "t,objective_a_s,objective_b_s,delta_s,relative\n";
  for (const auto& row : cmp.rows) {
    out << fmt::format("{},{},{},{},{}\n", row.t, num(row.objective_a), num(row.objective_b),
                       num(row.delta_sec), num(row.relative));
  }
  return out.str();
}

std::string content_hash(const Json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfig, fmt::format("'{}' is not valid JSON: {}", path.string(),
                                                e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::kIo, fmt::format("failed writing '{}'", path.string()));
}

}  // namespace edgesched
