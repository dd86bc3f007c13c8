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

#include "edgesched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <numeric>
#include <set>

#include "edgesched/error.hpp"
#include "edgesched/schedulers.hpp"

namespace edgesched {

void DagPoolConfig::validate() const {
  if (count < 1) throw Error(ErrorCode::kConfig, "dag pool count must be at least 1");
  if (min_vertices < 4 || max_vertices < min_vertices) {
    throw Error(ErrorCode::kConfig,
                fmt::format("bad dataflow size range [{}, {}]", min_vertices, max_vertices));
  }
  if (max_fan_out < 1 || max_sources < 1 || max_sinks < 1) {
    throw Error(ErrorCode::kConfig, "fan-out, source and sink limits must be positive");
  }
  if (!(input_rate > 0.0)) throw Error(ErrorCode::kConfig, "input rate must be positive");
  if (extra_edge_probability < 0.0 || extra_edge_probability > 1.0) {
    throw Error(ErrorCode::kConfig, "extra edge probability must lie in [0, 1]");
  }
  if (!(max_layer_fraction > 0.0) || max_layer_fraction > 1.0) {
    throw Error(ErrorCode::kConfig, "max layer fraction must lie in (0, 1]");
  }
  if (max_attempts < 1) throw Error(ErrorCode::kConfig, "max attempts must be at least 1");
}

std::map<std::size_t, std::vector<std::size_t>> DagPool::size_index() const {
  std::map<std::size_t, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < dataflows.size(); ++i) {
    index[dataflows[i].vertex_types.size()].push_back(i);
  }
  return index;
}

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Log-uniform in [lo, hi], rounded.
std::size_t sample_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  std::uniform_real_distribution<double> u(std::log(static_cast<double>(lo)),
                                           std::log(static_cast<double>(hi) + 1.0));
  const auto n = static_cast<std::size_t>(std::exp(u(rng)));
  return std::clamp(n, lo, hi);
}

// One layered candidate with n vertices: sources, interior layers, sinks.
// Returns nullopt when the fan-out limit leaves no way to wire it.
std::optional<DataflowSpec> layered_candidate(const DagPoolConfig& config,
                                              const ProfileCatalog& catalog, std::size_t n,
                                              std::mt19937_64& rng) {
  const std::size_t n_src = 1 + uniform_index(rng, std::min(config.max_sources, n - 2));
  const std::size_t n_sink = 1 + uniform_index(rng, std::min(config.max_sinks, n - n_src - 1));
  const std::size_t n_mid = n - n_src - n_sink;

  std::vector<std::size_t> layer(n, 0);
  std::size_t depth = 1;
  {
    const auto widest = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(config.max_layer_fraction * n_mid)));
    std::size_t placed = 0;
    while (placed < n_mid) {
      const std::size_t width = std::min(1 + uniform_index(rng, widest), n_mid - placed);
      for (std::size_t k = 0; k < width; ++k) layer[n_src + placed + k] = depth;
      placed += width;
      ++depth;
    }
  }
  for (std::size_t v = n_src + n_mid; v < n; ++v) layer[v] = depth;

  std::vector<std::size_t> fan_out(n, 0);
  std::set<Edge> edges;
  auto connect = [&](VertexId u, VertexId w) {
    if (edges.count({u, w}) || fan_out[u] >= config.max_fan_out) return false;
    edges.insert({u, w});
    ++fan_out[u];
    return true;
  };
  auto pick_parent = [&](std::size_t child_layer, bool previous_only) -> std::optional<VertexId> {
    std::vector<VertexId> open;
    for (VertexId u = 0; u < n_src + n_mid; ++u) {
      const bool in_range = previous_only ? layer[u] + 1 == child_layer : layer[u] < child_layer;
      if (in_range && fan_out[u] < config.max_fan_out) open.push_back(u);
    }
    if (open.empty()) return std::nullopt;
    return open[uniform_index(rng, open.size())];
  };

  // Every interior vertex hangs off something one layer up.
  for (VertexId v = n_src; v < n_src + n_mid; ++v) {
    auto parent = pick_parent(layer[v], true);
    if (!parent) parent = pick_parent(layer[v], false);
    if (!parent) return std::nullopt;
    connect(*parent, v);
  }
  // Sources without children feed a first-layer vertex.
  for (VertexId s = 0; s < n_src; ++s) {
    if (fan_out[s] > 0) continue;
    VertexId target = n_src + static_cast<VertexId>(uniform_index(rng, n_mid));
    for (VertexId v = n_src; v < n_src + n_mid; ++v) {
      if (layer[v] == 1 && uniform_index(rng, 2) == 0) {
        target = v;
        break;
      }
    }
    connect(s, target);
  }
  // Extra forward edges between interior vertices and toward sinks.
  for (VertexId u = n_src; u < n_src + n_mid; ++u) {
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= config.extra_edge_probability) {
      continue;
    }
    std::vector<VertexId> later;
    for (VertexId w = u + 1; w < n; ++w) {
      if (layer[w] > layer[u]) later.push_back(w);
    }
    if (!later.empty()) connect(u, later[uniform_index(rng, later.size())]);
  }
  // Interior leaves drain into a sink.
  for (VertexId u = n_src; u < n_src + n_mid; ++u) {
    if (fan_out[u] > 0) continue;
    connect(u, static_cast<VertexId>(n_src + n_mid + uniform_index(rng, n_sink)));
  }
  // Sinks without parents take one from the interior.
  for (VertexId k = static_cast<VertexId>(n_src + n_mid); k < n; ++k) {
    bool has_parent = false;
    for (const auto& e : edges) has_parent = has_parent || e.second == k;
    if (has_parent) continue;
    const auto parent = pick_parent(layer[k], false);
    if (!parent) return std::nullopt;
    connect(*parent, k);
  }

  const auto sources = catalog.type_ids_of_kind(QueryKind::kSource);
  const auto sinks = catalog.type_ids_of_kind(QueryKind::kSink);
  const auto cep = catalog.cep_type_ids();
  if (sources.empty() || sinks.empty() || cep.empty()) {
    throw Error(ErrorCode::kConfig, "catalog needs source, sink and query types");
  }

  DataflowSpec spec;
  spec.input_rate = config.input_rate;
  spec.vertex_types.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    if (v < n_src) {
      spec.vertex_types.push_back(sources[uniform_index(rng, sources.size())]);
    } else if (v < n_src + n_mid) {
      spec.vertex_types.push_back(cep[uniform_index(rng, cep.size())]);
    } else {
      spec.vertex_types.push_back(sinks[uniform_index(rng, sinks.size())]);
    }
  }
  spec.edges.assign(edges.begin(), edges.end());
  return spec;
}

}  // namespace

DagPool generate_pool(const DagPoolConfig& config, std::uint64_t seed, const ResourcePool& pool) {
  config.validate();
  std::mt19937_64 rng(seed);
  const PlacementState empty;
  DagPool out;
  for (std::size_t i = 0; i < config.count; ++i) {
    // The smallest and largest sizes are always represented.
    std::size_t n;
    if (i == 0) {
      n = config.min_vertices;
    } else if (i + 1 == config.count && config.count > 1) {
      n = config.max_vertices;
    } else {
      n = sample_size(rng, config.min_vertices, config.max_vertices);
    }
    bool done = false;
    for (std::size_t attempt = 0; attempt < config.max_attempts && !done; ++attempt) {
      auto spec = layered_candidate(config, pool.catalog(), n, rng);
      if (!spec) continue;
      spec->id = fmt::format("dag-{:03d}", i);
      validate_dataflow(*spec, pool.catalog());
      const RatedDataflow rated = propagate_rates(*spec, pool.catalog());
      if (!topset_place(empty, pool, rated, false).accepted) continue;
      out.dataflows.push_back(std::move(*spec));
      done = true;
    }
    if (!done) {
      throw Error(ErrorCode::kGeneration,
                  fmt::format("no feasible {}-vertex dataflow after {} attempts", n,
                              config.max_attempts));
    }
  }
  return out;
}

double utilization(const PlacementState& state, const ResourcePool& pool) {
  if (pool.size() == 0) return 0.0;
  return static_cast<double>(state.vertex_count()) / static_cast<double>(pool.size());
}

std::string_view to_string(ActivityKind kind) {
  switch (kind) {
    case ActivityKind::kNone: return "none";
    case ActivityKind::kArrive: return "arrive";
    case ActivityKind::kDepart: return "depart";
  }
  return "unknown";
}

std::optional<ActivityKind> parse_activity_kind(std::string_view name) {
  for (ActivityKind k : {ActivityKind::kNone, ActivityKind::kArrive, ActivityKind::kDepart}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string instance_id(const DagPool& pool, const Activity& activity) {
  if (activity.pool_index >= pool.dataflows.size()) {
    throw Error(ErrorCode::kNotFound,
                fmt::format("pool index {} out of range", activity.pool_index));
  }
  return fmt::format("{}@{}", pool.dataflows[activity.pool_index].id, activity.instance);
}

RwDecision next_activity_rw(double current_utilization, double target, double band,
                            RwPhase phase) {
  if (band < 0.0) throw Error(ErrorCode::kDomain, "band must be non-negative");
  if (phase == RwPhase::kAdding) {
    if (current_utilization < target + band) return {ActivityKind::kArrive, RwPhase::kAdding};
    return {ActivityKind::kDepart, RwPhase::kRemoving};
  }
  if (current_utilization > target - band) return {ActivityKind::kDepart, RwPhase::kRemoving};
  return {ActivityKind::kArrive, RwPhase::kAdding};
}

ActivityKind next_activity_poisson(std::size_t interval, std::size_t warmup) {
  if (interval < warmup) return ActivityKind::kArrive;
  return (interval - warmup) % 2 == 0 ? ActivityKind::kDepart : ActivityKind::kArrive;
}

namespace {

std::vector<std::size_t> distinct_sorted(std::vector<std::size_t> sizes) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.empty() || sizes.front() == 0) {
    throw Error(ErrorCode::kDomain, "size sampler needs positive sizes");
  }
  return sizes;
}

std::vector<double> inverse_weights(const std::vector<std::size_t>& sizes) {
  std::vector<double> w;
  for (std::size_t s : sizes) w.push_back(1.0 / static_cast<double>(s));
  return w;
}

}  // namespace

InverseSizeSampler::InverseSizeSampler(std::vector<std::size_t> sizes)
    : sizes_(distinct_sorted(std::move(sizes))) {
  const auto w = inverse_weights(sizes_);
  dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

std::size_t InverseSizeSampler::operator()(std::mt19937_64& rng) { return sizes_[dist_(rng)]; }

double InverseSizeSampler::probability(std::size_t size) const {
  const auto w = inverse_weights(sizes_);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const auto it = std::find(sizes_.begin(), sizes_.end(), size);
  return it == sizes_.end() ? 0.0 : 1.0 / static_cast<double>(size) / total;
}

TruncatedPoissonSampler::TruncatedPoissonSampler(double mean, std::size_t lo, std::size_t hi)
    : lo_(lo), hi_(hi) {
  if (!(mean > 0.0) || hi < lo) {
    throw Error(ErrorCode::kDomain, "truncated poisson needs mean > 0 and lo <= hi");
  }
  double total = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double kk = static_cast<double>(k);
    pmf_.push_back(std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0)));
    total += pmf_.back();
  }
  for (double& p : pmf_) p /= total;
  dist_ = std::discrete_distribution<std::size_t>(pmf_.begin(), pmf_.end());
}

std::size_t TruncatedPoissonSampler::operator()(std::mt19937_64& rng) { return lo_ + dist_(rng); }

double TruncatedPoissonSampler::probability(std::size_t size) const {
  if (size < lo_ || size > hi_) return 0.0;
  return pmf_[size - lo_];
}

std::string_view to_string(WorkloadModel model) {
  return model == WorkloadModel::kRandomWalk ? "rw" : "poisson";
}

std::optional<WorkloadModel> parse_workload_model(std::string_view name) {
  if (name == "rw") return WorkloadModel::kRandomWalk;
  if (name == "poisson") return WorkloadModel::kPoisson;
  return std::nullopt;
}

WorkloadConfig WorkloadConfig::preset(const std::string& name, WorkloadModel model) {
  WorkloadConfig c;
  c.model = model;
  if (name == "small") {
    c.horizon = 100;
    c.resource_count = 100;
    c.warmup = 16;
  } else if (name == "large") {
    c.horizon = 400;
    c.resource_count = 1000;
    c.warmup = 70;
  } else {
    throw Error(ErrorCode::kConfig, fmt::format("unknown workload preset '{}'", name));
  }
  return c;
}

void WorkloadConfig::validate() const {
  if (horizon < 1) throw Error(ErrorCode::kConfig, "horizon must be at least 1");
  if (resource_count < 1) throw Error(ErrorCode::kConfig, "resource count must be at least 1");
  if (band < 0.0) throw Error(ErrorCode::kConfig, "utilization band must be non-negative");
  if (!(target_utilization > 0.0)) {
    throw Error(ErrorCode::kConfig, "target utilization must be positive");
  }
  if (!(poisson_mean > 0.0)) throw Error(ErrorCode::kConfig, "poisson mean must be positive");
  if (removal_attempts < 1) throw Error(ErrorCode::kConfig, "removal attempts must be positive");
}

namespace {

struct Live {
  std::uint64_t instance;
  std::size_t pool_index;
  std::size_t size;
};

// Pool variant for a sampled size, falling back to the nearest available size.
std::size_t pick_variant(const std::map<std::size_t, std::vector<std::size_t>>& index,
                         std::size_t size, std::mt19937_64& rng) {
  auto it = index.lower_bound(size);
  if (it == index.end()) {
    it = std::prev(it);
  } else if (it->first != size && it != index.begin()) {
    const auto below = std::prev(it);
    if (size - below->first <= it->first - size) it = below;
  }
  return it->second[uniform_index(rng, it->second.size())];
}

// Live entry to remove: resample sizes until one matches, then nearest size.
std::size_t pick_departure(const std::vector<Live>& live, std::size_t attempts,
                           const std::function<std::size_t()>& sample, std::mt19937_64& rng) {
  std::size_t size = 0;
  for (std::size_t a = 0; a < attempts; ++a) {
    size = sample();
    std::vector<std::size_t> match;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (live[i].size == size) match.push_back(i);
    }
    if (!match.empty()) return match[uniform_index(rng, match.size())];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < live.size(); ++i) {
    const auto gap = [&](std::size_t j) {
      return live[j].size > size ? live[j].size - size : size - live[j].size;
    };
    if (gap(i) < gap(best)) best = i;
  }
  return best;
}

}  // namespace

WorkloadScript generate_workload(const DagPool& pool, const WorkloadConfig& config,
                                 std::uint64_t seed) {
  config.validate();
  if (pool.dataflows.empty()) throw Error(ErrorCode::kConfig, "dag pool is empty");
  std::mt19937_64 rng(seed);
  const auto index = pool.size_index();
  std::vector<std::size_t> sizes;
  for (const auto& [s, variants] : index) sizes.push_back(s);

  InverseSizeSampler inverse(sizes);
  TruncatedPoissonSampler poisson(config.poisson_mean, sizes.front(), sizes.back());
  const bool rw = config.model == WorkloadModel::kRandomWalk;
  const std::function<std::size_t()> sample = [&]() {
    return rw ? inverse(rng) : poisson(rng);
  };

  WorkloadScript script{config, seed, {}};
  std::vector<Live> live;
  std::size_t active_vertices = 0;
  std::uint64_t next_instance = 1;
  RwPhase phase = RwPhase::kAdding;

  for (std::size_t t = 0; t < config.horizon; ++t) {
    ActivityKind kind;
    if (rw) {
      const double u =
          static_cast<double>(active_vertices) / static_cast<double>(config.resource_count);
      const RwDecision d = next_activity_rw(u, config.target_utilization, config.band, phase);
      kind = d.kind;
      phase = d.phase;
    } else {
      kind = next_activity_poisson(t, config.warmup);
    }

    Activity act;
    if (kind == ActivityKind::kArrive) {
      const std::size_t idx = pick_variant(index, sample(), rng);
      act = Activity{ActivityKind::kArrive, idx, next_instance++};
      const std::size_t n = pool.dataflows[idx].vertex_types.size();
      live.push_back(Live{act.instance, idx, n});
      active_vertices += n;
    } else if (kind == ActivityKind::kDepart && !live.empty()) {
      const std::size_t i = pick_departure(live, config.removal_attempts, sample, rng);
      act = Activity{ActivityKind::kDepart, live[i].pool_index, live[i].instance};
      active_vertices -= live[i].size;
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    }
    script.intervals.push_back(act);
  }
  return script;
}

std::vector<double> scripted_utilization(const DagPool& pool, const WorkloadScript& script) {
  std::vector<double> out;
  std::map<std::uint64_t, std::size_t> live;
  std::size_t active = 0;
  const double resources = static_cast<double>(script.config.resource_count);
  for (const Activity& a : script.intervals) {
    if (a.kind == ActivityKind::kArrive) {
      const std::size_t n = pool.dataflows.at(a.pool_index).vertex_types.size();
      live[a.instance] = n;
      active += n;
    } else if (a.kind == ActivityKind::kDepart) {
      const auto it = live.find(a.instance);
      if (it == live.end()) {
        throw Error(ErrorCode::kInvariant,
                    fmt::format("departure of inactive instance {}", a.instance));
      }
      active -= it->second;
      live.erase(it);
    }
    out.push_back(static_cast<double>(active) / resources);
  }
  return out;
}

}  // namespace edgesched
