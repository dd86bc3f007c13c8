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

#include "edgesched/resources.hpp"

#include <limits>
#include <random>

#include <fmt/format.h>

#include "edgesched/error.hpp"

namespace edgesched {

const LinkDistribution& NetworkConfig::between(ResourceClass a, ResourceClass b) const {
  if (a == ResourceClass::kEdge && b == ResourceClass::kEdge) return edge_edge;
  if (a == ResourceClass::kCloud && b == ResourceClass::kCloud) return cloud_cloud;
  return edge_cloud;
}

PoolConfig PoolConfig::preset(const std::string& name) {
  PoolConfig config;
  if (name == "small") {
    config.name = "small";
    config.edge_count = 96;
    config.cloud_count = 4;
  } else if (name == "large") {
    config.name = "large";
    config.edge_count = 960;
    config.cloud_count = 40;
  } else {
    throw Error(ErrorCode::kConfig, fmt::format("unknown preset '{}'", name));
  }
  return config;
}

namespace {

void validate_link(const LinkDistribution& d, const char* name) {
  if (!(d.latency_mean_sec >= 0.0) || !(d.latency_stddev_sec >= 0.0)) {
    throw Error(ErrorCode::kConfig, fmt::format("{}: latency must be non-negative", name));
  }
  if (!(d.bandwidth_mean_bytes_per_sec > 0.0) || !(d.bandwidth_stddev_bytes_per_sec >= 0.0)) {
    throw Error(ErrorCode::kConfig, fmt::format("{}: bandwidth must be positive", name));
  }
}

// Normal draw, redrawn until it satisfies the predicate.
template <typename Accept>
double sample(std::mt19937_64& rng, double mean, double stddev, Accept accept) {
  if (stddev == 0.0) return mean;
  std::normal_distribution<double> dist(mean, stddev);
  for (;;) {
    double x = dist(rng);
    if (accept(x)) return x;
  }
}

}  // namespace

void PoolConfig::validate() const {
  if (edge_count == 0 || cloud_count == 0) {
    throw Error(ErrorCode::kConfig, "pool needs at least one edge and one cloud resource");
  }
  if (!(energy.battery_capacity_mah > 0.0) || !(energy.base_load_ma >= 0.0) ||
      !(energy.recharge_interval_sec > 0.0)) {
    throw Error(ErrorCode::kConfig, "edge energy parameters must satisfy C > 0, kappa >= 0, tau > 0");
  }
  validate_link(network.edge_edge, "edge_edge");
  validate_link(network.edge_cloud, "edge_cloud");
  validate_link(network.cloud_cloud, "cloud_cloud");
  catalog.validate();
}

NetworkModel::NetworkModel(std::size_t size, std::vector<double> latency,
                           std::vector<double> bandwidth)
    : size_(size), latency_(std::move(latency)), bandwidth_(std::move(bandwidth)) {
  if (latency_.size() != size * size || bandwidth_.size() != size * size) {
    throw Error(ErrorCode::kConfig, "network matrix size mismatch");
  }
}

ResourcePool::ResourcePool(PoolConfig config, std::uint64_t seed, std::vector<Resource> resources,
                           NetworkModel network)
    : config_(std::move(config)),
      seed_(seed),
      resources_(std::move(resources)),
      network_(std::move(network)) {
  for (const Resource& r : resources_) {
    (r.is_edge() ? edge_ids_ : cloud_ids_).push_back(r.id);
  }
}

const Resource& ResourcePool::resource(ResourceId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kNotFound, fmt::format("resource {} not in pool", id));
  }
  return resources_[id];
}

double ResourcePool::min_link_cost(ResourceClass from, ResourceClass to,
                                   double event_size_bytes) const {
  const auto& a = from == ResourceClass::kEdge ? edge_ids_ : cloud_ids_;
  const auto& b = to == ResourceClass::kEdge ? edge_ids_ : cloud_ids_;
  double best = std::numeric_limits<double>::infinity();
  for (ResourceId x : a) {
    for (ResourceId y : b) {
      if (x == y) continue;
      best = std::min(best, link_cost(x, y, event_size_bytes));
    }
  }
  return best;
}

double ResourcePool::parallelism_overhead(std::size_t m) const {
  return config_.catalog.parallelism().overhead(m);
}

std::shared_ptr<const ResourcePool> build_pool(const PoolConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t n = config.edge_count + config.cloud_count;

  std::vector<Resource> resources;
  resources.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Resource r;
    r.id = static_cast<ResourceId>(i);
    if (i < config.edge_count) {
      r.cls = ResourceClass::kEdge;
      r.battery_capacity_mah = config.energy.battery_capacity_mah;
      r.base_load_ma = config.energy.base_load_ma;
      r.recharge_interval_sec = config.energy.recharge_interval_sec;
    } else {
      r.cls = ResourceClass::kCloud;
    }
    resources.push_back(r);
  }

  std::mt19937_64 rng(seed);
  std::vector<double> latency(n * n, 0.0);
  std::vector<double> bandwidth(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (config.network.symmetric && b < a) {
        latency[a * n + b] = latency[b * n + a];
        bandwidth[a * n + b] = bandwidth[b * n + a];
        continue;
      }
      const LinkDistribution& d = config.network.between(resources[a].cls, resources[b].cls);
      latency[a * n + b] = sample(rng, d.latency_mean_sec, d.latency_stddev_sec,
                                  [](double x) { return x >= 0.0; });
      bandwidth[a * n + b] =
          sample(rng, d.bandwidth_mean_bytes_per_sec, d.bandwidth_stddev_bytes_per_sec,
                 [](double x) { return x > 0.0; });
    }
  }
  return std::make_shared<const ResourcePool>(config, seed, std::move(resources),
                                              NetworkModel(n, std::move(latency), std::move(bandwidth)));
}

}  // namespace edgesched
