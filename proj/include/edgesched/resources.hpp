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
#include <memory>
#include <string>
#include <vector>

#include "edgesched/catalog.hpp"

namespace edgesched {

using ResourceId = std::uint32_t;
inline constexpr ResourceId kUnassigned = static_cast<ResourceId>(-1);

struct Resource {
  ResourceId id = 0;
  ResourceClass cls = ResourceClass::kEdge;
  // Energy fields are meaningful on edges only.
  double battery_capacity_mah = 0.0;
  double base_load_ma = 0.0;
  double recharge_interval_sec = 0.0;

  bool is_edge() const { return cls == ResourceClass::kEdge; }
};

struct LinkDistribution {
  double latency_mean_sec = 0.0;
  double latency_stddev_sec = 0.0;
  double bandwidth_mean_bytes_per_sec = 1.0;
  double bandwidth_stddev_bytes_per_sec = 0.0;
};

struct NetworkConfig {
  LinkDistribution edge_edge{0.002, 0.001, 12.5e6, 2.5e6};
  LinkDistribution edge_cloud{0.060, 0.010, 2.5e6, 0.5e6};
  LinkDistribution cloud_cloud{0.001, 0.0002, 125e6, 10e6};
  // When set, (a, b) and (b, a) share one sample.
  bool symmetric = true;

  const LinkDistribution& between(ResourceClass a, ResourceClass b) const;
};

struct EnergyConfig {
  double battery_capacity_mah = 10000.0;
  double base_load_ma = 300.0;
  double recharge_interval_sec = 86400.0;
};

struct PoolConfig {
  std::string name = "small";
  std::size_t edge_count = 96;
  std::size_t cloud_count = 4;
  EnergyConfig energy;
  NetworkConfig network;
  ProfileCatalog catalog = ProfileCatalog::synthetic_default();

  /// "small" (96 edge + 4 cloud) or "large" (960 edge + 40 cloud).
  static PoolConfig preset(const std::string& name);
  void validate() const;
};

/// Pairwise link latency and bandwidth, sampled once per ordered pair.
class NetworkModel {
 public:
  NetworkModel() = default;
  NetworkModel(std::size_t size, std::vector<double> latency, std::vector<double> bandwidth);

  double latency(ResourceId from, ResourceId to) const { return latency_[index(from, to)]; }
  double bandwidth(ResourceId from, ResourceId to) const { return bandwidth_[index(from, to)]; }
  std::size_t size() const { return size_; }

 private:
  std::size_t index(ResourceId from, ResourceId to) const {
    return static_cast<std::size_t>(from) * size_ + to;
  }

  std::size_t size_ = 0;
  std::vector<double> latency_;
  std::vector<double> bandwidth_;
};

class ResourcePool {
 public:
  ResourcePool(PoolConfig config, std::uint64_t seed, std::vector<Resource> resources,
               NetworkModel network);

  const std::vector<Resource>& resources() const { return resources_; }
  const Resource& resource(ResourceId id) const;
  std::size_t size() const { return resources_.size(); }
  const std::vector<ResourceId>& edge_ids() const { return edge_ids_; }
  const std::vector<ResourceId>& cloud_ids() const { return cloud_ids_; }
  bool contains(ResourceId id) const { return id < resources_.size(); }

  const NetworkModel& network() const { return network_; }
  const ProfileCatalog& catalog() const { return config_.catalog; }
  const PoolConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }

  /// Network cost in seconds of shipping one event of the given size from one
  /// resource to another: l + size / beta, or zero when co-located.
  double link_cost(ResourceId from, ResourceId to, double event_size_bytes) const {
    if (from == to) return 0.0;
    return network_.latency(from, to) + event_size_bytes / network_.bandwidth(from, to);
  }

  /// Smallest link cost over all pairs of the given classes.
  double min_link_cost(ResourceClass from, ResourceClass to, double event_size_bytes) const;

  double parallelism_overhead(std::size_t m) const;

 private:
  PoolConfig config_;
  std::uint64_t seed_;
  std::vector<Resource> resources_;
  std::vector<ResourceId> edge_ids_;
  std::vector<ResourceId> cloud_ids_;
  NetworkModel network_;
};

/// Deterministic in (config, seed). Edge ids come first, then cloud ids.
std::shared_ptr<const ResourcePool> build_pool(const PoolConfig& config, std::uint64_t seed);

}  // namespace edgesched
