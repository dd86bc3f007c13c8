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

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "edgesched/model.hpp"
#include "edgesched/resources.hpp"

namespace fixtures {

using namespace edgesched;

// Catalog with hand-picked numbers: source, sink and a few query types.
inline ProfileCatalog tiny_catalog() {
  ProfileCatalog c;
  c.add({"src", QueryKind::kSource, 1.0, 100.0}, {0.0, 0.0}, {0.0, 0.0});
  c.add({"snk", QueryKind::kSink, 1.0, 100.0}, {1e-6, 0.0}, {1e-6, 0.0});
  c.add({"f", QueryKind::kFilter, 0.5, 100.0}, {0.002, 1e-5}, {0.001, 0.0});
  c.add({"a", QueryKind::kPattern, 2.0, 100.0}, {0.004, 1e-5}, {0.002, 0.0});
  c.add({"b", QueryKind::kFilter, 0.5, 100.0}, {0.006, 1e-5}, {0.003, 0.0});
  c.add({"join", QueryKind::kSequence, 1.0, 100.0}, {0.001, 1e-5}, {0.0005, 0.0});
  c.set_parallelism(ParallelismTable({0.0, 0.2, 0.35, 0.5}));
  return c;
}

// Pool with fixed links: every edge-edge, edge-cloud and cloud-cloud pair
// costs the given latency at the given bandwidth.
inline std::shared_ptr<const ResourcePool> fixed_pool(std::size_t edges, std::size_t clouds,
                                                      ProfileCatalog catalog = tiny_catalog(),
                                                      double ee_latency = 0.002,
                                                      double ec_latency = 0.06,
                                                      double cc_latency = 0.001,
                                                      double bandwidth = 1e6) {
  PoolConfig config;
  config.name = "fixture";
  config.edge_count = edges;
  config.cloud_count = clouds;
  config.catalog = std::move(catalog);
  config.network.edge_edge = {ee_latency, 0.0, bandwidth, 0.0};
  config.network.edge_cloud = {ec_latency, 0.0, bandwidth, 0.0};
  config.network.cloud_cloud = {cc_latency, 0.0, bandwidth, 0.0};
  return build_pool(config, 1);
}

inline DataflowSpec spec(std::string id, std::vector<std::string> types, std::vector<Edge> edges,
                         double rate = 100.0) {
  return DataflowSpec{std::move(id), std::move(types), std::move(edges), rate};
}

inline std::shared_ptr<const RatedDataflow> rated(const DataflowSpec& s, const ProfileCatalog& c) {
  return std::make_shared<const RatedDataflow>(propagate_rates(s, c));
}

// Random DAG on n vertices: every vertex past the first hangs off an earlier
// one, plus a few extra forward edges. Kinds follow the structure.
inline DataflowSpec random_spec(std::mt19937_64& rng, std::size_t n, std::string id = "rnd") {
  std::set<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    edges.insert({static_cast<VertexId>(rng() % v), v});
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto u = static_cast<VertexId>(rng() % n);
    const auto v = static_cast<VertexId>(rng() % n);
    if (u < v) edges.insert({u, v});
  }
  std::vector<bool> has_in(n, false), has_out(n, false);
  for (const auto& [u, v] : edges) {
    has_out[u] = true;
    has_in[v] = true;
  }
  const std::vector<std::string> middle{"f", "a", "b", "join"};
  std::vector<std::string> types;
  for (std::size_t v = 0; v < n; ++v) {
    if (!has_in[v]) {
      types.push_back("src");
    } else if (!has_out[v]) {
      types.push_back("snk");
    } else {
      types.push_back(middle[rng() % middle.size()]);
    }
  }
  return DataflowSpec{std::move(id), types, {edges.begin(), edges.end()}, 100.0};
}

}  // namespace fixtures
