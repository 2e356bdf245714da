// Copyright 2025 The lpgnn-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpgnn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lpgnn {

Graph Graph::from_edges(NodeId num_nodes,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (num_nodes < 0) throw std::invalid_argument("negative node count");
  Graph g;
  g.num_nodes = num_nodes;
  g.adjacency.assign(static_cast<std::size_t>(num_nodes), {});
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(u) + "," + std::to_string(v) +
                                  ")");
    }
    if (u == v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    }
    g.adjacency[static_cast<std::size_t>(u)].push_back(v);
    g.adjacency[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nbrs : g.adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

void Graph::validate() const {
  if (num_nodes != static_cast<NodeId>(adjacency.size())) {
    throw std::logic_error("adjacency size does not match num_nodes");
  }
  for (NodeId u = 0; u < num_nodes; ++u) {
    const auto& nbrs = adjacency[static_cast<std::size_t>(u)];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      NodeId v = nbrs[i];
      if (v < 0 || v >= num_nodes) {
        throw std::logic_error("neighbor out of range at node " +
                               std::to_string(u));
      }
      if (v == u) {
        throw std::logic_error("self-loop at node " + std::to_string(u));
      }
      if (i > 0 && nbrs[i - 1] >= v) {
        throw std::logic_error("neighbor list not strictly increasing at node " +
                               std::to_string(u));
      }
      const auto& back = adjacency[static_cast<std::size_t>(v)];
      if (!std::binary_search(back.begin(), back.end(), u)) {
        throw std::logic_error("asymmetric edge (" + std::to_string(u) + "," +
                               std::to_string(v) + ")");
      }
    }
  }
}

std::int64_t Graph::num_edges() const {
  std::int64_t twice = 0;
  for (const auto& nbrs : adjacency) twice += static_cast<std::int64_t>(nbrs.size());
  return twice / 2;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < num_nodes; ++u) {
    for (NodeId v : adjacency[static_cast<std::size_t>(u)]) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

std::vector<NodeId> degrees(const Graph& graph) {
  std::vector<NodeId> deg(static_cast<std::size_t>(graph.num_nodes));
  for (NodeId v = 0; v < graph.num_nodes; ++v) {
    deg[static_cast<std::size_t>(v)] =
        static_cast<NodeId>(graph.adjacency[static_cast<std::size_t>(v)].size());
  }
  return deg;
}

std::vector<NodeId> top_k_by_degree(const Graph& graph, NodeId k) {
  if (k < 0 || k > graph.num_nodes) {
    throw std::invalid_argument("top_k_by_degree: k=" + std::to_string(k) +
                                " out of range for " +
                                std::to_string(graph.num_nodes) + " nodes");
  }
  std::vector<NodeId> ids(static_cast<std::size_t>(graph.num_nodes));
  std::iota(ids.begin(), ids.end(), NodeId{0});
  auto deg = degrees(graph);
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    NodeId da = deg[static_cast<std::size_t>(a)];
    NodeId db = deg[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  });
  ids.resize(static_cast<std::size_t>(k));
  return ids;
}

}  // namespace lpgnn
