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

#ifndef LPGNN_GRAPH_HPP_
#define LPGNN_GRAPH_HPP_

#include <cstdint>
#include <utility>
#include <vector>

namespace lpgnn {

using NodeId = std::int64_t;

// Undirected simple graph stored as per-node sorted neighbor lists.
// Invariants: lists strictly increasing, symmetric, no self-loops.
// Immutable after construction; share freely across threads.
struct Graph {
  NodeId num_nodes = 0;
  std::vector<std::vector<NodeId>> adjacency;

  // Builds a graph from an arbitrary edge list: duplicates removed,
  // self-loops rejected, edges symmetrized. Throws std::invalid_argument
  // on out-of-range endpoints or self-loops.
  static Graph from_edges(NodeId num_nodes,
                          const std::vector<std::pair<NodeId, NodeId>>& edges);

  // Full invariant scan; throws std::logic_error with a description of the
  // first violation found.
  void validate() const;

  // Undirected edge count.
  std::int64_t num_edges() const;

  // Unique edges as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;
};

std::vector<NodeId> degrees(const Graph& graph);

// The k nodes of highest degree; ties broken by ascending node id so that
// attack target selection is reproducible. Throws if k > num_nodes.
std::vector<NodeId> top_k_by_degree(const Graph& graph, NodeId k);

}  // namespace lpgnn

#endif  // LPGNN_GRAPH_HPP_
