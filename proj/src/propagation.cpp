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

#include "lpgnn/propagation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lpgnn {
namespace {

using Triplet = Eigen::Triplet<double>;

SparseOp build(const Graph& graph, bool include_self, bool symmetric) {
  const auto n = static_cast<Eigen::Index>(graph.num_nodes);
  std::vector<Triplet> triplets;
  std::vector<double> inv_deg(static_cast<std::size_t>(n), 0.0);
  for (NodeId v = 0; v < graph.num_nodes; ++v) {
    double deg = static_cast<double>(graph.adjacency[static_cast<std::size_t>(v)].size()) +
                 (include_self ? 1.0 : 0.0);
    inv_deg[static_cast<std::size_t>(v)] = deg > 0.0 ? 1.0 / deg : 0.0;
  }
  auto weight = [&](NodeId u, NodeId v) {
    if (symmetric) {
      return std::sqrt(inv_deg[static_cast<std::size_t>(u)]) *
             std::sqrt(inv_deg[static_cast<std::size_t>(v)]);
    }
    return inv_deg[static_cast<std::size_t>(u)];
  };
  for (NodeId u = 0; u < graph.num_nodes; ++u) {
    if (include_self) triplets.emplace_back(u, u, weight(u, u));
    for (NodeId v : graph.adjacency[static_cast<std::size_t>(u)]) {
      triplets.emplace_back(u, v, weight(u, v));
    }
  }
  SparseOp op(n, n);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace

SparseOp sym_normalized_adjacency(const Graph& graph) {
  return build(graph, /*include_self=*/true, /*symmetric=*/true);
}

SparseOp mean_aggregation_operator(const Graph& graph) {
  return build(graph, /*include_self=*/true, /*symmetric=*/false);
}

SparseOp neighbor_mean_operator(const Graph& graph) {
  return build(graph, /*include_self=*/false, /*symmetric=*/false);
}

Eigen::MatrixXd kprop(const Eigen::MatrixXd& features, const Graph& graph,
                      int k) {
  if (features.rows() != graph.num_nodes) {
    throw std::invalid_argument("kprop: feature rows != num_nodes");
  }
  if (k < 0) throw std::invalid_argument("kprop: k must be >= 0");
  if (k == 0) return features;
  SparseOp op = mean_aggregation_operator(graph);
  Eigen::MatrixXd out = features;
  for (int step = 0; step < k; ++step) out = op * out;
  return out;
}

Eigen::VectorXi drop_pseudo_labels(const Eigen::VectorXi& noisy_labels,
                                   const Graph& graph, int k_y,
                                   int num_classes) {
  if (noisy_labels.size() != graph.num_nodes) {
    throw std::invalid_argument("drop: label count != num_nodes");
  }
  Eigen::MatrixXd one_hot =
      Eigen::MatrixXd::Zero(graph.num_nodes, num_classes);
  for (Eigen::Index v = 0; v < noisy_labels.size(); ++v) {
    int c = noisy_labels[v];
    if (c < 0 || c >= num_classes) {
      throw std::invalid_argument("drop: label out of range at node " +
                                  std::to_string(v));
    }
    one_hot(v, c) = 1.0;
  }
  Eigen::MatrixXd smoothed = kprop(one_hot, graph, k_y);
  Eigen::VectorXi out(noisy_labels.size());
  for (Eigen::Index v = 0; v < smoothed.rows(); ++v) {
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
      if (smoothed(v, c) > smoothed(v, best)) best = c;
    }
    out[v] = best;
  }
  return out;
}

}  // namespace lpgnn
