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

#ifndef LPGNN_PROPAGATION_HPP_
#define LPGNN_PROPAGATION_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lpgnn/graph.hpp"

namespace lpgnn {

using SparseOp = Eigen::SparseMatrix<double>;

// Symmetric GCN propagation operator D^{-1/2} (A + I) D^{-1/2} with
// degrees taken after adding self-loops.
SparseOp sym_normalized_adjacency(const Graph& graph);

// Row-stochastic self-inclusive mean D^{-1} (A + I); constant inputs are
// fixed points, which is what KProp relies on.
SparseOp mean_aggregation_operator(const Graph& graph);

// Neighbor-only mean (no self term); rows of isolated nodes are zero.
// Used by the SAGE aggregation step.
SparseOp neighbor_mean_operator(const Graph& graph);

// k rounds of self-inclusive mean aggregation; k = 0 is the identity.
Eigen::MatrixXd kprop(const Eigen::MatrixXd& features, const Graph& graph,
                      int k);

// One-hot encodes the noisy labels, propagates k_y rounds and takes the
// per-node argmax (ties resolved toward the smallest class id).
Eigen::VectorXi drop_pseudo_labels(const Eigen::VectorXi& noisy_labels,
                                   const Graph& graph, int k_y,
                                   int num_classes);

}  // namespace lpgnn

#endif  // LPGNN_PROPAGATION_HPP_
