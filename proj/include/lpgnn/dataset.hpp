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

#ifndef LPGNN_DATASET_HPP_
#define LPGNN_DATASET_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lpgnn/graph.hpp"
#include "lpgnn/rng.hpp"

namespace lpgnn {

using Mask = std::vector<std::uint8_t>;

// Graph plus node features, class labels and train/val/test masks.
// Feature entries lie in [alpha, beta] before any attack is applied.
struct Dataset {
  Graph graph;
  Eigen::MatrixXd features;  // num_nodes x d
  Eigen::VectorXi labels;    // class ids in [0, num_classes)
  int num_classes = 0;
  double alpha = 0.0;
  double beta = 1.0;
  Mask train_mask;
  Mask val_mask;
  Mask test_mask;

  NodeId num_nodes() const { return graph.num_nodes; }
  int dim() const { return static_cast<int>(features.cols()); }

  // Full invariant scan (graph invariants, shapes, label range, mask
  // disjointness). Throws std::logic_error on the first violation.
  void validate() const;

  bool operator==(const Dataset& other) const;
};

// Planted-partition stand-in for the public benchmark datasets. Classes are
// assigned uniformly; the feature block of d/num_classes dimensions owned by
// a node's class is Bernoulli(feature_signal), all other dimensions
// Bernoulli(1 - feature_signal). Features are binary, so alpha=0, beta=1.
struct SyntheticConfig {
  NodeId num_nodes = 1000;
  int num_classes = 4;
  int dim = 16;
  double intra_edge_prob = 0.05;
  double inter_edge_prob = 0.005;
  double feature_signal = 0.9;
  double train_fraction = 0.5;
  double val_fraction = 0.25;
  double test_fraction = 0.25;

  void validate() const;
};

// Deterministic in (config, seed).
Dataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

// Directory format: meta.json, edges.csv (header "u,v", u<v), features.csv,
// labels.csv, splits.json. See README for the schema.
Dataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

// One appended node: feature row, label, anchor neighbors (original ids).
struct NodeSpec {
  Eigen::VectorXd features;
  int label = 0;
  std::vector<NodeId> neighbors;
};

// Appends nodes and symmetrizes the new edges. Injected nodes join the train
// mask by default so their labels participate in the training loss; pass
// add_to_train=false to keep them unlabeled.
Dataset add_nodes_with_edges(const Dataset& dataset,
                             const std::vector<NodeSpec>& specs,
                             bool add_to_train = true);

}  // namespace lpgnn

#endif  // LPGNN_DATASET_HPP_
