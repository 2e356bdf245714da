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

#ifndef LPGNN_MODEL_HPP_
#define LPGNN_MODEL_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lpgnn/dataset.hpp"
#include "lpgnn/graph.hpp"

namespace lpgnn {

enum class Architecture { kGcn, kSage };

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& name);

struct ModelConfig {
  Architecture architecture = Architecture::kGcn;
  int hidden_dim = 16;
  double dropout = 0.0;  // seeded mask; disabled by default
};

struct TrainConfig {
  double learning_rate = 0.05;
  double weight_decay = 5e-4;
  int max_epochs = 300;
  // Early stop on val accuracy. Full-batch descent can sit on a plateau for
  // a long time before the loss surface opens up, so the window is wide.
  int patience = 200;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch;
  double loss;
  double train_accuracy;
  double val_accuracy;
};

// Two-layer model trained by full-batch gradient descent.
// GCN weights: {W1, W2}; SAGE weights: {Wself1, Wneigh1, Wself2, Wneigh2};
// both carry one bias per layer.
struct TrainedModel {
  ModelConfig config;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<EpochRecord> history;
};

// Cross-entropy over train-mask nodes using the supplied pseudo labels;
// early stopping and the returned snapshot follow val accuracy against the
// dataset's labels. Deterministic given train_config.seed. Throws
// std::runtime_error naming the epoch if the loss goes non-finite.
TrainedModel train(const Dataset& dataset, const ModelConfig& model_config,
                   const TrainConfig& train_config,
                   const Eigen::MatrixXd& input_features,
                   const Eigen::VectorXi& pseudo_labels);

// Row logits for every node given the same feature matrix used in training.
Eigen::MatrixXd forward_logits(const TrainedModel& model, const Graph& graph,
                               const Eigen::MatrixXd& input_features);

// Fraction of mask nodes whose argmax prediction equals labels[v].
// Ties resolve toward the smallest class id. Throws on an empty mask.
double evaluate(const TrainedModel& model, const Graph& graph,
                const Eigen::MatrixXd& input_features,
                const Eigen::VectorXi& labels, const Mask& mask);

// Compares analytic gradients against central finite differences
// (step 1e-5) over every parameter entry; returns the max relative error.
// Intended for tiny datasets (<= 8 nodes).
double grad_check(const ModelConfig& model_config, const Dataset& tiny_dataset,
                  std::uint64_t seed);

// JSON weights file, shape-annotated. Not a stability-guaranteed format.
void save_model(const TrainedModel& model, const std::filesystem::path& file);
TrainedModel load_model(const std::filesystem::path& file);

}  // namespace lpgnn

#endif  // LPGNN_MODEL_HPP_
