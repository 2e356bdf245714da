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

#include "lpgnn/attacks.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lpgnn {
namespace {

NodeId ceil_count(double rate, NodeId n) {
  return static_cast<NodeId>(std::ceil(rate * static_cast<double>(n)));
}

}  // namespace

std::vector<NodeSpec> plan_injection(const Graph& graph, int dim,
                                     int num_classes, double alpha, double beta,
                                     const NodeInjectionConfig& config,
                                     Rng& rng) {
  if (!(config.rate > 0.0 && config.rate <= 1.0)) {
    throw std::invalid_argument("injection rate must lie in (0, 1]");
  }
  const NodeId n_inject = ceil_count(config.rate, graph.num_nodes);
  auto anchors =
      top_k_by_degree(graph, std::min<NodeId>(n_inject, graph.num_nodes));
  std::vector<NodeSpec> specs;
  specs.reserve(static_cast<std::size_t>(n_inject));
  for (NodeId k = 0; k < n_inject; ++k) {
    NodeSpec spec;
    spec.features.resize(dim);
    for (int j = 0; j < dim; ++j) {
      spec.features[j] = config.binary_features
                             ? (rng.bernoulli(0.5) ? beta : alpha)
                             : rng.uniform(alpha, beta);
    }
    spec.label = static_cast<int>(rng.uniform_int(0, num_classes - 1));
    spec.neighbors = {anchors[static_cast<std::size_t>(k) % anchors.size()]};
    specs.push_back(std::move(spec));
  }
  return specs;
}

Dataset inject_nodes(const Dataset& dataset, const NodeInjectionConfig& config,
                     Rng& rng) {
  auto specs = plan_injection(dataset.graph, dataset.dim(), dataset.num_classes,
                              dataset.alpha, dataset.beta, config, rng);
  return add_nodes_with_edges(dataset, specs, /*add_to_train=*/true);
}

Dataset flip_labels(const Dataset& dataset, const LabelFlipConfig& config,
                    Rng& rng) {
  if (!(config.rate > 0.0 && config.rate <= 1.0)) {
    throw std::invalid_argument("flip rate must lie in (0, 1]");
  }
  if (dataset.num_classes < 2) {
    throw std::invalid_argument("label flipping needs at least 2 classes");
  }
  const NodeId n_flip = ceil_count(config.rate, dataset.num_nodes());
  auto targets = top_k_by_degree(dataset.graph, n_flip);
  Dataset out = dataset;
  for (NodeId v : targets) {
    int original = out.labels[v];
    // Uniform draw over the other C-1 classes; the change is guaranteed.
    auto other = static_cast<int>(rng.uniform_int(0, dataset.num_classes - 2));
    out.labels[v] = other >= original ? other + 1 : other;
  }
  return out;
}

InferenceResult infer_features_mean(const Eigen::MatrixXd& rectified,
                                    const Graph& graph,
                                    const std::vector<NodeId>& targets,
                                    const Eigen::MatrixXd& true_features) {
  if (rectified.rows() != graph.num_nodes) {
    throw std::invalid_argument("rectified rows must cover every node");
  }
  const auto t = static_cast<Eigen::Index>(targets.size());
  const Eigen::Index d = rectified.cols();
  InferenceResult result;
  result.predicted_features.resize(t, d);
  result.cosine.resize(t);
  result.mean_fd.resize(t);
  result.zero_norm_flag.assign(targets.size(), 0);

  for (Eigen::Index i = 0; i < t; ++i) {
    NodeId v = targets[static_cast<std::size_t>(i)];
    if (v < 0 || v >= graph.num_nodes) {
      throw std::invalid_argument("inference target out of range: " +
                                  std::to_string(v));
    }
    Eigen::RowVectorXd sum = rectified.row(v);
    double count = 1.0;
    for (NodeId nb : graph.adjacency[static_cast<std::size_t>(v)]) {
      sum += rectified.row(nb);
      count += 1.0;
    }
    result.predicted_features.row(i) = sum / count;
    bool zero_norm = false;
    result.cosine[i] =
        cosine_similarity(result.predicted_features.row(i).transpose(),
                          true_features.row(v).transpose(), &zero_norm);
    result.zero_norm_flag[static_cast<std::size_t>(i)] = zero_norm ? 1 : 0;
    result.mean_fd[i] =
        mean_feature_difference(result.predicted_features.row(i).transpose(),
                                true_features.row(v).transpose());
  }
  return result;
}

double compute_poison(const MbmParams& params) {
  return (params.alpha() - params.beta()) / (params.exp_eps_m() - 1.0);
}

Eigen::MatrixXd apply_poison(const Eigen::MatrixXd& features,
                             const std::vector<NodeId>& targets, double p) {
  Eigen::MatrixXd out = features;
  for (NodeId v : targets) {
    if (v < 0 || v >= features.rows()) {
      throw std::invalid_argument("poison target out of range: " +
                                  std::to_string(v));
    }
    out.row(v).array() += p;
  }
  return out;
}

PoisonInferenceResult poison_inference(
    const std::vector<PoisonObservation>& observations,
    const MbmParams& params, ValueDomain domain,
    const Eigen::MatrixXd& true_features) {
  PoisonInferenceResult result;
  for (const auto& obs : observations) {
    if (obs.target < 0 || obs.target >= true_features.rows()) {
      throw std::invalid_argument("poison observation target out of range");
    }
    if (obs.encoded.size() != params.dim()) {
      throw std::invalid_argument("encoded vector has wrong length");
    }
    for (int i = 0; i < params.dim(); ++i) {
      if (obs.encoded[i] != 1) continue;  // -1 and 0 carry no information
      double original = true_features(obs.target, i);
      ++result.num_inferences;
      if (domain == ValueDomain::kBinary) {
        ++result.num_exact_value_verdicts;
        result.num_correct += original == params.beta();
      } else {
        result.num_correct += original != params.alpha();
      }
    }
  }
  if (result.num_inferences > 0) {
    result.success_rate = static_cast<double>(result.num_correct) /
                          static_cast<double>(result.num_inferences);
  }
  return result;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         bool* zero_norm) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine: length mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    if (zero_norm != nullptr) *zero_norm = true;
    return 0.0;
  }
  if (zero_norm != nullptr) *zero_norm = false;
  return a.dot(b) / (na * nb);
}

double mean_feature_difference(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("mean_fd: length mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().mean();
}

}  // namespace lpgnn
