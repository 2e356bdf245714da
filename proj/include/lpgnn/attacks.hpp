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

#ifndef LPGNN_ATTACKS_HPP_
#define LPGNN_ATTACKS_HPP_

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lpgnn/dataset.hpp"
#include "lpgnn/graph.hpp"
#include "lpgnn/ldp.hpp"
#include "lpgnn/rng.hpp"

namespace lpgnn {

// ---------------------------------------------------------------------------
// Node injection: black-box addition of random nodes anchored at the
// highest-degree nodes.

struct NodeInjectionConfig {
  double rate = 0.1;  // fraction of original num_nodes, in (0, 1]
  // Injected features are uniform in [alpha, beta]^d; on binary datasets
  // they are uniform over {0, 1}. Labels are uniform over classes.
  bool binary_features = true;
};

// Plans injections from graph structure and dataset dimensions only; the
// black-box contract is enforced by this signature (no feature/label access).
// One new node per anchor in top-degree order; anchors cycle if n exceeds
// num_nodes.
std::vector<NodeSpec> plan_injection(const Graph& graph, int dim,
                                     int num_classes, double alpha, double beta,
                                     const NodeInjectionConfig& config,
                                     Rng& rng);

Dataset inject_nodes(const Dataset& dataset, const NodeInjectionConfig& config,
                     Rng& rng);

// ---------------------------------------------------------------------------
// Label flipping: pre-LDP replacement of top-degree nodes' labels with a
// uniformly chosen *different* class.

struct LabelFlipConfig {
  double rate = 0.1;  // fraction of nodes whose labels flip, in (0, 1]
};

Dataset flip_labels(const Dataset& dataset, const LabelFlipConfig& config,
                    Rng& rng);

// ---------------------------------------------------------------------------
// Mean-inference attack over rectified responses.

struct InferenceResult {
  Eigen::MatrixXd predicted_features;  // one row per target
  Eigen::VectorXd cosine;              // per-target cosine similarity
  Eigen::VectorXd mean_fd;             // per-target mean |pred - true|
  std::vector<std::uint8_t> zero_norm_flag;  // cosine reported as 0 here
};

// prediction(t) = mean of rectified rows over {t} union neighbors(t).
InferenceResult infer_features_mean(const Eigen::MatrixXd& rectified,
                                    const Graph& graph,
                                    const std::vector<NodeId>& targets,
                                    const Eigen::MatrixXd& true_features);

// ---------------------------------------------------------------------------
// Poisoning attack: the additive poison collapses the Bernoulli parameter to
// zero for entries whose original value is alpha, so a +1 response certifies
// "not alpha".

// p = (alpha - beta) / (e^{eps/m} - 1); always negative.
double compute_poison(const MbmParams& params);

// Adds p to every entry of the target rows; other rows untouched.
Eigen::MatrixXd apply_poison(const Eigen::MatrixXd& features,
                             const std::vector<NodeId>& targets, double p);

enum class ValueDomain { kBinary, kGeneral };

enum class PoisonVerdict { kExactValue, kExcludedAlpha, kNoInformation };

struct PoisonInferenceResult {
  std::int64_t num_inferences = 0;  // verdicts other than no-information
  std::int64_t num_correct = 0;
  std::int64_t num_exact_value_verdicts = 0;
  // NaN when num_inferences == 0 (the undefined sentinel).
  double success_rate = std::numeric_limits<double>::quiet_NaN();
  bool defined() const { return num_inferences > 0; }
};

// One observation: a target node and the encoded vector the server received
// for it after the target was poisoned.
struct PoisonObservation {
  NodeId target;
  EncodedVector encoded;
};

// For every +1 entry: binary domain -> exact-value verdict (original = beta);
// general domain -> membership exclusion (original != alpha). -1 and 0
// entries carry no information. Verdicts are scored against true_features.
PoisonInferenceResult poison_inference(
    const std::vector<PoisonObservation>& observations,
    const MbmParams& params, ValueDomain domain,
    const Eigen::MatrixXd& true_features);

// ---------------------------------------------------------------------------
// Metrics.

// Standard cosine; a zero-norm input yields 0 and sets *zero_norm.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         bool* zero_norm = nullptr);

// Mean absolute per-dimension difference.
double mean_feature_difference(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b);

}  // namespace lpgnn

#endif  // LPGNN_ATTACKS_HPP_
