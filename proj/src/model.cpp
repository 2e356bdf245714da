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

#include "lpgnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "lpgnn/propagation.hpp"
#include "lpgnn/rng.hpp"

namespace lpgnn {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

struct Params {
  std::vector<MatrixXd> W;
  std::vector<VectorXd> b;
};

struct Operators {
  SparseOp prop;           // GCN: symmetric-normalized; unused for SAGE
  SparseOp neighbor_mean;  // SAGE only
};

Params glorot_init(const ModelConfig& cfg, int in_dim, int num_classes,
                   Rng& rng) {
  auto glorot = [&](Eigen::Index rows, Eigen::Index cols) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        w(i, j) = rng.uniform(-limit, limit);
      }
    }
    return w;
  };
  Params p;
  const int h = cfg.hidden_dim;
  if (cfg.architecture == Architecture::kGcn) {
    p.W = {glorot(in_dim, h), glorot(h, num_classes)};
  } else {
    p.W = {glorot(in_dim, h), glorot(in_dim, h), glorot(h, num_classes),
           glorot(h, num_classes)};
  }
  p.b = {VectorXd::Zero(h), VectorXd::Zero(num_classes)};
  return p;
}

struct ForwardCache {
  MatrixXd x;        // input
  MatrixXd mx;       // neighbor mean of input (SAGE)
  MatrixXd z1;       // pre-activation, layer 1
  MatrixXd h1;       // post-activation (after dropout if any)
  MatrixXd mh1;      // neighbor mean of h1 (SAGE)
  MatrixXd logits;
  MatrixXd dropout_mask;  // empty when dropout is off
};

MatrixXd relu(const MatrixXd& z) { return z.cwiseMax(0.0); }

void layer1_forward(const ModelConfig& cfg, const Params& p,
                    const Operators& ops, ForwardCache& cache) {
  if (cfg.architecture == Architecture::kGcn) {
    cache.z1 = ops.prop * (cache.x * p.W[0]);
  } else {
    cache.mx = ops.neighbor_mean * cache.x;
    cache.z1 = cache.x * p.W[0] + cache.mx * p.W[1];
  }
  cache.z1.rowwise() += p.b[0].transpose();
  cache.h1 = relu(cache.z1);
}

void layer2_forward(const ModelConfig& cfg, const Params& p,
                    const Operators& ops, ForwardCache& cache) {
  if (cfg.architecture == Architecture::kGcn) {
    cache.logits = ops.prop * (cache.h1 * p.W[1]);
  } else {
    cache.mh1 = ops.neighbor_mean * cache.h1;
    cache.logits = cache.h1 * p.W[2] + cache.mh1 * p.W[3];
  }
  cache.logits.rowwise() += p.b[1].transpose();
}

ForwardCache forward(const ModelConfig& cfg, const Params& p,
                     const Operators& ops, const MatrixXd& x,
                     Rng* dropout_rng) {
  ForwardCache cache;
  cache.x = x;
  layer1_forward(cfg, p, ops, cache);
  if (cfg.dropout > 0.0 && dropout_rng != nullptr) {
    const double keep = 1.0 - cfg.dropout;
    cache.dropout_mask.resize(cache.h1.rows(), cache.h1.cols());
    for (Eigen::Index i = 0; i < cache.h1.rows(); ++i) {
      for (Eigen::Index j = 0; j < cache.h1.cols(); ++j) {
        cache.dropout_mask(i, j) =
            dropout_rng->bernoulli(keep) ? 1.0 / keep : 0.0;
      }
    }
    cache.h1 = cache.h1.cwiseProduct(cache.dropout_mask);
  }
  layer2_forward(cfg, p, ops, cache);
  return cache;
}

// Row-wise stable softmax.
MatrixXd softmax(const MatrixXd& logits) {
  MatrixXd shifted = logits.colwise() - logits.rowwise().maxCoeff();
  MatrixXd expd = shifted.array().exp();
  return expd.array().colwise() / expd.rowwise().sum().array();
}

// Mean cross-entropy over masked rows; returns loss and fills dlogits.
double masked_cross_entropy(const MatrixXd& logits, const VectorXi& targets,
                            const Mask& mask, MatrixXd* dlogits) {
  MatrixXd probs = softmax(logits);
  std::int64_t count = 0;
  double loss = 0.0;
  if (dlogits != nullptr) {
    dlogits->setZero(logits.rows(), logits.cols());
  }
  for (Eigen::Index v = 0; v < logits.rows(); ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    ++count;
    double pv = std::max(probs(v, targets[v]), 1e-300);
    loss -= std::log(pv);
    if (dlogits != nullptr) {
      dlogits->row(v) = probs.row(v);
      (*dlogits)(v, targets[v]) -= 1.0;
    }
  }
  if (count == 0) throw std::invalid_argument("empty mask in loss");
  if (dlogits != nullptr) *dlogits /= static_cast<double>(count);
  return loss / static_cast<double>(count);
}

Params backward(const ModelConfig& cfg, const Params& p, const Operators& ops,
                const ForwardCache& cache, const MatrixXd& dlogits) {
  Params grads;
  grads.W.resize(p.W.size());
  grads.b.resize(p.b.size());
  grads.b[1] = dlogits.colwise().sum();

  MatrixXd dh1;
  if (cfg.architecture == Architecture::kGcn) {
    // logits = P (h1 W2) + b2 with P symmetric.
    MatrixXd dm = ops.prop * dlogits;
    grads.W[1] = cache.h1.transpose() * dm;
    dh1 = dm * p.W[1].transpose();
  } else {
    grads.W[2] = cache.h1.transpose() * dlogits;
    grads.W[3] = cache.mh1.transpose() * dlogits;
    dh1 = dlogits * p.W[2].transpose() +
          ops.neighbor_mean.transpose() * (dlogits * p.W[3].transpose());
  }

  if (cache.dropout_mask.size() > 0) {
    dh1 = dh1.cwiseProduct(cache.dropout_mask);
  }
  MatrixXd dz1 = dh1.cwiseProduct(
      (cache.z1.array() > 0.0).cast<double>().matrix());
  grads.b[0] = dz1.colwise().sum();

  if (cfg.architecture == Architecture::kGcn) {
    MatrixXd dn = ops.prop * dz1;
    grads.W[0] = cache.x.transpose() * dn;
  } else {
    grads.W[0] = cache.x.transpose() * dz1;
    grads.W[1] = cache.mx.transpose() * dz1;
  }
  return grads;
}

Operators make_operators(const ModelConfig& cfg, const Graph& graph) {
  Operators ops;
  if (cfg.architecture == Architecture::kGcn) {
    ops.prop = sym_normalized_adjacency(graph);
  } else {
    ops.neighbor_mean = neighbor_mean_operator(graph);
  }
  return ops;
}

double masked_accuracy(const MatrixXd& logits, const VectorXi& labels,
                       const Mask& mask) {
  std::int64_t correct = 0, count = 0;
  for (Eigen::Index v = 0; v < logits.rows(); ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    int best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(v, c) > logits(v, best)) best = static_cast<int>(c);
    }
    correct += best == labels[v];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empty mask in evaluate");
  return static_cast<double>(correct) / static_cast<double>(count);
}

}  // namespace

std::string to_string(Architecture arch) {
  return arch == Architecture::kGcn ? "gcn" : "sage";
}

Architecture architecture_from_string(const std::string& name) {
  if (name == "gcn") return Architecture::kGcn;
  if (name == "sage") return Architecture::kSage;
  throw std::invalid_argument("unknown architecture '" + name +
                              "' (expected gcn or sage)");
}

TrainedModel train(const Dataset& dataset, const ModelConfig& model_config,
                   const TrainConfig& train_config,
                   const Eigen::MatrixXd& input_features,
                   const Eigen::VectorXi& pseudo_labels) {
  if (input_features.rows() != dataset.num_nodes()) {
    throw std::invalid_argument("train: feature rows != num_nodes");
  }
  if (pseudo_labels.size() != dataset.num_nodes()) {
    throw std::invalid_argument("train: pseudo label count != num_nodes");
  }
  if (train_config.max_epochs < 1) {
    throw std::invalid_argument("train: max_epochs must be >= 1");
  }

  Rng root(train_config.seed);
  Rng init_rng = root.stream("train/init");
  Params params = glorot_init(model_config,
                              static_cast<int>(input_features.cols()),
                              dataset.num_classes, init_rng);
  Operators ops = make_operators(model_config, dataset.graph);

  TrainedModel model;
  model.config = model_config;
  double best_val = -1.0;
  Params best_params = params;
  int epochs_since_best = 0;

  for (int epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    Rng dropout_rng =
        root.stream("train/dropout", static_cast<std::uint64_t>(epoch));
    ForwardCache cache =
        forward(model_config, params, ops, input_features,
                model_config.dropout > 0.0 ? &dropout_rng : nullptr);

    MatrixXd dlogits;
    double data_loss = masked_cross_entropy(cache.logits, pseudo_labels,
                                            dataset.train_mask, &dlogits);
    double reg = 0.0;
    for (const auto& w : params.W) reg += w.squaredNorm();
    double loss = data_loss + 0.5 * train_config.weight_decay * reg;
    if (!std::isfinite(loss)) {
      throw std::runtime_error("non-finite loss at epoch " +
                               std::to_string(epoch));
    }

    double train_acc =
        masked_accuracy(cache.logits, pseudo_labels, dataset.train_mask);
    double val_acc =
        masked_accuracy(cache.logits, dataset.labels, dataset.val_mask);
    model.history.push_back({epoch, loss, train_acc, val_acc});

    if (val_acc > best_val) {
      best_val = val_acc;
      best_params = params;
      epochs_since_best = 0;
    } else if (++epochs_since_best >= train_config.patience) {
      break;
    }

    Params grads = backward(model_config, params, ops, cache, dlogits);
    for (std::size_t i = 0; i < params.W.size(); ++i) {
      params.W[i] -= train_config.learning_rate *
                     (grads.W[i] + train_config.weight_decay * params.W[i]);
    }
    for (std::size_t i = 0; i < params.b.size(); ++i) {
      params.b[i] -= train_config.learning_rate * grads.b[i];
    }
  }

  model.weights = best_params.W;
  model.biases = best_params.b;
  return model;
}

Eigen::MatrixXd forward_logits(const TrainedModel& model, const Graph& graph,
                               const Eigen::MatrixXd& input_features) {
  Params params{model.weights, model.biases};
  Operators ops = make_operators(model.config, graph);
  ForwardCache cache =
      forward(model.config, params, ops, input_features, nullptr);
  return cache.logits;
}

double evaluate(const TrainedModel& model, const Graph& graph,
                const Eigen::MatrixXd& input_features,
                const Eigen::VectorXi& labels, const Mask& mask) {
  return masked_accuracy(forward_logits(model, graph, input_features), labels,
                         mask);
}

double grad_check(const ModelConfig& model_config, const Dataset& tiny_dataset,
                  std::uint64_t seed) {
  ModelConfig cfg = model_config;
  cfg.dropout = 0.0;  // finite differences need a deterministic forward pass
  Rng root(seed);
  Rng init_rng = root.stream("gradcheck/init");
  Params params = glorot_init(cfg, tiny_dataset.dim(),
                              tiny_dataset.num_classes, init_rng);
  Operators ops = make_operators(cfg, tiny_dataset.graph);
  const VectorXi& targets = tiny_dataset.labels;
  const Mask& mask = tiny_dataset.train_mask;

  auto loss_at = [&](const Params& p) {
    ForwardCache cache = forward(cfg, p, ops, tiny_dataset.features, nullptr);
    return masked_cross_entropy(cache.logits, targets, mask, nullptr);
  };

  ForwardCache cache =
      forward(cfg, params, ops, tiny_dataset.features, nullptr);
  MatrixXd dlogits;
  masked_cross_entropy(cache.logits, targets, mask, &dlogits);
  Params analytic = backward(cfg, params, ops, cache, dlogits);

  const double h = 1e-5;
  double max_rel = 0.0;
  auto check_entry = [&](double& entry, double analytic_grad) {
    const double saved = entry;
    entry = saved + h;
    double up = loss_at(params);
    entry = saved - h;
    double down = loss_at(params);
    entry = saved;
    double numeric = (up - down) / (2.0 * h);
    double denom = std::max({std::abs(analytic_grad), std::abs(numeric), 1e-4});
    max_rel = std::max(max_rel, std::abs(analytic_grad - numeric) / denom);
  };
  for (std::size_t k = 0; k < params.W.size(); ++k) {
    for (Eigen::Index i = 0; i < params.W[k].rows(); ++i) {
      for (Eigen::Index j = 0; j < params.W[k].cols(); ++j) {
        check_entry(params.W[k](i, j), analytic.W[k](i, j));
      }
    }
  }
  for (std::size_t k = 0; k < params.b.size(); ++k) {
    for (Eigen::Index i = 0; i < params.b[k].size(); ++i) {
      check_entry(params.b[k][i], analytic.b[k][i]);
    }
  }
  return max_rel;
}

void save_model(const TrainedModel& model, const std::filesystem::path& file) {
  nlohmann::json j;
  j["architecture"] = to_string(model.config.architecture);
  j["hidden_dim"] = model.config.hidden_dim;
  j["dropout"] = model.config.dropout;
  auto matrix_to_json = [](const MatrixXd& m) {
    nlohmann::json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    std::vector<double> data(m.data(), m.data() + m.size());
    out["data"] = data;  // column-major
    return out;
  };
  for (const auto& w : model.weights) j["weights"].push_back(matrix_to_json(w));
  for (const auto& b : model.biases) {
    j["biases"].push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

TrainedModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  nlohmann::json j;
  in >> j;
  TrainedModel model;
  model.config.architecture =
      architecture_from_string(j.at("architecture").get<std::string>());
  model.config.hidden_dim = j.at("hidden_dim").get<int>();
  model.config.dropout = j.at("dropout").get<double>();
  for (const auto& wj : j.at("weights")) {
    auto rows = wj.at("rows").get<Eigen::Index>();
    auto cols = wj.at("cols").get<Eigen::Index>();
    auto data = wj.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw std::runtime_error("weight shape mismatch in " + file.string());
    }
    model.weights.push_back(Eigen::Map<MatrixXd>(data.data(), rows, cols));
  }
  for (const auto& bj : j.at("biases")) {
    auto data = bj.get<std::vector<double>>();
    model.biases.push_back(Eigen::Map<VectorXd>(
        data.data(), static_cast<Eigen::Index>(data.size())));
  }
  return model;
}

}  // namespace lpgnn
