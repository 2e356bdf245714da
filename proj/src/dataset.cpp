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

#include "lpgnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace lpgnn {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& file, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(file.string() + ":" + std::to_string(line) + ": " +
                           what);
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("missing or unreadable file: " + file.string());
  return in;
}

// Shortest decimal that round-trips a double.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == back) return shorter;
  }
  return buf;
}

void check_fraction(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

void SyntheticConfig::validate() const {
  if (num_nodes < 1) throw std::invalid_argument("num_nodes must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (dim % num_classes != 0) {
    throw std::invalid_argument(
        "feature dimension (" + std::to_string(dim) +
        ") must be divisible by num_classes (" + std::to_string(num_classes) +
        ") so that every class owns an equal feature block");
  }
  check_fraction(intra_edge_prob, "intra_edge_prob");
  check_fraction(inter_edge_prob, "inter_edge_prob");
  check_fraction(feature_signal, "feature_signal");
  if (!(intra_edge_prob > inter_edge_prob)) {
    throw std::invalid_argument("intra_edge_prob must exceed inter_edge_prob");
  }
  double total = train_fraction + val_fraction + test_fraction;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

void Dataset::validate() const {
  graph.validate();
  if (features.rows() != graph.num_nodes) {
    throw std::logic_error("feature row count does not match num_nodes");
  }
  if (labels.size() != graph.num_nodes) {
    throw std::logic_error("label count does not match num_nodes");
  }
  if (!(alpha < beta)) throw std::logic_error("alpha must be < beta");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw std::logic_error("label out of range at node " + std::to_string(i));
    }
  }
  auto n = static_cast<std::size_t>(graph.num_nodes);
  if (train_mask.size() != n || val_mask.size() != n || test_mask.size() != n) {
    throw std::logic_error("mask length does not match num_nodes");
  }
  bool any_train = false, any_val = false, any_test = false;
  for (std::size_t i = 0; i < n; ++i) {
    int members = (train_mask[i] != 0) + (val_mask[i] != 0) + (test_mask[i] != 0);
    if (members > 1) {
      throw std::logic_error("masks overlap at node " + std::to_string(i));
    }
    any_train |= train_mask[i] != 0;
    any_val |= val_mask[i] != 0;
    any_test |= test_mask[i] != 0;
  }
  if (!any_train || !any_val || !any_test) {
    throw std::logic_error("each of train/val/test masks must be non-empty");
  }
}

bool Dataset::operator==(const Dataset& other) const {
  return graph.num_nodes == other.graph.num_nodes &&
         graph.adjacency == other.graph.adjacency &&
         features == other.features && labels == other.labels &&
         num_classes == other.num_classes && alpha == other.alpha &&
         beta == other.beta && train_mask == other.train_mask &&
         val_mask == other.val_mask && test_mask == other.test_mask;
}

Dataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  config.validate();
  Rng root(seed);

  const NodeId n = config.num_nodes;
  const int c = config.num_classes;
  const int d = config.dim;

  Dataset ds;
  ds.num_classes = c;
  ds.alpha = 0.0;
  ds.beta = 1.0;

  Rng label_rng = root.stream("synthetic/labels");
  ds.labels.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    ds.labels[v] = static_cast<int>(label_rng.uniform_int(0, c - 1));
  }

  Rng edge_rng = root.stream("synthetic/edges");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      double p = ds.labels[u] == ds.labels[v] ? config.intra_edge_prob
                                              : config.inter_edge_prob;
      if (edge_rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  ds.graph = Graph::from_edges(n, edges);

  const int block = d / c;
  Rng feat_rng = root.stream("synthetic/features");
  ds.features.resize(n, d);
  for (NodeId v = 0; v < n; ++v) {
    int cls = ds.labels[v];
    for (int j = 0; j < d; ++j) {
      bool in_block = j / block == cls;
      double p = in_block ? config.feature_signal : 1.0 - config.feature_signal;
      ds.features(v, j) = feat_rng.bernoulli(p) ? 1.0 : 0.0;
    }
  }

  // Seeded shuffle, then contiguous train/val/test slices.
  Rng split_rng = root.stream("synthetic/splits");
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(
        split_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  auto n_train = static_cast<std::size_t>(
      std::llround(config.train_fraction * static_cast<double>(n)));
  auto n_val = static_cast<std::size_t>(
      std::llround(config.val_fraction * static_cast<double>(n)));
  n_train = std::max<std::size_t>(n_train, 1);
  n_val = std::max<std::size_t>(n_val, 1);
  if (n_train + n_val + 1 > static_cast<std::size_t>(n)) {
    throw std::invalid_argument("split fractions leave no test nodes");
  }
  ds.train_mask.assign(static_cast<std::size_t>(n), 0);
  ds.val_mask.assign(static_cast<std::size_t>(n), 0);
  ds.test_mask.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    NodeId v = order[i];
    if (i < n_train) {
      ds.train_mask[static_cast<std::size_t>(v)] = 1;
    } else if (i < n_train + n_val) {
      ds.val_mask[static_cast<std::size_t>(v)] = 1;
    } else {
      ds.test_mask[static_cast<std::size_t>(v)] = 1;
    }
  }
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;

  // meta.json
  const auto meta_path = dir / "meta.json";
  json meta;
  {
    auto in = open_or_throw(meta_path);
    try {
      in >> meta;
    } catch (const json::exception& e) {
      fail(meta_path, 0, std::string("malformed JSON: ") + e.what());
    }
  }
  NodeId num_nodes = meta.at("num_nodes").get<NodeId>();
  int d = meta.at("d").get<int>();
  ds.num_classes = meta.at("num_classes").get<int>();
  ds.alpha = meta.at("alpha").get<double>();
  ds.beta = meta.at("beta").get<double>();
  if (num_nodes < 1 || d < 1 || ds.num_classes < 1 || !(ds.alpha < ds.beta)) {
    fail(meta_path, 0, "invalid meta values");
  }

  // edges.csv
  const auto edges_path = dir / "edges.csv";
  std::vector<std::pair<NodeId, NodeId>> edges;
  {
    auto in = open_or_throw(edges_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (lineno == 1) {
        if (line != "u,v") fail(edges_path, 1, "expected header 'u,v'");
        continue;
      }
      NodeId u, v;
      char comma;
      std::istringstream row(line);
      if (!(row >> u >> comma >> v) || comma != ',') {
        fail(edges_path, lineno, "malformed edge row '" + line + "'");
      }
      edges.emplace_back(u, v);
    }
  }
  try {
    ds.graph = Graph::from_edges(num_nodes, edges);
  } catch (const std::invalid_argument& e) {
    fail(edges_path, 0, e.what());
  }

  // features.csv
  const auto feat_path = dir / "features.csv";
  ds.features.resize(num_nodes, d);
  {
    auto in = open_or_throw(feat_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (lineno > static_cast<std::size_t>(num_nodes)) {
        fail(feat_path, lineno, "more feature rows than nodes");
      }
      std::istringstream row(line);
      std::string cell;
      int col = 0;
      while (std::getline(row, cell, ',')) {
        if (col >= d) fail(feat_path, lineno, "too many columns");
        char* end = nullptr;
        double value = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) {
          fail(feat_path, lineno, "malformed value '" + cell + "'");
        }
        if (value < ds.alpha || value > ds.beta) {
          fail(feat_path, lineno,
               "feature value " + cell + " outside declared range [" +
                   format_double(ds.alpha) + "," + format_double(ds.beta) + "]");
        }
        ds.features(static_cast<Eigen::Index>(lineno) - 1, col++) = value;
      }
      if (col != d) fail(feat_path, lineno, "expected " + std::to_string(d) +
                                                " columns, got " + std::to_string(col));
    }
    if (lineno != static_cast<std::size_t>(num_nodes)) {
      fail(feat_path, lineno, "expected " + std::to_string(num_nodes) + " rows");
    }
  }

  // labels.csv
  const auto labels_path = dir / "labels.csv";
  ds.labels.resize(num_nodes);
  {
    auto in = open_or_throw(labels_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (lineno > static_cast<std::size_t>(num_nodes)) {
        fail(labels_path, lineno, "more labels than nodes");
      }
      int label = 0;
      try {
        label = std::stoi(line);
      } catch (const std::exception&) {
        fail(labels_path, lineno, "malformed label '" + line + "'");
      }
      if (label < 0 || label >= ds.num_classes) {
        fail(labels_path, lineno,
             "label " + line + " >= num_classes (" +
                 std::to_string(ds.num_classes) + ")");
      }
      ds.labels[static_cast<Eigen::Index>(lineno) - 1] = label;
    }
    if (lineno != static_cast<std::size_t>(num_nodes)) {
      fail(labels_path, lineno, "expected " + std::to_string(num_nodes) + " rows");
    }
  }

  // splits.json
  const auto splits_path = dir / "splits.json";
  {
    auto in = open_or_throw(splits_path);
    json splits;
    try {
      in >> splits;
    } catch (const json::exception& e) {
      fail(splits_path, 0, std::string("malformed JSON: ") + e.what());
    }
    auto read_mask = [&](const char* key) {
      Mask mask(static_cast<std::size_t>(num_nodes), 0);
      for (NodeId v : splits.at(key).get<std::vector<NodeId>>()) {
        if (v < 0 || v >= num_nodes) {
          fail(splits_path, 0, std::string(key) + " id out of range");
        }
        mask[static_cast<std::size_t>(v)] = 1;
      }
      return mask;
    };
    ds.train_mask = read_mask("train");
    ds.val_mask = read_mask("val");
    ds.test_mask = read_mask("test");
  }

  ds.validate();
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write_or_throw = [&](const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
  };

  {
    json meta{{"num_nodes", dataset.num_nodes()},
              {"d", dataset.dim()},
              {"num_classes", dataset.num_classes},
              {"alpha", dataset.alpha},
              {"beta", dataset.beta}};
    auto out = write_or_throw(dir / "meta.json");
    out << meta.dump(2) << "\n";
  }
  {
    auto out = write_or_throw(dir / "edges.csv");
    out << "u,v\n";
    for (const auto& [u, v] : dataset.graph.edge_list()) {
      out << u << "," << v << "\n";
    }
  }
  {
    auto out = write_or_throw(dir / "features.csv");
    for (Eigen::Index i = 0; i < dataset.features.rows(); ++i) {
      for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
        if (j > 0) out << ",";
        out << format_double(dataset.features(i, j));
      }
      out << "\n";
    }
  }
  {
    auto out = write_or_throw(dir / "labels.csv");
    for (Eigen::Index i = 0; i < dataset.labels.size(); ++i) {
      out << dataset.labels[i] << "\n";
    }
  }
  {
    json splits{{"train", json::array()},
                {"val", json::array()},
                {"test", json::array()}};
    for (NodeId v = 0; v < dataset.num_nodes(); ++v) {
      auto i = static_cast<std::size_t>(v);
      if (dataset.train_mask[i]) splits["train"].push_back(v);
      if (dataset.val_mask[i]) splits["val"].push_back(v);
      if (dataset.test_mask[i]) splits["test"].push_back(v);
    }
    auto out = write_or_throw(dir / "splits.json");
    out << splits.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failure in " + dir.string());
  }
}

Dataset add_nodes_with_edges(const Dataset& dataset,
                             const std::vector<NodeSpec>& specs,
                             bool add_to_train) {
  const NodeId n_old = dataset.num_nodes();
  const int d = dataset.dim();
  for (const auto& spec : specs) {
    if (spec.features.size() != d) {
      throw std::invalid_argument("injected feature row has wrong length");
    }
    for (NodeId nb : spec.neighbors) {
      if (nb < 0 || nb >= n_old) {
        throw std::invalid_argument("injected neighbor id out of range: " +
                                    std::to_string(nb));
      }
    }
  }

  Dataset out = dataset;
  const auto n_new = n_old + static_cast<NodeId>(specs.size());
  out.graph.num_nodes = n_new;
  out.graph.adjacency.resize(static_cast<std::size_t>(n_new));
  out.features.conservativeResize(n_new, d);
  out.labels.conservativeResize(n_new);
  out.train_mask.resize(static_cast<std::size_t>(n_new), 0);
  out.val_mask.resize(static_cast<std::size_t>(n_new), 0);
  out.test_mask.resize(static_cast<std::size_t>(n_new), 0);

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& spec = specs[k];
    NodeId id = n_old + static_cast<NodeId>(k);
    out.features.row(id) = spec.features.transpose();
    out.labels[id] = spec.label;
    out.train_mask[static_cast<std::size_t>(id)] = add_to_train ? 1 : 0;
    auto& nbrs = out.graph.adjacency[static_cast<std::size_t>(id)];
    nbrs = spec.neighbors;
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (NodeId nb : nbrs) {
      auto& back = out.graph.adjacency[static_cast<std::size_t>(nb)];
      back.insert(std::lower_bound(back.begin(), back.end(), id), id);
    }
  }
  out.graph.validate();
  return out;
}

}  // namespace lpgnn
