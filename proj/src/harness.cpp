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

#include "lpgnn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lpgnn/attacks.hpp"
#include "lpgnn/ldp.hpp"
#include "lpgnn/propagation.hpp"
#include "lpgnn/rng.hpp"

namespace lpgnn {
namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

bool is_binary_dataset(const Dataset& ds) {
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      double v = ds.features(i, j);
      if (v != ds.alpha && v != ds.beta) return false;
    }
  }
  return true;
}

struct PipelineOutput {
  Dataset pipeline_dataset;           // post-attack view the server trains on
  Eigen::MatrixXd rectified;          // per-node rectified responses
  std::vector<PoisonObservation> poison_observations;
  std::vector<NodeId> poison_targets;
  std::int64_t defense_detections = 0;
  std::int64_t encoder_out_of_range = 0;
};

}  // namespace

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kInject: return "inject";
    case AttackKind::kFlip: return "flip";
    case AttackKind::kInfer: return "infer";
    case AttackKind::kPoison: return "poison";
  }
  throw std::logic_error("unreachable");
}

AttackKind attack_from_string(const std::string& name) {
  if (name == "none") return AttackKind::kNone;
  if (name == "inject") return AttackKind::kInject;
  if (name == "flip") return AttackKind::kFlip;
  if (name == "infer") return AttackKind::kInfer;
  if (name == "poison") return AttackKind::kPoison;
  throw std::invalid_argument("unknown attack '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (!(eps_x > 0.0)) throw std::invalid_argument("eps_x must be > 0");
  if (!(eps_y > 0.0)) throw std::invalid_argument("eps_y must be > 0");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (k_x < 0 || k_y < 0) throw std::invalid_argument("k_x/k_y must be >= 0");
  if (m < 0) throw std::invalid_argument("m must be >= 0 (0 = auto)");
  switch (attack) {
    case AttackKind::kNone:
      break;
    case AttackKind::kInject:
    case AttackKind::kFlip:
    case AttackKind::kPoison:
      if (!(attack_param > 0.0 && attack_param <= 1.0)) {
        throw std::invalid_argument("attack rate must lie in (0, 1]");
      }
      break;
    case AttackKind::kInfer:
      if (attack_param < 1.0) {
        throw std::invalid_argument("infer attack needs a target count >= 1");
      }
      break;
  }
  if (dataset_path.empty()) synthetic.validate();
}

int ExperimentConfig::effective_m(int dim) const {
  if (m > 0) return std::min(m, dim);
  // Variance-motivated default: roughly one sampled dimension per ~2.2 units
  // of budget, clamped to [1, d].
  auto star = static_cast<int>(std::floor(eps_x / 2.18));
  return std::max(1, std::min(dim, star));
}

std::string ExperimentConfig::dataset_label() const {
  if (!dataset_path.empty()) return dataset_path;
  return "synthetic-n" + std::to_string(synthetic.num_nodes) + "-c" +
         std::to_string(synthetic.num_classes) + "-d" +
         std::to_string(synthetic.dim);
}

namespace {

PipelineOutput run_pipeline(const ExperimentConfig& config,
                            const Dataset& clean, const Rng& rep_rng) {
  PipelineOutput out;
  Dataset attacked = clean;

  // Pre-LDP attack.
  switch (config.attack) {
    case AttackKind::kNone:
    case AttackKind::kInfer:
      break;
    case AttackKind::kInject: {
      Rng attack_rng = rep_rng.stream("attack/inject");
      NodeInjectionConfig cfg;
      cfg.rate = config.attack_param;
      cfg.binary_features = is_binary_dataset(clean);
      auto specs =
          plan_injection(clean.graph, clean.dim(), clean.num_classes,
                         clean.alpha, clean.beta, cfg, attack_rng);
      attacked =
          add_nodes_with_edges(clean, specs, config.injected_in_train);
      break;
    }
    case AttackKind::kFlip: {
      Rng attack_rng = rep_rng.stream("attack/flip");
      LabelFlipConfig cfg;
      cfg.rate = config.attack_param;
      attacked = flip_labels(clean, cfg, attack_rng);
      break;
    }
    case AttackKind::kPoison: {
      auto n_targets = static_cast<NodeId>(std::ceil(
          config.attack_param * static_cast<double>(clean.num_nodes())));
      out.poison_targets = top_k_by_degree(clean.graph, n_targets);
      MbmParams params(config.eps_x, clean.alpha, clean.beta, clean.dim(),
                       config.effective_m(clean.dim()));
      attacked.features = apply_poison(clean.features, out.poison_targets,
                                       compute_poison(params));
      break;
    }
  }

  const NodeId n = attacked.num_nodes();
  const int d = attacked.dim();

  if (!config.ldp_enabled) {
    out.rectified = attacked.features;
    out.pipeline_dataset = std::move(attacked);
    return out;
  }

  MbmParams params(config.eps_x, attacked.alpha, attacked.beta, d,
                   config.effective_m(d));
  RrParams rr(config.eps_y, attacked.num_classes);
  const double midpoint = (attacked.alpha + attacked.beta) / 2.0;

  std::vector<std::uint8_t> flagged(static_cast<std::size_t>(n), 0);
  out.rectified.resize(n, d);
  Eigen::VectorXi noisy_labels(n);
  EncoderCounters counters;

  for (NodeId v = 0; v < n; ++v) {
    Eigen::VectorXd row = attacked.features.row(v).transpose();
    if (config.defense_enabled) {
      auto report = validate_feature_domain(row, attacked.alpha, attacked.beta);
      if (!report.ok()) {
        flagged[static_cast<std::size_t>(v)] = 1;
        ++out.defense_detections;
        row.setConstant(midpoint);
      }
    }
    Rng enc_rng = rep_rng.stream("mbm", static_cast<std::uint64_t>(v));
    EncodedVector enc = multibit_encode(row, params, enc_rng, &counters);
    out.rectified.row(v) = multibit_rectify(enc, params).transpose();

    Rng rr_rng = rep_rng.stream("rr", static_cast<std::uint64_t>(v));
    noisy_labels[v] = randomized_response(attacked.labels[v], rr, rr_rng);

    if (config.attack == AttackKind::kPoison &&
        !flagged[static_cast<std::size_t>(v)]) {
      if (std::find(out.poison_targets.begin(), out.poison_targets.end(), v) !=
          out.poison_targets.end()) {
        out.poison_observations.push_back({v, enc});
      }
    }
  }
  out.encoder_out_of_range = counters.out_of_range_params;

  attacked.labels = noisy_labels;  // the server only ever sees noisy labels
  out.pipeline_dataset = std::move(attacked);
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();

  Rng root(config.seed);
  Dataset clean =
      config.dataset_path.empty()
          ? generate_synthetic(config.synthetic, root.stream("data").seed())
          : load_dataset(config.dataset_path);

  std::vector<ResultRow> rows;
  rows.reserve(static_cast<std::size_t>(config.repeats));

  for (int repeat = 0; repeat < config.repeats; ++repeat) {
    auto started = std::chrono::steady_clock::now();
    Rng rep_rng = root.stream("repeat", static_cast<std::uint64_t>(repeat));

    ResultRow row;
    row.config = config;
    row.repeat = repeat;
    row.effective_m = config.effective_m(clean.dim());

    PipelineOutput pipe = run_pipeline(config, clean, rep_rng);
    row.defense_detections = pipe.defense_detections;
    row.encoder_out_of_range = pipe.encoder_out_of_range;
    row.poisoned_targets =
        static_cast<std::int64_t>(pipe.poison_targets.size());

    const Dataset& view = pipe.pipeline_dataset;

    switch (config.attack) {
      case AttackKind::kNone:
      case AttackKind::kInject:
      case AttackKind::kFlip: {
        Eigen::MatrixXd x = kprop(pipe.rectified, view.graph, config.k_x);
        Eigen::VectorXi pseudo = drop_pseudo_labels(
            view.labels, view.graph, config.k_y, view.num_classes);

        ModelConfig model_cfg;
        model_cfg.architecture = config.architecture;
        model_cfg.hidden_dim = config.hidden_dim;
        model_cfg.dropout = config.dropout;
        TrainConfig train_cfg;
        train_cfg.learning_rate = config.learning_rate;
        train_cfg.weight_decay = config.weight_decay;
        train_cfg.max_epochs = config.max_epochs;
        train_cfg.patience = config.patience;
        train_cfg.seed = rep_rng.stream("train").seed();

        TrainedModel model = train(view, model_cfg, train_cfg, x, pseudo);

        // Test accuracy is always measured against the clean labels; attacks
        // only corrupt what the pipeline sees.
        Eigen::VectorXi eval_labels = view.labels;
        eval_labels.head(clean.num_nodes()) = clean.labels;
        Mask eval_mask(static_cast<std::size_t>(view.num_nodes()), 0);
        for (NodeId v = 0; v < clean.num_nodes(); ++v) {
          eval_mask[static_cast<std::size_t>(v)] =
              clean.test_mask[static_cast<std::size_t>(v)];
        }
        row.test_accuracy =
            evaluate(model, view.graph, x, eval_labels, eval_mask);
        break;
      }
      case AttackKind::kInfer: {
        auto k = static_cast<NodeId>(config.attack_param);
        auto targets = top_k_by_degree(clean.graph, std::min(k, clean.num_nodes()));
        InferenceResult result = infer_features_mean(
            pipe.rectified, clean.graph, targets, clean.features);
        row.cosine = result.cosine.mean();
        row.mean_fd = result.mean_fd.mean();
        row.num_inferences = static_cast<std::int64_t>(targets.size());
        break;
      }
      case AttackKind::kPoison: {
        MbmParams params(config.eps_x, clean.alpha, clean.beta, clean.dim(),
                         config.effective_m(clean.dim()));
        ValueDomain domain = is_binary_dataset(clean) ? ValueDomain::kBinary
                                                      : ValueDomain::kGeneral;
        PoisonInferenceResult result = poison_inference(
            pipe.poison_observations, params, domain, clean.features);
        row.num_inferences = result.num_inferences;
        row.exact_value_verdicts = result.num_exact_value_verdicts;
        if (result.defined()) row.success_rate = result.success_rate;
        break;
      }
    }

    row.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - started)
                          .count();
    rows.push_back(std::move(row));
  }
  return rows;
}

const char kCsvHeader[] =
    "dataset,arch,eps_x,eps_y,m,k_x,k_y,attack,attack_param,defense,seed,"
    "repeat,test_accuracy,cosine,mean_fd,success_rate,num_inferences,"
    "wall_time_s";

std::string to_csv_row(const ResultRow& row) {
  const ExperimentConfig& c = row.config;
  std::ostringstream out;
  out << c.dataset_label() << ',' << to_string(c.architecture) << ','
      << fmt(c.eps_x) << ',' << fmt(c.eps_y) << ',' << row.effective_m << ','
      << c.k_x << ',' << c.k_y << ',' << to_string(c.attack) << ','
      << fmt(c.attack_param) << ',' << (c.defense_enabled ? "on" : "off")
      << ','
      << c.seed << ',' << row.repeat << ',';
  auto opt = [&](const std::optional<double>& v, const char* spec = "%.6f") {
    if (v.has_value()) out << fmt(*v, spec);
    out << ',';
  };
  opt(row.test_accuracy);
  opt(row.cosine);
  opt(row.mean_fd);
  opt(row.success_rate);
  if (row.num_inferences.has_value()) out << *row.num_inferences;
  out << ',' << fmt(row.wall_time_s, "%.3f");
  return out.str();
}

std::string run_sweep(const ExperimentConfig& base, const std::string& axis,
                      const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("sweep needs at least one value");
  }
  auto apply = [&](ExperimentConfig& cfg, double value) {
    if (axis == "rate") {
      cfg.attack_param = value;
    } else if (axis == "eps_x") {
      cfg.eps_x = value;
    } else if (axis == "eps_y") {
      cfg.eps_y = value;
    } else if (axis == "k_x") {
      cfg.k_x = static_cast<int>(value);
    } else if (axis == "k_y") {
      cfg.k_y = static_cast<int>(value);
    } else if (axis == "m") {
      cfg.m = static_cast<int>(value);
    } else {
      throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    }
  };

  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (double value : values) {
    ExperimentConfig cfg = base;
    apply(cfg, value);
    for (const ResultRow& row : run_experiment(cfg)) {
      out << to_csv_row(row) << "\n";
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  // Trailing empty field after a final comma.
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

struct Stats {
  std::vector<double> values;
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double stddev() const {
    if (values.size() < 2) return 0.0;
    double mu = mean(), s = 0.0;
    for (double v : values) s += (v - mu) * (v - mu);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

}  // namespace

std::string report_csv(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) throw std::runtime_error("empty CSV");
  auto header = split_csv_line(line);
  const std::vector<std::string> metric_names = {
      "test_accuracy", "cosine", "mean_fd", "success_rate"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"dataset", "repeat", "wall_time_s"}) {
    if (col.find(required) == col.end()) {
      throw std::runtime_error("CSV missing column " + std::string(required));
    }
  }
  std::size_t repeat_col = col["repeat"];
  std::size_t wall_col = col["wall_time_s"];

  // Group key: every config column (all except repeat, metrics, wall time).
  std::vector<std::size_t> key_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    bool is_metric = std::find(metric_names.begin(), metric_names.end(),
                               header[i]) != metric_names.end() ||
                     header[i] == "num_inferences";
    if (i != repeat_col && i != wall_col && !is_metric) key_cols.push_back(i);
  }

  std::map<std::string, std::map<std::string, Stats>> groups;
  std::vector<std::string> group_order;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() < header.size()) cells.resize(header.size());
    std::string key;
    for (std::size_t i : key_cols) {
      if (!key.empty()) key += ",";
      key += cells[i];
    }
    if (groups.find(key) == groups.end()) group_order.push_back(key);
    auto& metrics = groups[key];
    for (const auto& name : metric_names) {
      auto it = col.find(name);
      if (it == col.end()) continue;
      const std::string& cell = cells[it->second];
      if (!cell.empty()) metrics[name].values.push_back(std::stod(cell));
    }
  }

  std::ostringstream out;
  for (const auto& key : group_order) {
    out << key << "\n";
    for (const auto& [name, stats] : groups[key]) {
      out << "  " << name << ": " << fmt(stats.mean(), "%.6f") << " +/- "
          << fmt(stats.stddev(), "%.6f") << " (n=" << stats.values.size()
          << ")\n";
    }
  }
  return out.str();
}

ExperimentConfig experiment_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }

  ExperimentConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("dataset_path", cfg.dataset_path);
  get("eps_x", cfg.eps_x);
  get("eps_y", cfg.eps_y);
  get("m", cfg.m);
  get("k_x", cfg.k_x);
  get("k_y", cfg.k_y);
  get("attack_param", cfg.attack_param);
  get("defense_enabled", cfg.defense_enabled);
  get("ldp_enabled", cfg.ldp_enabled);
  get("injected_in_train", cfg.injected_in_train);
  get("hidden_dim", cfg.hidden_dim);
  get("dropout", cfg.dropout);
  get("learning_rate", cfg.learning_rate);
  get("weight_decay", cfg.weight_decay);
  get("max_epochs", cfg.max_epochs);
  get("patience", cfg.patience);
  get("seed", cfg.seed);
  get("repeats", cfg.repeats);
  if (j.contains("architecture")) {
    cfg.architecture =
        architecture_from_string(j.at("architecture").get<std::string>());
  }
  if (j.contains("attack")) {
    cfg.attack = attack_from_string(j.at("attack").get<std::string>());
  }
  if (j.contains("synthetic")) {
    const auto& s = j.at("synthetic");
    auto gets = [&](const char* key, auto& field) {
      if (s.contains(key)) {
        field = s.at(key).get<std::decay_t<decltype(field)>>();
      }
    };
    gets("num_nodes", cfg.synthetic.num_nodes);
    gets("num_classes", cfg.synthetic.num_classes);
    gets("dim", cfg.synthetic.dim);
    gets("intra_edge_prob", cfg.synthetic.intra_edge_prob);
    gets("inter_edge_prob", cfg.synthetic.inter_edge_prob);
    gets("feature_signal", cfg.synthetic.feature_signal);
    gets("train_fraction", cfg.synthetic.train_fraction);
    gets("val_fraction", cfg.synthetic.val_fraction);
    gets("test_fraction", cfg.synthetic.test_fraction);
  }
  return cfg;
}

}  // namespace lpgnn
