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

#ifndef LPGNN_HARNESS_HPP_
#define LPGNN_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpgnn/dataset.hpp"
#include "lpgnn/model.hpp"

namespace lpgnn {

enum class AttackKind { kNone, kInject, kFlip, kInfer, kPoison };

std::string to_string(AttackKind kind);
AttackKind attack_from_string(const std::string& name);

// One experiment point. Every field is echoed into the result rows so that
// any row can be rerun standalone.
struct ExperimentConfig {
  // Dataset: directory path, or the synthetic generator when empty.
  std::string dataset_path;
  SyntheticConfig synthetic;

  Architecture architecture = Architecture::kGcn;
  double eps_x = 8.0;
  double eps_y = 4.0;
  int m = 0;  // sampling parameter; 0 selects max(1, min(d, floor(eps_x/2.18)))
  int k_x = 4;
  int k_y = 4;

  AttackKind attack = AttackKind::kNone;
  // inject/flip: rate in (0,1]; poison: target fraction in (0,1];
  // infer: number of top-degree target nodes.
  double attack_param = 0.0;

  bool defense_enabled = false;
  // When false the pipeline runs non-private (no encoder, no randomized
  // response); used for the non-private baseline comparisons.
  bool ldp_enabled = true;
  // Injected nodes join the training loss by default.
  bool injected_in_train = true;

  int hidden_dim = 16;
  double dropout = 0.0;
  double learning_rate = 0.05;
  double weight_decay = 5e-4;
  int max_epochs = 300;
  int patience = 200;

  std::uint64_t seed = 1;
  int repeats = 1;

  void validate() const;
  int effective_m(int dim) const;
  std::string dataset_label() const;
};

struct ResultRow {
  ExperimentConfig config;
  int repeat = 0;
  int effective_m = 0;

  // Exactly the metrics relevant to the configured attack are set.
  std::optional<double> test_accuracy;
  std::optional<double> cosine;
  std::optional<double> mean_fd;
  std::optional<double> success_rate;  // unset also when undefined sentinel
  std::optional<std::int64_t> num_inferences;

  // Bookkeeping outside the fixed CSV schema.
  std::int64_t defense_detections = 0;
  std::int64_t poisoned_targets = 0;
  std::int64_t exact_value_verdicts = 0;
  std::int64_t encoder_out_of_range = 0;

  double wall_time_s = 0.0;
};

// Runs the full pipeline once per repeat:
// pre-LDP attack -> per-node encode + randomized response (with the defense
// check first when enabled) -> rectify -> KProp(k_x) -> pseudo labels(k_y)
// -> train -> evaluate; infer/poison runs execute their estimators on the
// captured responses instead of training. Deterministic per (config, seed,
// repeat index).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// Fixed schema; absent metrics are empty fields.
extern const char kCsvHeader[];
std::string to_csv_row(const ResultRow& row);

// One run_experiment per value, rows appended in axis order. Sweepable axes:
// rate (= attack_param), eps_x, eps_y, k_x, k_y, m. Returns the complete CSV
// document including the header.
std::string run_sweep(const ExperimentConfig& base, const std::string& axis,
                      const std::vector<double>& values);

// Aggregates a results CSV into a per-config mean +/- std table.
std::string report_csv(std::istream& csv);

// JSON (de)serialization of experiment configs for --config files.
ExperimentConfig experiment_config_from_json_file(const std::string& path);

}  // namespace lpgnn

#endif  // LPGNN_HARNESS_HPP_
