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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpgnn/dataset.hpp"
#include "lpgnn/harness.hpp"

namespace {

using lpgnn::ExperimentConfig;

void add_experiment_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--dataset", cfg.dataset_path,
                  "Dataset directory (omit to use the synthetic generator)");
  cmd->add_option("--nodes", cfg.synthetic.num_nodes, "Synthetic node count")
      ->capture_default_str();
  cmd->add_option("--classes", cfg.synthetic.num_classes,
                  "Synthetic class count")
      ->capture_default_str();
  cmd->add_option("--dim", cfg.synthetic.dim, "Synthetic feature dimension")
      ->capture_default_str();
  cmd->add_option("--intra", cfg.synthetic.intra_edge_prob,
                  "Synthetic intra-class edge probability")
      ->capture_default_str();
  cmd->add_option("--inter", cfg.synthetic.inter_edge_prob,
                  "Synthetic inter-class edge probability")
      ->capture_default_str();
  cmd->add_option("--signal", cfg.synthetic.feature_signal,
                  "Synthetic class-block feature probability")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--arch",
         [&cfg](const std::string& v) {
           cfg.architecture = lpgnn::architecture_from_string(v);
         },
         "Architecture: gcn | sage")
      ->default_str("gcn");
  cmd->add_option("--eps-x", cfg.eps_x, "Feature privacy budget")
      ->capture_default_str();
  cmd->add_option("--eps-y", cfg.eps_y, "Label privacy budget")
      ->capture_default_str();
  cmd->add_option("--m", cfg.m,
                  "Multi-bit sampling parameter (0 = auto: "
                  "max(1, min(d, floor(eps_x / 2.18))))")
      ->capture_default_str();
  cmd->add_option("--k-x", cfg.k_x, "Feature propagation hops")
      ->capture_default_str();
  cmd->add_option("--k-y", cfg.k_y, "Label propagation hops")
      ->capture_default_str();
  cmd->add_flag("--defense", cfg.defense_enabled,
                "Enable the client-side domain validation defense");
  cmd->add_flag("!--no-ldp", cfg.ldp_enabled,
                "Run the pipeline without any privacy mechanism");
  cmd->add_option("--hidden", cfg.hidden_dim, "Hidden dimension")
      ->capture_default_str();
  cmd->add_option("--dropout", cfg.dropout, "Dropout probability")
      ->capture_default_str();
  cmd->add_option("--lr", cfg.learning_rate, "Learning rate")
      ->capture_default_str();
  cmd->add_option("--weight-decay", cfg.weight_decay, "Weight decay")
      ->capture_default_str();
  cmd->add_option("--epochs", cfg.max_epochs, "Max training epochs")
      ->capture_default_str();
  cmd->add_option("--patience", cfg.patience, "Early-stopping patience")
      ->capture_default_str();
  cmd->add_option("--repeats", cfg.repeats, "Repeats per configuration")
      ->capture_default_str();
}

void write_csv(const std::string& path, const std::string& csv) {
  if (path.empty() || path == "-") {
    std::cout << csv;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv;
}

std::string rows_to_csv(const std::vector<lpgnn::ResultRow>& rows) {
  std::ostringstream out;
  out << lpgnn::kCsvHeader << "\n";
  for (const auto& row : rows) out << lpgnn::to_csv_row(row) << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laboratory for locally private GNNs and attacks on them"};
  app.require_subcommand(1);
  // Let --seed/--out/--config appear after the subcommand name too.
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out_path;
  std::string config_path;
  app.add_option("--seed", seed, "Root seed")->capture_default_str();
  app.add_option("--out", out_path, "Output path ('-' = stdout)");
  app.add_option("--config", config_path, "JSON experiment config file");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  lpgnn::SyntheticConfig syn;
  gen->add_option("--nodes", syn.num_nodes, "Node count")->capture_default_str();
  gen->add_option("--classes", syn.num_classes, "Class count")
      ->capture_default_str();
  gen->add_option("--dim", syn.dim, "Feature dimension")->capture_default_str();
  gen->add_option("--intra", syn.intra_edge_prob, "Intra-class edge prob")
      ->capture_default_str();
  gen->add_option("--inter", syn.inter_edge_prob, "Inter-class edge prob")
      ->capture_default_str();
  gen->add_option("--signal", syn.feature_signal, "Class-block feature prob")
      ->capture_default_str();

  // baseline
  auto* baseline =
      app.add_subcommand("baseline", "Run the pipeline without any attack");
  ExperimentConfig base_cfg;
  add_experiment_options(baseline, base_cfg);

  // attack
  auto* attack = app.add_subcommand("attack", "Run the pipeline under attack");
  attack->require_subcommand(1);
  ExperimentConfig attack_cfg;
  std::string attack_name;
  double rate = 0.1;
  double target_count = 10;
  for (const char* name : {"inject", "flip", "poison"}) {
    auto* sub = attack->add_subcommand(
        name, std::string("Attack: ") + name);
    add_experiment_options(sub, attack_cfg);
    sub->add_option("--rate", rate, "Attacked fraction of nodes")
        ->capture_default_str();
    sub->callback([&attack_name, name] { attack_name = name; });
  }
  {
    auto* sub = attack->add_subcommand("infer", "Attack: mean inference");
    add_experiment_options(sub, attack_cfg);
    sub->add_option("--targets", target_count, "Number of top-degree targets")
        ->capture_default_str();
    sub->callback([&attack_name] { attack_name = "infer"; });
  }

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter axis");
  ExperimentConfig sweep_cfg;
  add_experiment_options(sweep, sweep_cfg);
  std::string axis;
  std::vector<double> values;
  std::string sweep_attack = "none";
  sweep->add_option("--axis", axis, "rate | eps_x | eps_y | k_x | k_y | m")
      ->required();
  sweep->add_option("--values", values, "Axis values, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_option("--attack", sweep_attack, "none|inject|flip|infer|poison")
      ->capture_default_str();
  sweep->add_option("--rate", sweep_cfg.attack_param,
                    "Attack rate / target count when not the swept axis");

  // report
  auto* report = app.add_subcommand(
      "report", "Aggregate a results CSV into mean +/- std per config");
  std::string report_path;
  report->add_option("csv", report_path, "Results CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (out_path.empty()) throw std::runtime_error("gen-data requires --out");
      lpgnn::Dataset ds = lpgnn::generate_synthetic(syn, seed);
      lpgnn::save_dataset(ds, out_path);
      std::cout << "wrote dataset with " << ds.num_nodes() << " nodes, "
                << ds.graph.num_edges() << " edges to " << out_path << "\n";
    } else if (baseline->parsed()) {
      if (!config_path.empty()) base_cfg = lpgnn::experiment_config_from_json_file(config_path);
      base_cfg.seed = seed;
      base_cfg.attack = lpgnn::AttackKind::kNone;
      write_csv(out_path, rows_to_csv(lpgnn::run_experiment(base_cfg)));
    } else if (attack->parsed()) {
      if (!config_path.empty()) {
        attack_cfg = lpgnn::experiment_config_from_json_file(config_path);
      }
      attack_cfg.seed = seed;
      attack_cfg.attack = lpgnn::attack_from_string(attack_name);
      if (attack_cfg.attack_param == 0.0) {
        attack_cfg.attack_param =
            attack_name == "infer" ? target_count : rate;
      }
      write_csv(out_path, rows_to_csv(lpgnn::run_experiment(attack_cfg)));
    } else if (sweep->parsed()) {
      if (!config_path.empty()) {
        sweep_cfg = lpgnn::experiment_config_from_json_file(config_path);
      }
      sweep_cfg.seed = seed;
      sweep_cfg.attack = lpgnn::attack_from_string(sweep_attack);
      write_csv(out_path, lpgnn::run_sweep(sweep_cfg, axis, values));
    } else if (report->parsed()) {
      std::ifstream in(report_path);
      if (!in) throw std::runtime_error("cannot read " + report_path);
      std::cout << lpgnn::report_csv(in);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
