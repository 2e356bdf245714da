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

#include <doctest.h>
#include <sstream>
#include <string>
#include <vector>

namespace lpgnn {
namespace {

ExperimentConfig fast_config() {
  ExperimentConfig cfg;
  cfg.synthetic.num_nodes = 120;
  cfg.synthetic.num_classes = 2;
  cfg.synthetic.dim = 8;
  cfg.synthetic.intra_edge_prob = 0.2;
  cfg.synthetic.inter_edge_prob = 0.02;
  cfg.max_epochs = 40;
  cfg.patience = 40;
  cfg.seed = 3;
  return cfg;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Blank the wall-time column so byte comparisons ignore timing jitter.
std::string strip_wall_time(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.rfind(',');
    out += line.substr(0, pos) + "\n";
  }
  return out;
}

TEST_CASE("CSV header is fixed") {
  CHECK(std::string(kCsvHeader) ==
        "dataset,arch,eps_x,eps_y,m,k_x,k_y,attack,attack_param,defense,"
        "seed,repeat,test_accuracy,cosine,mean_fd,success_rate,"
        "num_inferences,wall_time_s");
}

TEST_CASE("baseline rows carry the config and an accuracy") {
  ExperimentConfig cfg = fast_config();
  cfg.repeats = 2;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    CHECK(row.repeat == i);
    CHECK(row.effective_m >= 1);
    CHECK(row.effective_m <= 8);
    REQUIRE(row.test_accuracy.has_value());
    CHECK(*row.test_accuracy >= 0.0);
    CHECK(*row.test_accuracy <= 1.0);
    CHECK_FALSE(row.cosine.has_value());
    CHECK_FALSE(row.success_rate.has_value());
    CHECK(row.wall_time_s > 0.0);

    auto fields = split_fields(to_csv_row(row));
    REQUIRE(fields.size() == 18);
    CHECK(fields[0] == cfg.dataset_label());
    CHECK(fields[1] == "gcn");
    CHECK(fields[7] == "none");
    CHECK(fields[9] == "off");
    CHECK(fields[11] == std::to_string(i));
    CHECK(fields[13].empty());  // cosine blank in a baseline row
    CHECK(fields[15].empty());  // success_rate blank
  }
}

TEST_CASE("inference rows populate cosine and mean_fd") {
  ExperimentConfig cfg = fast_config();
  cfg.attack = AttackKind::kInfer;
  cfg.attack_param = 10;  // ten top-degree targets
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].cosine.has_value());
  CHECK(rows[0].mean_fd.has_value());
  CHECK(rows[0].num_inferences == 10);
  CHECK_FALSE(rows[0].test_accuracy.has_value());
}

TEST_CASE("poison rows populate success metrics") {
  ExperimentConfig cfg = fast_config();
  cfg.attack = AttackKind::kPoison;
  cfg.attack_param = 0.2;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].poisoned_targets == 24);  // ceil(0.2 * 120)
  CHECK(rows[0].num_inferences.has_value());
  if (rows[0].success_rate.has_value()) {
    CHECK(*rows[0].success_rate >= 0.0);
    CHECK(*rows[0].success_rate <= 1.0);
  }
}

TEST_CASE("defense zeroes poison inferences and reports detections") {
  ExperimentConfig cfg = fast_config();
  cfg.attack = AttackKind::kPoison;
  cfg.attack_param = 0.2;
  cfg.defense_enabled = true;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].defense_detections >= rows[0].poisoned_targets);
  CHECK(*rows[0].num_inferences == 0);
  CHECK_FALSE(rows[0].success_rate.has_value());
}

TEST_CASE("sweep output is byte-deterministic apart from wall time") {
  ExperimentConfig cfg = fast_config();
  std::string a = run_sweep(cfg, "eps_x", {1.0, 4.0});
  std::string b = run_sweep(cfg, "eps_x", {1.0, 4.0});
  CHECK(strip_wall_time(a) == strip_wall_time(b));
  // Header plus two rows.
  CHECK(std::count(a.begin(), a.end(), '\n') == 3);
  CHECK(a.rfind(kCsvHeader, 0) == 0);
}

TEST_CASE("unknown sweep axis is rejected") {
  CHECK_THROWS_AS(run_sweep(fast_config(), "gamma", {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(fast_config(), "rate", {}), std::invalid_argument);
}

TEST_CASE("report aggregates repeats with mean and std") {
  std::istringstream csv(
      std::string(kCsvHeader) + "\n" +
      "synth,gcn,8,4,3,4,4,none,0,off,1,0,0.80,,,,,0.1\n" +
      "synth,gcn,8,4,3,4,4,none,0,off,1,1,0.90,,,,,0.1\n" +
      "synth,gcn,8,4,3,4,4,none,0,off,1,2,1.00,,,,,0.1\n");
  std::string table = report_csv(csv);
  // Mean 0.9, sample std 0.1.
  CHECK(table.find("0.900000") != std::string::npos);
  CHECK(table.find("0.100000") != std::string::npos);
  CHECK(table.find("n=3") != std::string::npos);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = fast_config();
  cfg.eps_x = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = fast_config();
  cfg.attack = AttackKind::kFlip;
  cfg.attack_param = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = fast_config();
  cfg.repeats = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("effective_m heuristic") {
  ExperimentConfig cfg = fast_config();
  cfg.m = 0;
  cfg.eps_x = 8.0;
  CHECK(cfg.effective_m(16) == 3);  // floor(8 / 2.18) = 3
  cfg.eps_x = 1.0;
  CHECK(cfg.effective_m(16) == 1);
  cfg.eps_x = 100.0;
  CHECK(cfg.effective_m(4) == 4);
  cfg.m = 2;
  CHECK(cfg.effective_m(16) == 2);
}

TEST_CASE("attack names round-trip") {
  for (auto kind : {AttackKind::kNone, AttackKind::kInject, AttackKind::kFlip,
                    AttackKind::kInfer, AttackKind::kPoison}) {
    CHECK(attack_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(attack_from_string("ddos"), std::invalid_argument);
}

}  // namespace
}  // namespace lpgnn
