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

#include <cmath>
#include <doctest.h>

#include "lpgnn/model.hpp"
#include "lpgnn/propagation.hpp"

namespace lpgnn {
namespace {

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

// Two 3-cliques joined by one bridge; class = clique membership and the
// one-hot-ish features make the task linearly separable.
Dataset toy_dataset() {
  Dataset ds;
  ds.graph = Graph::from_edges(
      6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
  ds.features = Eigen::MatrixXd::Zero(6, 2);
  for (int v = 0; v < 3; ++v) ds.features(v, 0) = 1.0;
  for (int v = 3; v < 6; ++v) ds.features(v, 1) = 1.0;
  ds.labels = Eigen::VectorXi(6);
  ds.labels << 0, 0, 0, 1, 1, 1;
  ds.num_classes = 2;
  ds.train_mask = {1, 0, 1, 1, 0, 1};
  ds.val_mask = {0, 1, 0, 0, 1, 0};
  ds.test_mask = {0, 1, 0, 0, 1, 0};
  return ds;
}

TEST_CASE("aggregation operators on tiny graphs") {
  SUBCASE("single node") {
    Graph g = Graph::from_edges(1, {});
    CHECK(Eigen::MatrixXd(mean_aggregation_operator(g))(0, 0) == 1.0);
    CHECK(Eigen::MatrixXd(sym_normalized_adjacency(g))(0, 0) == 1.0);
    CHECK(Eigen::MatrixXd(neighbor_mean_operator(g))(0, 0) == 0.0);
  }
  SUBCASE("2-clique") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    Eigen::MatrixXd mean = mean_aggregation_operator(g);
    Eigen::MatrixXd sym = sym_normalized_adjacency(g);
    Eigen::MatrixXd nbr = neighbor_mean_operator(g);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(mean(i, j) == doctest::Approx(0.5));
        CHECK(sym(i, j) == doctest::Approx(0.5));
        CHECK(nbr(i, j) == doctest::Approx(i == j ? 0.0 : 1.0));
      }
    }
  }
  SUBCASE("rows of the mean operator sum to one") {
    Graph g = path3();
    Eigen::MatrixXd mean = mean_aggregation_operator(g);
    for (int i = 0; i < 3; ++i) {
      CHECK(mean.row(i).sum() == doctest::Approx(1.0));
    }
    // Middle node averages all three.
    CHECK(mean(1, 0) == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("kprop basics") {
  Graph g = path3();
  Eigen::MatrixXd x(3, 2);
  x << 1, 4, 2, 5, 3, 6;

  SUBCASE("k=0 is the identity") { CHECK(kprop(x, g, 0) == x); }
  SUBCASE("constant columns are fixed points") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(3, 2, 7.0);
    CHECK(kprop(c, g, 5).isApprox(c));
  }
  SUBCASE("2-clique averages in one step") {
    Graph clique = Graph::from_edges(2, {{0, 1}});
    Eigen::MatrixXd y(2, 1);
    y << 0, 1;
    Eigen::MatrixXd out = kprop(y, clique, 1);
    CHECK(out(0, 0) == doctest::Approx(0.5));
    CHECK(out(1, 0) == doctest::Approx(0.5));
  }
  SUBCASE("kprop composes: k=2 equals two k=1 applications") {
    CHECK(kprop(x, g, 2).isApprox(kprop(kprop(x, g, 1), g, 1)));
  }
  SUBCASE("negative k is rejected") {
    CHECK_THROWS_AS(kprop(x, g, -1), std::invalid_argument);
  }
}

TEST_CASE("drop_pseudo_labels") {
  SUBCASE("k=0 returns the input labels") {
    Graph g = path3();
    Eigen::VectorXi y(3);
    y << 2, 0, 1;
    CHECK(drop_pseudo_labels(y, g, 0, 3) == y);
  }
  SUBCASE("majority inside a clique wins") {
    Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3},
                                    {2, 3}});
    Eigen::VectorXi y(4);
    y << 0, 0, 0, 1;
    Eigen::VectorXi out = drop_pseudo_labels(y, g, 1, 2);
    for (int v = 0; v < 4; ++v) CHECK(out[v] == 0);
  }
  SUBCASE("ties resolve to the smallest class id") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    Eigen::VectorXi y(2);
    y << 1, 0;
    Eigen::VectorXi out = drop_pseudo_labels(y, g, 1, 2);
    CHECK(out[0] == 0);
    CHECK(out[1] == 0);
  }
}

TEST_CASE("train records history and respects lr=0") {
  Dataset ds = toy_dataset();
  ModelConfig mc;
  TrainConfig tc;
  tc.seed = 4;
  tc.max_epochs = 30;

  SUBCASE("zero learning rate leaves the initial parameters untouched") {
    tc.learning_rate = 0.0;
    TrainedModel frozen = train(ds, mc, tc, ds.features, ds.labels);
    tc.max_epochs = 1;
    TrainedModel one = train(ds, mc, tc, ds.features, ds.labels);
    REQUIRE(frozen.weights.size() == one.weights.size());
    for (std::size_t i = 0; i < frozen.weights.size(); ++i) {
      CHECK(frozen.weights[i].isApprox(one.weights[i]));
    }
    for (const auto& rec : frozen.history) {
      CHECK(rec.loss == doctest::Approx(frozen.history[0].loss));
    }
  }
  SUBCASE("loss decreases and the separable toy task is solved") {
    tc.max_epochs = 300;
    TrainedModel model = train(ds, mc, tc, ds.features, ds.labels);
    REQUIRE_FALSE(model.history.empty());
    CHECK(model.history.back().loss < model.history.front().loss);
    // The returned parameters are the earliest best-validation snapshot, so
    // check the training trajectory for full separation and give the
    // snapshot itself a little slack.
    CHECK(model.history.back().train_accuracy == 1.0);
    Mask all(6, 1);
    CHECK(evaluate(model, ds.graph, ds.features, ds.labels, all) >= 5.0 / 6);
  }
  SUBCASE("same seed reproduces the full history, both architectures") {
    for (Architecture arch : {Architecture::kGcn, Architecture::kSage}) {
      mc.architecture = arch;
      TrainedModel a = train(ds, mc, tc, ds.features, ds.labels);
      TrainedModel b = train(ds, mc, tc, ds.features, ds.labels);
      REQUIRE(a.history.size() == b.history.size());
      for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].loss == b.history[i].loss);
        CHECK(a.history[i].val_accuracy == b.history[i].val_accuracy);
      }
    }
  }
  SUBCASE("divergence names the epoch") {
    tc.learning_rate = 1e12;
    tc.max_epochs = 50;
    CHECK_THROWS_WITH_AS(train(ds, mc, tc, ds.features, ds.labels),
                         doctest::Contains("epoch"), std::runtime_error);
  }
}

TEST_CASE("evaluate oracles") {
  Dataset ds = toy_dataset();
  ModelConfig mc;
  TrainConfig tc;
  tc.seed = 8;
  tc.max_epochs = 40;
  TrainedModel model = train(ds, mc, tc, ds.features, ds.labels);

  Mask all(6, 1);
  Eigen::MatrixXd logits = forward_logits(model, ds.graph, ds.features);
  // Hand-count agreement with the argmax of the logits.
  int hits = 0;
  for (int v = 0; v < 6; ++v) {
    int best = 0;
    for (int c = 1; c < ds.num_classes; ++c) {
      if (logits(v, c) > logits(v, best)) best = c;
    }
    hits += best == ds.labels[v];
  }
  CHECK(evaluate(model, ds.graph, ds.features, ds.labels, all) ==
        doctest::Approx(hits / 6.0));

  SUBCASE("constant labels give the base-rate accuracy") {
    Eigen::VectorXi zeros = Eigen::VectorXi::Zero(6);
    double acc = evaluate(model, ds.graph, ds.features, zeros, all);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
  SUBCASE("empty mask throws") {
    Mask none(6, 0);
    CHECK_THROWS_AS(evaluate(model, ds.graph, ds.features, ds.labels, none),
                    std::invalid_argument);
  }
}

TEST_CASE("analytic gradients match finite differences") {
  Dataset tiny;
  tiny.graph = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  tiny.features = Eigen::MatrixXd(4, 3);
  tiny.features << 0.1, 0.9, 0.3, 0.8, 0.2, 0.5, 0.4, 0.4, 0.9, 0.7, 0.1, 0.2;
  tiny.labels = Eigen::VectorXi(4);
  tiny.labels << 0, 1, 0, 1;
  tiny.num_classes = 2;
  tiny.train_mask = {1, 1, 1, 0};
  tiny.val_mask = {0, 0, 0, 1};
  tiny.test_mask = {0, 0, 0, 1};

  ModelConfig mc;
  mc.hidden_dim = 5;
  for (Architecture arch : {Architecture::kGcn, Architecture::kSage}) {
    mc.architecture = arch;
    CAPTURE(to_string(arch));
    CHECK(grad_check(mc, tiny, 13) < 1e-4);
  }
}

TEST_CASE("model save/load round-trip") {
  Dataset ds = toy_dataset();
  ModelConfig mc;
  mc.architecture = Architecture::kSage;
  TrainConfig tc;
  tc.seed = 2;
  tc.max_epochs = 10;
  TrainedModel model = train(ds, mc, tc, ds.features, ds.labels);

  auto file = std::filesystem::temp_directory_path() / "lpgnn_model_test.json";
  save_model(model, file);
  TrainedModel back = load_model(file);
  std::filesystem::remove(file);

  REQUIRE(back.weights.size() == model.weights.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    CHECK(back.weights[i].isApprox(model.weights[i]));
  }
  for (std::size_t i = 0; i < model.biases.size(); ++i) {
    CHECK(back.biases[i].isApprox(model.biases[i]));
  }
  CHECK(back.config.architecture == model.config.architecture);
  CHECK(forward_logits(back, ds.graph, ds.features)
            .isApprox(forward_logits(model, ds.graph, ds.features)));
}

TEST_CASE("architecture names round-trip") {
  CHECK(to_string(architecture_from_string("gcn")) == "gcn");
  CHECK(to_string(architecture_from_string("sage")) == "sage");
  CHECK_THROWS_AS(architecture_from_string("mlp"), std::invalid_argument);
}

}  // namespace
}  // namespace lpgnn
