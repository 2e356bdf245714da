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

#include "lpgnn/ldp.hpp"

#include <cmath>
#include <doctest.h>

#include "lpgnn/attacks.hpp"

namespace lpgnn {
namespace {

TEST_CASE("bernoulli_param endpoints") {
  MbmParams p(1.0, -2.0, 3.0, 4, 2);
  const double e = std::exp(0.5);
  CHECK(bernoulli_param(-2.0, p) == doctest::Approx(1.0 / (e + 1)));
  CHECK(bernoulli_param(3.0, p) == doctest::Approx(e / (e + 1)));
  // Midpoint maps to 1/2 regardless of eps.
  CHECK(bernoulli_param(0.5, p) == doctest::Approx(0.5));
}

TEST_CASE("poison offset collapses the alpha response probability") {
  for (double eps : {0.5, 1.0, 4.0}) {
    for (int m : {1, 3}) {
      MbmParams p(eps, 0.0, 1.0, 8, m);
      double shift = compute_poison(p);
      CHECK(std::abs(bernoulli_param(0.0 + shift, p)) <= 1e-12);
    }
  }
}

TEST_CASE("compute_poison closed form") {
  // alpha=0, beta=1, m=1: p = -1/(e^eps - 1); eps=1 gives -0.5819767...
  MbmParams p(1.0, 0.0, 1.0, 4, 1);
  CHECK(compute_poison(p) == doctest::Approx(-0.58197670686932642).epsilon(1e-12));
  // Only eps/m matters.
  MbmParams q(3.0, 0.0, 1.0, 4, 3);
  CHECK(compute_poison(q) == doctest::Approx(compute_poison(p)).epsilon(1e-12));
}

TEST_CASE("encoder emits exactly m nonzeros in {-1,0,1}") {
  Rng rng(7);
  for (int m : {1, 3, 8}) {
    MbmParams p(2.0, 0.0, 1.0, 8, m);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd x = Eigen::VectorXd::Random(8).cwiseAbs();
      auto enc = multibit_encode(x, p, rng);
      int nonzeros = 0;
      for (int i = 0; i < enc.size(); ++i) {
        CHECK(enc[i] >= -1);
        CHECK(enc[i] <= 1);
        nonzeros += enc[i] != 0;
      }
      CHECK(nonzeros == m);
    }
  }
}

TEST_CASE("huge eps with m=d recovers the rounded input sign") {
  MbmParams p(1e6, 0.0, 1.0, 4, 4);
  Eigen::VectorXd x(4);
  x << 0.0, 1.0, 1.0, 0.0;
  Rng rng(3);
  auto enc = multibit_encode(x, p, rng);
  CHECK(enc[0] == -1);
  CHECK(enc[1] == 1);
  CHECK(enc[2] == 1);
  CHECK(enc[3] == -1);
}

TEST_CASE("rectify closed form and zero map") {
  MbmParams p(std::log(3.0), 0.0, 1.0, 1, 1);
  EncodedVector plus(1), minus(1), zero(1);
  plus << 1;
  minus << -1;
  zero << 0;
  // (d/m)((beta-alpha)/2)((e+1)/(e-1)) = (1)(1/2)(4/2) = 1, offset 1/2.
  CHECK(multibit_rectify(plus, p)[0] == doctest::Approx(1.5));
  CHECK(multibit_rectify(minus, p)[0] == doctest::Approx(-0.5));
  CHECK(multibit_rectify(zero, p)[0] == doctest::Approx(0.5));
}

TEST_CASE("rectified encoder is unbiased (Monte Carlo)") {
  MbmParams p(2.0, -1.0, 2.0, 6, 2);
  Eigen::VectorXd x(6);
  x << -1.0, -0.5, 0.2, 0.5, 1.3, 2.0;
  Rng rng(99);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(6);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    sum += multibit_rectify(multibit_encode(x, p, rng), p);
  }
  Eigen::VectorXd mean = sum / n;
  for (int j = 0; j < 6; ++j) {
    CHECK(mean[j] == doctest::Approx(x[j]).epsilon(0).scale(1).epsilon(0.08));
  }
}

TEST_CASE("randomized_response keep probability oracle") {
  RrParams rr(std::log(2.0), 3);
  CHECK(rr.keep_probability() == doctest::Approx(0.5));
  Rng rng(21);
  int kept = 0;
  std::array<int, 3> counts{0, 0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    int y = randomized_response(1, rr, rng);
    CHECK(y >= 0);
    CHECK(y < 3);
    kept += y == 1;
    ++counts[static_cast<std::size_t>(y)];
  }
  CHECK(static_cast<double>(kept) / n == doctest::Approx(0.5).epsilon(0.02));
  // The two wrong classes split the rest evenly.
  CHECK(static_cast<double>(counts[0]) / n == doctest::Approx(0.25).epsilon(0.05));
  CHECK(static_cast<double>(counts[2]) / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("randomized_response limits") {
  Rng rng(5);
  RrParams tight(50.0, 4);
  for (int i = 0; i < 100; ++i) CHECK(randomized_response(2, tight, rng) == 2);
  RrParams loose(1e-9, 4);
  CHECK(loose.keep_probability() == doctest::Approx(0.25));
  CHECK_THROWS_AS(randomized_response(4, loose, rng), std::invalid_argument);
  CHECK_THROWS_AS(randomized_response(-1, loose, rng), std::invalid_argument);
}

TEST_CASE("validate_feature_domain boundary behavior") {
  Eigen::VectorXd x(4);
  x << 0.0, 1.0, -1e-9, 1.5;
  auto report = validate_feature_domain(x, 0.0, 1.0);
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0].index == 2);
  CHECK(report.violations[1].index == 3);
  CHECK(report.violations[1].value == doctest::Approx(1.5));
  CHECK_FALSE(report.ok());
  CHECK(validate_feature_domain(x.head(2), 0.0, 1.0).ok());
}

TEST_CASE("empirical ratio matches the privacy bound at the extremes") {
  MbmParams p(1.5, 0.0, 1.0, 1, 1);
  Eigen::VectorXd lo(1), hi(1);
  lo << 0.0;
  hi << 1.0;
  Rng rng(123);
  auto audit = empirical_ldp_ratio(hi, lo, p, 400000, rng);
  REQUIRE(audit.dims.size() == 1);
  // Pr[+1|beta]/Pr[+1|alpha] = e^{eps}.
  CHECK(audit.dims[0].plus_ratio ==
        doctest::Approx(std::exp(1.5)).epsilon(0.05));
  CHECK_FALSE(audit.violation_detected());
  // Identical inputs: ratio about 1 in both directions.
  Rng rng2(124);
  auto same = empirical_ldp_ratio(hi, hi, p, 200000, rng2);
  CHECK(same.dims[0].plus_ratio == doctest::Approx(1.0).epsilon(0.05));
  CHECK(same.dims[0].minus_ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("poisoned input trips the infinity sentinel") {
  MbmParams p(1.0, 0.0, 1.0, 1, 1);
  Eigen::VectorXd honest(1), poisoned(1);
  honest << 1.0;
  poisoned << compute_poison(p);  // alpha + shift with alpha = 0
  Rng rng(77);
  auto audit = empirical_ldp_ratio(honest, poisoned, p, 50000, rng);
  CHECK(audit.violation_detected());
  CHECK(audit.dims[0].plus_ratio == kRatioInfinity);
}

TEST_CASE("in-domain ratios respect e^{eps} for every pair tried") {
  MbmParams p(2.0, 0.0, 1.0, 3, 2);
  Rng seeds(31);
  const double bound = std::exp(2.0 / 2) * 1.15;  // slack for MC noise
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd a(3), b(3);
    for (int j = 0; j < 3; ++j) {
      a[j] = seeds.uniform();
      b[j] = seeds.uniform();
    }
    Rng rng = seeds.stream("audit", static_cast<std::uint64_t>(trial));
    auto audit = empirical_ldp_ratio(a, b, p, 200000, rng);
    for (const auto& est : audit.dims) {
      CHECK(est.plus_ratio <= bound);
      CHECK(est.minus_ratio <= bound);
    }
    CHECK_FALSE(audit.violation_detected());
  }
}

TEST_CASE("encoding is deterministic per rng stream") {
  MbmParams p(1.0, 0.0, 1.0, 10, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 0.4);
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    CHECK(multibit_encode(x, p, a) == multibit_encode(x, p, b));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MbmParams(0.0, 0.0, 1.0, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(MbmParams(1.0, 1.0, 0.0, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(MbmParams(1.0, 0.0, 1.0, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(MbmParams(1.0, 0.0, 1.0, 4, 5), std::invalid_argument);
  CHECK_THROWS_AS(RrParams(-1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(RrParams(1.0, 1), std::invalid_argument);
}

TEST_CASE("out-of-range inputs increment the encoder counter") {
  MbmParams p(1.0, 0.0, 1.0, 2, 2);
  Eigen::VectorXd x(2);
  x << -5.0, 0.5;
  Rng rng(8);
  EncoderCounters counters;
  multibit_encode(x, p, rng, &counters);
  CHECK(counters.out_of_range_params == 1);
}

}  // namespace
}  // namespace lpgnn
