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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lpgnn {

MbmParams::MbmParams(double eps, double alpha, double beta, int dim, int m)
    : eps_(eps), alpha_(alpha), beta_(beta), dim_(dim), m_(m) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (!(alpha < beta)) throw std::invalid_argument("alpha must be < beta");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (m < 1 || m > dim) throw std::invalid_argument("m must lie in [1, d]");
  exp_eps_m_ = std::exp(eps / static_cast<double>(m));
}

double bernoulli_param(double x, const MbmParams& params) {
  const double e = params.exp_eps_m();
  const double u = (x - params.alpha()) / (params.beta() - params.alpha());
  // In the limit e -> inf the parameter degenerates to u itself; the direct
  // formula would produce inf/inf.
  if (std::isinf(e)) return u;
  return 1.0 / (e + 1.0) + u * (e - 1.0) / (e + 1.0);
}

EncodedVector multibit_encode(const Eigen::VectorXd& x, const MbmParams& params,
                              Rng& rng, EncoderCounters* counters) {
  if (x.size() != params.dim()) {
    throw std::invalid_argument("feature row length " + std::to_string(x.size()) +
                                " != d=" + std::to_string(params.dim()));
  }
  const int d = params.dim();
  const int m = params.m();

  // Partial Fisher-Yates draw of m indices without replacement.
  std::vector<int> pool(static_cast<std::size_t>(d));
  std::iota(pool.begin(), pool.end(), 0);
  EncodedVector enc = EncodedVector::Zero(d);
  for (int k = 0; k < m; ++k) {
    auto j = static_cast<std::size_t>(rng.uniform_int(k, d - 1));
    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
    int idx = pool[static_cast<std::size_t>(k)];
    double p = bernoulli_param(x[idx], params);
    if (counters != nullptr && (p < 0.0 || p > 1.0)) {
      ++counters->out_of_range_params;
    }
    enc[idx] = rng.bernoulli(std::clamp(p, 0.0, 1.0)) ? 1 : -1;
  }
  return enc;
}

RectifiedVector multibit_rectify(const EncodedVector& enc,
                                 const MbmParams& params) {
  const double e = params.exp_eps_m();
  const double scale = static_cast<double>(params.dim()) /
                       static_cast<double>(params.m()) *
                       (params.beta() - params.alpha()) / 2.0 * (e + 1.0) /
                       (e - 1.0);
  const double mid = (params.alpha() + params.beta()) / 2.0;
  return enc.cast<double>() * scale + RectifiedVector::Constant(enc.size(), mid);
}

RrParams::RrParams(double eps_y, int c) : eps(eps_y), num_classes(c) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps_y must be > 0");
  if (c < 2) throw std::invalid_argument("num_classes must be >= 2");
}

double RrParams::keep_probability() const {
  const double e = std::exp(eps);
  return e / (e + static_cast<double>(num_classes) - 1.0);
}

int randomized_response(int label, const RrParams& params, Rng& rng) {
  if (label < 0 || label >= params.num_classes) {
    throw std::invalid_argument("label " + std::to_string(label) +
                                " out of range [0," +
                                std::to_string(params.num_classes) + ")");
  }
  if (rng.bernoulli(params.keep_probability())) return label;
  auto other = static_cast<int>(rng.uniform_int(0, params.num_classes - 2));
  return other >= label ? other + 1 : other;
}

DomainReport validate_feature_domain(const Eigen::VectorXd& x, double alpha,
                                     double beta) {
  DomainReport report;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < alpha || x[i] > beta) {
      report.violations.push_back({static_cast<int>(i), x[i]});
    }
  }
  return report;
}

bool RatioAudit::violation_detected() const {
  for (const auto& est : dims) {
    if (std::isinf(est.plus_ratio) || std::isinf(est.minus_ratio)) return true;
  }
  return false;
}

namespace {

// Wilson score interval for a binomial proportion, z = 1.96.
std::pair<double, double> wilson_interval(std::int64_t successes,
                                          std::int64_t trials) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double margin =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {(center - margin) / denom, (center + margin) / denom};
}

double safe_ratio(double num, double den) {
  if (den <= 0.0) return num > 0.0 ? kRatioInfinity : 1.0;
  return num / den;
}

}  // namespace

RatioAudit empirical_ldp_ratio(const Eigen::VectorXd& x1,
                               const Eigen::VectorXd& x2,
                               const MbmParams& params, std::int64_t trials,
                               Rng& rng) {
  if (x1.size() != params.dim() || x2.size() != params.dim()) {
    throw std::invalid_argument("audit inputs must have length d");
  }
  if (trials < 10000) {
    throw std::invalid_argument("audit requires at least 10^4 trials");
  }
  const int d = params.dim();
  Eigen::ArrayXi plus1 = Eigen::ArrayXi::Zero(d), minus1 = Eigen::ArrayXi::Zero(d);
  Eigen::ArrayXi plus2 = Eigen::ArrayXi::Zero(d), minus2 = Eigen::ArrayXi::Zero(d);

  Rng rng1 = rng.stream("audit/x1");
  Rng rng2 = rng.stream("audit/x2");
  for (std::int64_t t = 0; t < trials; ++t) {
    EncodedVector e1 = multibit_encode(x1, params, rng1);
    EncodedVector e2 = multibit_encode(x2, params, rng2);
    for (int i = 0; i < d; ++i) {
      plus1[i] += e1[i] == 1;
      minus1[i] += e1[i] == -1;
      plus2[i] += e2[i] == 1;
      minus2[i] += e2[i] == -1;
    }
  }

  RatioAudit audit;
  audit.trials = trials;
  audit.dims.reserve(static_cast<std::size_t>(d));
  const double n = static_cast<double>(trials);
  for (int i = 0; i < d; ++i) {
    RatioEstimate est{};
    est.plus_ratio = safe_ratio(plus1[i] / n, plus2[i] / n);
    est.minus_ratio = safe_ratio(minus1[i] / n, minus2[i] / n);
    auto [lo1, hi1] = wilson_interval(plus1[i], trials);
    auto [lo2, hi2] = wilson_interval(plus2[i], trials);
    est.plus_ratio_low = safe_ratio(lo1, hi2);
    est.plus_ratio_high = safe_ratio(hi1, lo2);
    audit.dims.push_back(est);
  }
  return audit;
}

}  // namespace lpgnn
