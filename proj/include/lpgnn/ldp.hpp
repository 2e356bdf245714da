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

#ifndef LPGNN_LDP_HPP_
#define LPGNN_LDP_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

#include "lpgnn/rng.hpp"

namespace lpgnn {

// Parameters of the multi-bit mechanism: privacy budget eps > 0, feature
// range [alpha, beta), dimension d and sampling parameter m in [1, d].
// e^{eps/m} is computed once and cached.
class MbmParams {
 public:
  MbmParams(double eps, double alpha, double beta, int dim, int m);

  double eps() const { return eps_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int dim() const { return dim_; }
  int m() const { return m_; }
  double exp_eps_m() const { return exp_eps_m_; }

 private:
  double eps_;
  double alpha_;
  double beta_;
  int dim_;
  int m_;
  double exp_eps_m_;
};

// Encoder output: entries in {-1, 0, +1} with exactly m nonzeros.
using EncodedVector = Eigen::VectorXi;

// Server-side unbiased estimates; entries take one of three affine images
// of {-1, 0, +1} and can fall far outside [alpha, beta].
using RectifiedVector = Eigen::VectorXd;

// Raw (unclamped) success probability of the per-dimension Bernoulli trial:
//   1/(e^{eps/m}+1) + (x - alpha)/(beta - alpha) * (e^{eps/m}-1)/(e^{eps/m}+1)
// Out-of-range x is deliberately accepted; the value is clamped to [0,1]
// only at the sampling site so that poisoning audits see the exact value.
double bernoulli_param(double x, const MbmParams& params);

// Counts events worth surfacing in experiment reports.
struct EncoderCounters {
  std::int64_t out_of_range_params = 0;  // raw Bernoulli parameter outside [0,1]
};

// Samples m dimensions without replacement, runs the Bernoulli trial on each
// and emits 2t-1 there, 0 elsewhere. Deterministic given the rng stream.
EncodedVector multibit_encode(const Eigen::VectorXd& x, const MbmParams& params,
                              Rng& rng, EncoderCounters* counters = nullptr);

// Affine map making the encoder unbiased:
//   x'_i = (d/m) * (beta-alpha)/2 * (e^{eps/m}+1)/(e^{eps/m}-1) * enc_i
//          + (alpha+beta)/2
RectifiedVector multibit_rectify(const EncodedVector& enc,
                                 const MbmParams& params);

struct RrParams {
  double eps;
  int num_classes;

  RrParams(double eps_y, int c);
  // Probability the true label is kept: e^{eps}/(e^{eps} + C - 1).
  double keep_probability() const;
};

// Keeps the label with keep_probability(), otherwise returns a uniform draw
// over the other C-1 classes. Throws if label is out of range.
int randomized_response(int label, const RrParams& params, Rng& rng);

struct DomainViolation {
  int index;
  double value;
};

struct DomainReport {
  std::vector<DomainViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Client-side defense: flags every entry outside the closed interval
// [alpha, beta]. A report is a value, never an error.
DomainReport validate_feature_domain(const Eigen::VectorXd& x, double alpha,
                                     double beta);

constexpr double kRatioInfinity = std::numeric_limits<double>::infinity();

// Per-dimension Monte-Carlo estimates of encoder output-probability ratios
// between two inputs; a zero denominator yields the +infinity sentinel,
// which is the poisoning-violation signal.
struct RatioEstimate {
  double plus_ratio;       // Pr[enc=+1 | x1] / Pr[enc=+1 | x2]
  double minus_ratio;      // Pr[enc=-1 | x1] / Pr[enc=-1 | x2]
  double plus_ratio_low;   // Wilson-interval bounds on the +1 ratio
  double plus_ratio_high;
};

struct RatioAudit {
  std::vector<RatioEstimate> dims;
  std::int64_t trials = 0;
  // True iff any estimate hit the +infinity sentinel.
  bool violation_detected() const;
};

RatioAudit empirical_ldp_ratio(const Eigen::VectorXd& x1,
                               const Eigen::VectorXd& x2,
                               const MbmParams& params, std::int64_t trials,
                               Rng& rng);

}  // namespace lpgnn

#endif  // LPGNN_LDP_HPP_
