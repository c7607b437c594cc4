// Copyright 2026 The ShotQDP Authors
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

// Models of the n-shot outcome of a binary projective measurement: the exact
// binomial law of the success count, its central-limit Gaussian
// approximation, and the log-likelihood ratio between two such Gaussians.

#ifndef SHOTQDP_SHOT_MODEL_H_
#define SHOTQDP_SHOT_MODEL_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"

namespace shotqdp {

// Exact law of the success count k in n shots. The sample mean is k / n.
class OutcomeDistribution {
 public:
  int shots() const { return shots_; }
  double mu() const { return mu_; }
  // probs()[k] = P(k successes), k = 0..n.
  const std::vector<double>& probs() const { return probs_; }
  // log P(k); -infinity where the probability is exactly zero. Stays finite
  // where probs() underflows.
  const std::vector<double>& log_probs() const { return log_probs_; }
  // Cumulative P(K <= k); the last entry is exactly 1.
  const std::vector<double>& cdf() const { return cdf_; }

  double MeanCount() const;
  // Inverse-CDF draw of the success count for u in [0, 1).
  int QuantileCount(double u) const;

 private:
  friend absl::StatusOr<OutcomeDistribution> BinomialDistribution(double mu,
                                                                  int shots);
  OutcomeDistribution() = default;

  int shots_ = 0;
  double mu_ = 0.0;
  std::vector<double> probs_;
  std::vector<double> log_probs_;
  std::vector<double> cdf_;
};

struct NormalModel {
  double mean;
  double variance;

  double stddev() const;
};

// mu (1 - mu): variance of one shot.
absl::StatusOr<double> SingleShotVariance(double mu);

// Binomial(n, mu), accumulated in log space so n up to 1e4 and beyond does
// not overflow the binomial coefficients.
absl::StatusOr<OutcomeDistribution> BinomialDistribution(double mu, int shots);

// N(mu, mu (1 - mu) / n). Rejects mu in {0, 1} with DegenerateMu.
absl::StatusOr<NormalModel> MakeNormalModel(double mu, int shots);

// ln p(rho') / p(sigma') for a sample mean x under the two shot-noise
// Gaussians N(mu0, mu0(1-mu0)/n) and N(mu1, mu1(1-mu1)/n), in the expanded
// polynomial form
//
//   n (mu0 - mu1) [ (1 - mu0 - mu1) x^2 / (2 mu0 mu1 (1-mu0)(1-mu1))
//                   + x / ((1-mu0)(1-mu1)) - 1 / (2 (1-mu0)(1-mu1)) ].
//
// The Gaussian kernels are unnormalized: the ln(sigma1 / sigma0) term of the
// true density ratio is not included.
absl::StatusOr<double> LogLikelihoodRatio(double x, double mu0, double mu1,
                                          int shots);

// `trials` sample means k / n with k ~ Binomial(n, mu). Trial t draws from
// RandomStream(seed, t), so the result depends only on the arguments.
absl::StatusOr<std::vector<double>> SampleMeans(double mu, int shots,
                                                int64_t trials, uint64_t seed);

// Same draws as SampleMeans, returned as success counts.
absl::StatusOr<std::vector<int>> SampleCounts(double mu, int shots,
                                              int64_t trials, uint64_t seed);

}  // namespace shotqdp

#endif  // SHOTQDP_SHOT_MODEL_H_
