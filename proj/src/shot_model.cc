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

#include "shotqdp/shot_model.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"
#include "shotqdp/random_stream.h"

namespace shotqdp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

absl::Status CheckProbability(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: mu = %g not in [0, 1]", mu));
  }
  return absl::OkStatus();
}

absl::Status CheckOpenProbability(double mu, const char* name) {
  if (!(mu > 0.0 && mu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("DegenerateMu: %s = %g not in (0, 1)", name, mu));
  }
  return absl::OkStatus();
}

absl::Status CheckShots(int shots) {
  if (shots < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: shot count %d < 1", shots));
  }
  return absl::OkStatus();
}

}  // namespace

double OutcomeDistribution::MeanCount() const {
  double mean = 0.0;
  for (int k = 0; k <= shots_; ++k) mean += k * probs_[k];
  return mean;
}

int OutcomeDistribution::QuantileCount(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return shots_;
  return static_cast<int>(it - cdf_.begin());
}

double NormalModel::stddev() const { return std::sqrt(variance); }

absl::StatusOr<double> SingleShotVariance(double mu) {
  if (absl::Status s = CheckProbability(mu); !s.ok()) return s;
  return mu * (1.0 - mu);
}

absl::StatusOr<OutcomeDistribution> BinomialDistribution(double mu,
                                                         int shots) {
  if (absl::Status s = CheckProbability(mu); !s.ok()) return s;
  if (absl::Status s = CheckShots(shots); !s.ok()) return s;

  OutcomeDistribution dist;
  dist.shots_ = shots;
  dist.mu_ = mu;
  dist.log_probs_.assign(shots + 1, kNegInf);

  if (mu == 0.0 || mu == 1.0) {
    dist.log_probs_[mu == 0.0 ? 0 : shots] = 0.0;
  } else {
    const double log_mu = std::log(mu);
    const double log_one_minus_mu = std::log1p(-mu);
    // log C(n, k) by the ratio recurrence C(n, k+1) = C(n, k) (n-k) / (k+1).
    double log_choose = 0.0;
    for (int k = 0; k <= shots; ++k) {
      dist.log_probs_[k] =
          log_choose + k * log_mu + (shots - k) * log_one_minus_mu;
      if (k < shots) {
        log_choose += std::log(static_cast<double>(shots - k)) -
                      std::log(static_cast<double>(k + 1));
      }
    }
    // Remove the accumulated rounding of the recurrence from the total mass.
    const double peak =
        *std::max_element(dist.log_probs_.begin(), dist.log_probs_.end());
    double mass = 0.0;
    for (double lp : dist.log_probs_) mass += std::exp(lp - peak);
    const double log_norm = peak + std::log(mass);
    for (double& lp : dist.log_probs_) lp -= log_norm;
  }

  dist.probs_.resize(shots + 1);
  dist.cdf_.resize(shots + 1);
  double running = 0.0;
  for (int k = 0; k <= shots; ++k) {
    dist.probs_[k] = std::exp(dist.log_probs_[k]);
    running += dist.probs_[k];
    dist.cdf_[k] = std::min(running, 1.0);
  }
  dist.cdf_[shots] = 1.0;
  return dist;
}

absl::StatusOr<NormalModel> MakeNormalModel(double mu, int shots) {
  if (absl::Status s = CheckOpenProbability(mu, "mu"); !s.ok()) return s;
  if (absl::Status s = CheckShots(shots); !s.ok()) return s;
  return NormalModel{.mean = mu, .variance = mu * (1.0 - mu) / shots};
}

absl::StatusOr<double> LogLikelihoodRatio(double x, double mu0, double mu1,
                                          int shots) {
  if (absl::Status s = CheckOpenProbability(mu0, "mu0"); !s.ok()) return s;
  if (absl::Status s = CheckOpenProbability(mu1, "mu1"); !s.ok()) return s;
  if (absl::Status s = CheckShots(shots); !s.ok()) return s;
  const double q = (1.0 - mu0) * (1.0 - mu1);
  // Every coefficient is symmetric in (mu0, mu1) operation by operation, so
  // swapping the pair flips the sign exactly.
  const double quadratic =
      (1.0 - (mu0 + mu1)) / (2.0 * (mu0 * mu1) * q);
  const double linear = 1.0 / q;
  const double constant = -1.0 / (2.0 * q);
  return shots * ((mu0 - mu1) * ((quadratic * x + linear) * x + constant));
}

absl::StatusOr<std::vector<int>> SampleCounts(double mu, int shots,
                                              int64_t trials, uint64_t seed) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: trials = %d < 1", trials));
  }
  absl::StatusOr<OutcomeDistribution> dist = BinomialDistribution(mu, shots);
  if (!dist.ok()) return dist.status();
  std::vector<int> counts(trials);
  for (int64_t t = 0; t < trials; ++t) {
    RandomStream stream(seed, static_cast<uint64_t>(t));
    counts[t] = dist->QuantileCount(stream.NextUniform());
  }
  return counts;
}

absl::StatusOr<std::vector<double>> SampleMeans(double mu, int shots,
                                                int64_t trials, uint64_t seed) {
  absl::StatusOr<std::vector<int>> counts =
      SampleCounts(mu, shots, trials, seed);
  if (!counts.ok()) return counts.status();
  std::vector<double> means(counts->size());
  std::transform(counts->begin(), counts->end(), means.begin(),
                 [shots](int k) { return static_cast<double>(k) / shots; });
  return means;
}

}  // namespace shotqdp
