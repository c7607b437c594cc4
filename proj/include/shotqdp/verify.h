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

// Independent privacy oracles for the shot-noise mechanism.
//
// The closed-form budgets are derived on the Gaussian (central limit) model
// of the sample mean. The oracles here work on the exact binomial law of the
// success count instead, and the audits keep the two comparisons apart: the
// Gaussian three-sigma endpoint check is what the closed forms promise, the
// exact comparison measures how far the true mechanism is from them.

#ifndef SHOTQDP_VERIFY_H_
#define SHOTQDP_VERIFY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "shotqdp/budget.h"
#include "shotqdp/quantum_core.h"

namespace shotqdp {

// Largest number of PVM outcomes QdpCheck enumerates subsets for.
inline constexpr int kMaxQdpOutcomes = 16;
// Slack absorbed by QdpCheck's inequality to tolerate summation rounding.
inline constexpr double kQdpSlack = 1e-12;

// max_k |ln P0(k) / P1(k)| with Pi = Binomial(n, mu_i): the smallest epsilon
// for which the exact n-shot mechanism is pure epsilon-DP.
absl::StatusOr<double> ExactEpsilon(double mu0, double mu1, int n);

// Same maximum restricted to counts k in [first, last].
absl::StatusOr<double> ExactEpsilonOver(double mu0, double mu1, int n,
                                        int first, int last);

// sum_k max(0, P0(k) - e^eps P1(k)): the smallest delta for which the exact
// n-shot mechanism with inputs ordered (mu0, mu1) is (eps, delta)-DP. Equals
// the total variation distance at eps = 0.
absl::StatusOr<double> HockeyStickDelta(double mu0, double mu1, int n,
                                        double eps);

struct MinMuResult {
  double mu0;  // Tr(E(rho) M)
  double mu1;  // Tr(E(sigma) M)
  double min;
  // True when rho's expectation attains the minimum (ties resolve to rho).
  bool attained_by_rho;
};

absl::StatusOr<MinMuResult> MinMu(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Channel& channel, const Projector& m);

// Checks sum_{k in S} Tr[M_k E(rho)] <= e^eps sum_{k in S} Tr[M_k E(sigma)]
// + delta for every subset S of outcomes, in both orderings of the states.
// The projectors must resolve the identity and number at most
// kMaxQdpOutcomes.
absl::StatusOr<bool> QdpCheck(const DensityMatrix& rho,
                              const DensityMatrix& sigma,
                              const Channel& channel,
                              const std::vector<Projector>& projectors,
                              double eps, double delta);

struct DominanceParams {
  double d = 0.0;
  int r = 1;
  int n = 1;
  // Larger and smaller expectation; mu1 must be the minimum.
  double mu0 = 0.0;
  double mu1 = 0.0;
  Regime regime = Regime::kNoiseless;
  std::optional<double> p;
  std::optional<int> dim;
};

struct EndpointCheck {
  double x;          // evaluation point after clipping to [0, 1]
  bool clipped;      // mu0 -+ 3 sigma0 fell outside (0, 1)
  double llr;        // LogLikelihoodRatio(x, mu0, mu1, n)
  bool dominated;    // llr <= theorem_epsilon + kDominanceSlack
};

inline constexpr double kDominanceSlack = 1e-9;

struct PerOutcome {
  int k;
  double exact_log_ratio;  // ln P0(k) - ln P1(k)
  // Empirical values are absent when either histogram count is zero.
  std::optional<double> empirical_log_ratio;
  double exact_prob0;
  double exact_prob1;
  double empirical_prob0;
  double empirical_prob1;
};

struct AuditReport {
  // Exact binomial oracle over every outcome, boundary counts included.
  double exact_epsilon = 0.0;
  // Exact oracle over the interior counts 1..n-1 only.
  double exact_epsilon_interior = 0.0;
  // Optimal delta of the exact mechanism at the theorem's (or requested) eps.
  double exact_delta_at_eps = 0.0;
  double theorem_epsilon = 0.0;
  std::vector<std::string> flags;

  // Dominance audit fields.
  std::optional<EndpointCheck> lower;
  std::optional<EndpointCheck> upper;
  // Exact oracle over non-boundary counts with k / n inside the three-sigma
  // window, and whether the theorem epsilon covers it.
  std::optional<double> exact_epsilon_window;
  std::optional<bool> window_dominated;
  // The convexity and endpoint preconditions hold, so the endpoint checks
  // are expected to pass.
  bool dominance_expected = false;
  // Both endpoint checks pass (or trivially hold).
  bool dominated = false;

  // Boundary counts k in {0, n}: outside the open interval (0, 1) of sample
  // means the Gaussian derivation considers.
  std::vector<int> boundary_outcomes_excluded;

  // Monte Carlo fields.
  std::vector<PerOutcome> outcomes;
  // Counts never observed under one of the two laws.
  std::vector<int> zero_count_outcomes;
  std::optional<double> requested_delta;
  // exact_delta_at_eps <= requested_delta.
  std::optional<bool> exact_satisfies_request;
  std::optional<double> empirical_epsilon;
  std::optional<double> empirical_delta_at_eps;
  std::optional<double> max_log_ratio_error;
  int64_t trials = 0;
  uint64_t seed = 0;

  bool HasFlag(const std::string& flag) const;
};

// Flag names carried by AuditReport::flags.
inline constexpr char kFlagNonConvexRegime[] = "NonConvexRegime";
inline constexpr char kFlagEndpointClipped[] = "EndpointClipped";
inline constexpr char kFlagIdenticalLaws[] = "IdenticalLaws";

// Evaluates the log-likelihood ratio at mu0 -+ 3 sigma0 and compares it with
// the closed-form pure-epsilon budget at mu = mu1. When mu0 + mu1 >= 1 the
// ratio is no longer convex in x, the report carries NonConvexRegime and
// dominance is not expected.
//
// Errors: PreconditionViolated when mu1 > mu0, or when mu0 - mu1 exceeds d r
// (noiseless) or mu0 exceeds MuRatioBound (depolarizing).
absl::StatusOr<AuditReport> DominanceAudit(const DominanceParams& params);

// Samples `trials` n-shot experiments for each of mu0 and mu1 and compares
// the empirical per-outcome log ratios with the exact ones. Outcomes with a
// zero count in either histogram are left without an empirical ratio.
// mu0 uses streams keyed by `seed`, mu1 a seed derived from it.
absl::StatusOr<AuditReport> MonteCarloAudit(double mu0, double mu1, int n,
                                            int64_t trials, uint64_t seed,
                                            double eps, double delta);

inline constexpr int64_t kMinMonteCarloTrials = 1000;

}  // namespace shotqdp

#endif  // SHOTQDP_VERIFY_H_
