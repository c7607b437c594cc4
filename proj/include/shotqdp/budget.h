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

// Closed-form privacy budgets for shot-noise quantum differential privacy.
//
// Notation shared by every formula below: d bounds the trace distance between
// neighboring input states, r is the rank of the measured projector, n the
// shot count and mu = min(mu0, mu1) the smaller of the two measurement
// expectations. With depolarizing noise of strength p on a D-dimensional
// system the constant alpha = ((1 - p) / p) d r D replaces d r.
//
// The pure-epsilon budgets evaluate the log-likelihood ratio of the two
// shot-noise Gaussians at the three-sigma endpoints mu0 +- 3 sigma0, which is
// where the constants 9/2 and 3/2 come from. The (epsilon, delta) budgets
// instead cut the Gaussian tails at half-width c.

#ifndef SHOTQDP_BUDGET_H_
#define SHOTQDP_BUDGET_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace shotqdp {

enum class Regime { kNoiseless, kDepolarizing };

enum class DeltaConvention {
  // sqrt(2 pi) sigma erfc(c / (sqrt(2) sigma)): integrates the unnormalized
  // Gaussian kernel, so it can exceed 1.
  kUnnormalized,
  // erfc(c / (sqrt(2) sigma)): the two-sided tail of a normalized Gaussian.
  kNormalized,
};

enum class Warning {
  // mu > 1/2 makes the (9/2)(1 - 2 mu) term negative; in the (epsilon,
  // delta) forms, 1 - 2 mu - n d r (or n alpha) < 0 does the same to the c^2
  // term.
  kRegimeNegativeTerm,
  // 1 - mu - n d r <= 0 (or 1 - mu - n alpha <= 0): the (epsilon, delta)
  // derivation's denominator changed sign. The value is still reported.
  kRegimeInvalid,
  kDeltaExceedsOne,
  kDivergent,
};

std::string_view WarningName(Warning w);
std::string_view RegimeName(Regime r);
std::string_view ConventionName(DeltaConvention c);
absl::StatusOr<Regime> ParseRegime(std::string_view name);
absl::StatusOr<DeltaConvention> ParseConvention(std::string_view name);

// Default confidence level of the three-sigma rule.
inline constexpr double kThreeSigmaConfidence = 0.997;

struct BudgetInputs {
  double d = 0.0;
  int r = 1;
  int n = 1;
  double mu = 0.0;
  std::optional<double> p;
  std::optional<int> dim;
  std::optional<double> c;
  std::optional<double> delta;
  // Recorded for provenance only; the three-sigma constants are fixed.
  double beta = kThreeSigmaConfidence;
  DeltaConvention convention = DeltaConvention::kUnnormalized;
};

struct PrivacyReport {
  double epsilon = 0.0;
  // 0 for pure-epsilon budgets.
  double delta = 0.0;
  // Tail half-width actually used by (epsilon, delta) budgets.
  std::optional<double> c;
  std::vector<Warning> warnings;
  BudgetInputs inputs;

  bool HasWarning(Warning w) const;
};

// Complementary error function.
double Erfc(double x);

// alpha = ((1 - p) / p) d r D. ZeroNoise for p = 0.
absl::StatusOr<double> DepolarizingAlpha(double p, double d, int r, int dim);

// epsilon = (d r / ((1 - mu) mu)) [ (9/2)(1 - 2 mu) + (3/2) sqrt(n)
//                                   + d r (mu + d r) n / (1 - mu) ].
absl::StatusOr<PrivacyReport> EpsilonNoiseless(const BudgetInputs& in);

// epsilon = (alpha / (1 - mu)) [ (9/2)(1 - 2 mu) + (3/2) sqrt(n)
//                                + alpha mu^2 (1 + alpha) n / (1 - mu) ].
// Requires in.p and in.dim.
absl::StatusOr<PrivacyReport> EpsilonDepolarizing(const BudgetInputs& in);

// Two-sided Gaussian tail mass outside mu +- c for
// sigma = sqrt(mu (1 - mu) / n). c may be 0 or +infinity.
absl::StatusOr<double> DeltaFromC(double c, double mu, int n,
                                  DeltaConvention convention);

// Inverts DeltaFromC by bisection on c. DeltaOutOfRange unless
// 0 < delta < DeltaFromC(0).
absl::StatusOr<double> CFromDelta(double delta, double mu, int n,
                                  DeltaConvention convention);

// epsilon = (n d r / (mu (1 - mu))) [ (1 - 2 mu - n d r) c^2
//           / (2 mu (1 - mu - n d r)) + c + n d r / 2 ].
// Exactly one of in.c and in.delta must be set; the other is derived.
absl::StatusOr<PrivacyReport> EpsilonDeltaNoiseless(const BudgetInputs& in);

// Same with n d r replaced by n alpha and the prefactor by alpha / (1 - mu).
absl::StatusOr<PrivacyReport> EpsilonDeltaDepolarizing(const BudgetInputs& in);

// Upper bound mu1 (1 + ((1 - p) / p) d D) on mu0 after depolarizing noise.
absl::StatusOr<double> MuRatioBound(double mu1, double d, double p, int dim);

// Largest n >= 1 whose pure-epsilon budget stays at or below
// `target_epsilon`, all other inputs held fixed. Unattainable if even n = 1
// exceeds the target; Unbounded if the budget never exceeds it (d = 0 or
// p = 1).
absl::StatusOr<int> ShotsForBudget(double target_epsilon,
                                   const BudgetInputs& in, Regime regime);

}  // namespace shotqdp

#endif  // SHOTQDP_BUDGET_H_
