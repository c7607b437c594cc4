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

#include "shotqdp/budget.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "absl/strings/str_format.h"

namespace shotqdp {
namespace {

// Three-sigma endpoint constants: 3^2 / 2 and 3 / 2.
constexpr double kEndpointQuadratic = 4.5;
constexpr double kEndpointLinear = 1.5;

absl::Status CheckCommon(const BudgetInputs& in) {
  if (!(in.mu > 0.0 && in.mu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("DegenerateMu: mu = %g not in (0, 1)", in.mu));
  }
  if (!(in.d >= 0.0 && in.d <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: d = %g not in [0, 1]", in.d));
  }
  if (in.r < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: rank r = %d < 1", in.r));
  }
  if (in.n < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: shot count n = %d < 1", in.n));
  }
  if (!(in.beta > 0.0 && in.beta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: beta = %g not in (0, 1)", in.beta));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> AlphaFromInputs(const BudgetInputs& in) {
  if (!in.p.has_value()) {
    return absl::InvalidArgumentError(
        "MissingParameter: depolarizing budget needs p");
  }
  if (!in.dim.has_value()) {
    return absl::InvalidArgumentError(
        "MissingParameter: depolarizing budget needs dim");
  }
  return DepolarizingAlpha(*in.p, in.d, in.r, *in.dim);
}

void FlagNonFinite(PrivacyReport& report) {
  if (!std::isfinite(report.epsilon) &&
      !report.HasWarning(Warning::kDivergent)) {
    report.warnings.push_back(Warning::kDivergent);
  }
}

// Shared pure-epsilon shape: scale * [ (9/2)(1-2mu) + (3/2) sqrt(n) + tail ].
PrivacyReport PureReport(const BudgetInputs& in, double scale, double tail) {
  PrivacyReport report;
  report.inputs = in;
  const double negative_term = kEndpointQuadratic * (1.0 - 2.0 * in.mu);
  report.epsilon =
      scale * (negative_term + kEndpointLinear * std::sqrt(in.n) + tail);
  if (negative_term < 0.0) {
    report.warnings.push_back(Warning::kRegimeNegativeTerm);
  }
  FlagNonFinite(report);
  return report;
}

// Resolves (c, delta) from whichever one the caller supplied.
absl::Status ResolveTail(const BudgetInputs& in, PrivacyReport& report) {
  if (in.c.has_value() == in.delta.has_value()) {
    return absl::InvalidArgumentError(
        "BadInput: supply exactly one of c and delta");
  }
  if (in.c.has_value()) {
    absl::StatusOr<double> delta = DeltaFromC(*in.c, in.mu, in.n, in.convention);
    if (!delta.ok()) return delta.status();
    report.c = *in.c;
    report.delta = *delta;
  } else {
    absl::StatusOr<double> c = CFromDelta(*in.delta, in.mu, in.n, in.convention);
    if (!c.ok()) return c.status();
    report.c = *c;
    report.delta = *in.delta;
  }
  if (report.delta > 1.0) report.warnings.push_back(Warning::kDeltaExceedsOne);
  return absl::OkStatus();
}

// (prefactor) [ (1 - 2mu - g) c^2 / (2 mu (1 - mu - g)) + c + g / 2 ] where
// g = n d r or n alpha.
void FillApproxEpsilon(double prefactor, double gap, double mu,
                       PrivacyReport& report) {
  const double c = *report.c;
  const double denominator = 1.0 - mu - gap;
  if (denominator <= 0.0) report.warnings.push_back(Warning::kRegimeInvalid);
  // Between 1 - 2mu and 1 - mu the quadratic term is negative and epsilon falls
  // with n instead of rising.
  if (denominator > 0.0 && 1.0 - 2.0 * mu - gap < 0.0) {
    report.warnings.push_back(Warning::kRegimeNegativeTerm);
  }
  if (prefactor == 0.0) {
    report.epsilon = 0.0;
  } else {
    const double quadratic =
        (1.0 - 2.0 * mu - gap) * c * c / (2.0 * mu * denominator);
    report.epsilon = prefactor * (quadratic + c + 0.5 * gap);
  }
  FlagNonFinite(report);
}

absl::StatusOr<double> PureEpsilonAt(const BudgetInputs& in, Regime regime,
                                     int n) {
  BudgetInputs at = in;
  at.n = n;
  absl::StatusOr<PrivacyReport> report = regime == Regime::kNoiseless
                                             ? EpsilonNoiseless(at)
                                             : EpsilonDepolarizing(at);
  if (!report.ok()) return report.status();
  return report->epsilon;
}

}  // namespace

std::string_view WarningName(Warning w) {
  switch (w) {
    case Warning::kRegimeNegativeTerm:
      return "RegimeNegativeTerm";
    case Warning::kRegimeInvalid:
      return "RegimeInvalid";
    case Warning::kDeltaExceedsOne:
      return "DeltaExceedsOne";
    case Warning::kDivergent:
      return "Divergent";
  }
  return "Unknown";
}

std::string_view RegimeName(Regime r) {
  return r == Regime::kNoiseless ? "noiseless" : "depolarizing";
}

std::string_view ConventionName(DeltaConvention c) {
  return c == DeltaConvention::kUnnormalized ? "paper" : "normalized";
}

absl::StatusOr<Regime> ParseRegime(std::string_view name) {
  if (name == "noiseless") return Regime::kNoiseless;
  if (name == "depolarizing") return Regime::kDepolarizing;
  return absl::InvalidArgumentError(
      absl::StrFormat("BadConfig: unknown regime '%s'", std::string(name)));
}

absl::StatusOr<DeltaConvention> ParseConvention(std::string_view name) {
  if (name == "paper") return DeltaConvention::kUnnormalized;
  if (name == "normalized") return DeltaConvention::kNormalized;
  return absl::InvalidArgumentError(
      absl::StrFormat("BadConfig: unknown delta convention '%s'", std::string(name)));
}

bool PrivacyReport::HasWarning(Warning w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

double Erfc(double x) { return std::erfc(x); }

absl::StatusOr<double> DepolarizingAlpha(double p, double d, int r, int dim) {
  if (p == 0.0) {
    return absl::InvalidArgumentError(
        "ZeroNoise: alpha diverges at p = 0");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: p = %g not in (0, 1]", p));
  }
  if (!(d >= 0.0 && d <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: d = %g not in [0, 1]", d));
  }
  if (r < 1 || dim < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: r = %d, dim = %d must be >= 1", r, dim));
  }
  return (1.0 - p) / p * d * r * dim;
}

absl::StatusOr<PrivacyReport> EpsilonNoiseless(const BudgetInputs& in) {
  if (absl::Status s = CheckCommon(in); !s.ok()) return s;
  const double dr = in.d * in.r;
  const double one_minus_mu = 1.0 - in.mu;
  return PureReport(in, dr / (one_minus_mu * in.mu),
                    dr * (in.mu + dr) * in.n / one_minus_mu);
}

absl::StatusOr<PrivacyReport> EpsilonDepolarizing(const BudgetInputs& in) {
  if (absl::Status s = CheckCommon(in); !s.ok()) return s;
  absl::StatusOr<double> alpha = AlphaFromInputs(in);
  if (!alpha.ok()) return alpha.status();
  const double one_minus_mu = 1.0 - in.mu;
  return PureReport(
      in, *alpha / one_minus_mu,
      *alpha * in.mu * in.mu * (1.0 + *alpha) * in.n / one_minus_mu);
}

absl::StatusOr<double> DeltaFromC(double c, double mu, int n,
                                  DeltaConvention convention) {
  if (!(mu > 0.0 && mu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("DegenerateMu: mu = %g not in (0, 1)", mu));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: shot count n = %d < 1", n));
  }
  if (!(c >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: tail half-width c = %g < 0", c));
  }
  const double sigma = std::sqrt(mu * (1.0 - mu) / n);
  const double tail = Erfc(c / (std::numbers::sqrt2 * sigma));
  if (convention == DeltaConvention::kNormalized) return tail;
  return std::sqrt(2.0 * std::numbers::pi) * sigma * tail;
}

absl::StatusOr<double> CFromDelta(double delta, double mu, int n,
                                  DeltaConvention convention) {
  absl::StatusOr<double> ceiling = DeltaFromC(0.0, mu, n, convention);
  if (!ceiling.ok()) return ceiling.status();
  if (!(delta > 0.0 && delta < *ceiling)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "DeltaOutOfRange: delta = %g must lie in (0, %.10g)", delta,
        *ceiling));
  }
  auto delta_at = [&](double c) {
    return *DeltaFromC(c, mu, n, convention);
  };
  // delta_at(lo) > delta >= delta_at(hi) throughout.
  double lo = 0.0;
  double hi = std::sqrt(mu * (1.0 - mu) / n);
  while (delta_at(hi) > delta) {
    lo = hi;
    hi *= 2.0;
  }
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (delta_at(mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c =
      std::abs(delta_at(lo) - delta) < std::abs(delta_at(hi) - delta) ? lo : hi;
  if (std::abs(delta_at(c) - delta) > 1e-10 * delta) {
    return absl::InternalError(absl::StrFormat(
        "c inversion stalled: delta(%.17g) = %.17g vs target %.17g", c,
        delta_at(c), delta));
  }
  return c;
}

absl::StatusOr<PrivacyReport> EpsilonDeltaNoiseless(const BudgetInputs& in) {
  if (absl::Status s = CheckCommon(in); !s.ok()) return s;
  PrivacyReport report;
  report.inputs = in;
  if (absl::Status s = ResolveTail(in, report); !s.ok()) return s;
  const double gap = in.n * in.d * in.r;
  FillApproxEpsilon(gap / (in.mu * (1.0 - in.mu)), gap, in.mu, report);
  return report;
}

absl::StatusOr<PrivacyReport> EpsilonDeltaDepolarizing(
    const BudgetInputs& in) {
  if (absl::Status s = CheckCommon(in); !s.ok()) return s;
  absl::StatusOr<double> alpha = AlphaFromInputs(in);
  if (!alpha.ok()) return alpha.status();
  PrivacyReport report;
  report.inputs = in;
  if (absl::Status s = ResolveTail(in, report); !s.ok()) return s;
  FillApproxEpsilon(*alpha / (1.0 - in.mu), in.n * *alpha, in.mu, report);
  return report;
}

absl::StatusOr<double> MuRatioBound(double mu1, double d, double p, int dim) {
  if (!(mu1 > 0.0 && mu1 < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("DegenerateMu: mu1 = %g not in (0, 1)", mu1));
  }
  // The ratio bound carries d D without the rank; reuse alpha with r = 1.
  absl::StatusOr<double> alpha = DepolarizingAlpha(p, d, 1, dim);
  if (!alpha.ok()) return alpha.status();
  return mu1 * (1.0 + *alpha);
}

absl::StatusOr<int> ShotsForBudget(double target_epsilon,
                                   const BudgetInputs& in, Regime regime) {
  if (!(target_epsilon > 0.0) || !std::isfinite(target_epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "OutOfRange: target epsilon %g must be positive and finite",
        target_epsilon));
  }
  absl::StatusOr<double> first = PureEpsilonAt(in, regime, 1);
  if (!first.ok()) return first.status();
  if (*first > target_epsilon) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Unattainable: epsilon(n = 1) = %.10g exceeds target %.10g", *first,
        target_epsilon));
  }
  // Invariant: eps(lo) <= target < eps(hi).
  int lo = 1;
  int hi = 2;
  constexpr int kMaxShots = std::numeric_limits<int>::max();
  while (true) {
    absl::StatusOr<double> eps = PureEpsilonAt(in, regime, hi);
    if (!eps.ok()) return eps.status();
    if (*eps > target_epsilon) break;
    lo = hi;
    if (hi == kMaxShots) {
      return absl::OutOfRangeError(
          "Unbounded: epsilon never exceeds the target (zero distinguishing "
          "gap)");
    }
    hi = hi > kMaxShots / 2 ? kMaxShots : 2 * hi;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    absl::StatusOr<double> eps = PureEpsilonAt(in, regime, mid);
    if (!eps.ok()) return eps.status();
    if (*eps <= target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace shotqdp
