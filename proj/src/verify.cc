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

#include "shotqdp/verify.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "shotqdp/random_stream.h"
#include "shotqdp/shot_model.h"

namespace shotqdp {
namespace {

// Salt separating the second mechanism's streams from the first's.
constexpr uint64_t kSecondMechanismSalt = 1;
// Tolerance on the audit preconditions mu0 - mu1 <= d r and
// mu0 <= MuRatioBound.
constexpr double kPreconditionSlack = 1e-12;
// Tolerance on sum_k M_k = I.
constexpr double kCompletenessTolerance = 1e-9;

absl::Status CheckOpenMu(double mu0, double mu1) {
  if (!(mu0 > 0.0 && mu0 < 1.0) || !(mu1 > 0.0 && mu1 < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "DegenerateMu: mu0 = %g, mu1 = %g must lie in (0, 1)", mu0, mu1));
  }
  return absl::OkStatus();
}

struct LawPair {
  OutcomeDistribution first;
  OutcomeDistribution second;
};

absl::StatusOr<LawPair> Laws(double mu0, double mu1, int n) {
  absl::StatusOr<OutcomeDistribution> p0 = BinomialDistribution(mu0, n);
  if (!p0.ok()) return p0.status();
  absl::StatusOr<OutcomeDistribution> p1 = BinomialDistribution(mu1, n);
  if (!p1.ok()) return p1.status();
  return LawPair{*std::move(p0), *std::move(p1)};
}

// sum_k max(0, a_k - e^eps b_k) over two probability vectors given in log
// space. Written as a_k (1 - e^(eps + log b_k - log a_k)) so e^eps never
// overflows.
double HockeyStick(const std::vector<double>& log_a,
                   const std::vector<double>& log_b, double eps) {
  double total = 0.0;
  for (size_t k = 0; k < log_a.size(); ++k) {
    if (std::isinf(log_a[k])) continue;
    const double a = std::exp(log_a[k]);
    if (std::isinf(log_b[k])) {
      total += a;
      continue;
    }
    const double exponent = eps + log_b[k] - log_a[k];
    if (exponent < 0.0) total += -a * std::expm1(exponent);
  }
  return std::clamp(total, 0.0, 1.0);
}

std::vector<double> LogOf(const std::vector<double>& probs) {
  std::vector<double> out(probs.size());
  std::transform(probs.begin(), probs.end(), out.begin(),
                 [](double p) { return std::log(p); });
  return out;
}

absl::StatusOr<double> TheoremEpsilon(const DominanceParams& params) {
  BudgetInputs in;
  in.d = params.d;
  in.r = params.r;
  in.n = params.n;
  in.mu = params.mu1;
  in.p = params.p;
  in.dim = params.dim;
  absl::StatusOr<PrivacyReport> report =
      params.regime == Regime::kNoiseless ? EpsilonNoiseless(in)
                                          : EpsilonDepolarizing(in);
  if (!report.ok()) return report.status();
  return report->epsilon;
}

}  // namespace

bool AuditReport::HasFlag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

absl::StatusOr<double> ExactEpsilon(double mu0, double mu1, int n) {
  return ExactEpsilonOver(mu0, mu1, n, 0, n);
}

absl::StatusOr<double> ExactEpsilonOver(double mu0, double mu1, int n,
                                        int first, int last) {
  if (absl::Status s = CheckOpenMu(mu0, mu1); !s.ok()) return s;
  absl::StatusOr<LawPair> laws = Laws(mu0, mu1, n);
  if (!laws.ok()) return laws.status();
  if (first < 0 || last > n || first > last) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "OutOfRange: outcome range [%d, %d] for n = %d", first, last, n));
  }
  double worst = 0.0;
  for (int k = first; k <= last; ++k) {
    worst = std::max(worst, std::abs(laws->first.log_probs()[k] -
                                     laws->second.log_probs()[k]));
  }
  return worst;
}

absl::StatusOr<double> HockeyStickDelta(double mu0, double mu1, int n,
                                        double eps) {
  if (!(eps >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: eps = %g < 0", eps));
  }
  absl::StatusOr<LawPair> laws = Laws(mu0, mu1, n);
  if (!laws.ok()) return laws.status();
  return HockeyStick(laws->first.log_probs(), laws->second.log_probs(), eps);
}

absl::StatusOr<MinMuResult> MinMu(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Channel& channel, const Projector& m) {
  absl::StatusOr<DensityMatrix> rho_out = ApplyChannel(channel, rho);
  if (!rho_out.ok()) return rho_out.status();
  absl::StatusOr<DensityMatrix> sigma_out = ApplyChannel(channel, sigma);
  if (!sigma_out.ok()) return sigma_out.status();
  absl::StatusOr<double> mu0 = Expectation(*rho_out, m);
  if (!mu0.ok()) return mu0.status();
  absl::StatusOr<double> mu1 = Expectation(*sigma_out, m);
  if (!mu1.ok()) return mu1.status();
  const bool by_rho = *mu0 <= *mu1;
  return MinMuResult{.mu0 = *mu0,
                     .mu1 = *mu1,
                     .min = by_rho ? *mu0 : *mu1,
                     .attained_by_rho = by_rho};
}

absl::StatusOr<bool> QdpCheck(const DensityMatrix& rho,
                              const DensityMatrix& sigma,
                              const Channel& channel,
                              const std::vector<Projector>& projectors,
                              double eps, double delta) {
  if (projectors.empty()) {
    return absl::InvalidArgumentError("IncompletePVM: no projectors");
  }
  if (projectors.size() > static_cast<size_t>(kMaxQdpOutcomes)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooManyOutcomes: %d > %d", projectors.size(),
                        kMaxQdpOutcomes));
  }
  if (!(eps >= 0.0) || !(delta >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: eps = %g, delta = %g", eps, delta));
  }
  const int dim = rho.dim();
  ComplexMatrix resolution = ComplexMatrix::Zero(dim, dim);
  for (const Projector& m : projectors) {
    if (m.dim() != dim) {
      return absl::InvalidArgumentError(
          absl::StrFormat("DimMismatch: %d vs %d", m.dim(), dim));
    }
    resolution += m.matrix();
  }
  const double defect =
      (resolution - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > kCompletenessTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("IncompletePVM: max |sum M_k - I| = %g", defect));
  }

  absl::StatusOr<DensityMatrix> rho_out = ApplyChannel(channel, rho);
  if (!rho_out.ok()) return rho_out.status();
  absl::StatusOr<DensityMatrix> sigma_out = ApplyChannel(channel, sigma);
  if (!sigma_out.ok()) return sigma_out.status();
  std::vector<double> p_rho;
  std::vector<double> p_sigma;
  for (const Projector& m : projectors) {
    absl::StatusOr<double> a = Expectation(*rho_out, m);
    if (!a.ok()) return a.status();
    absl::StatusOr<double> b = Expectation(*sigma_out, m);
    if (!b.ok()) return b.status();
    p_rho.push_back(*a);
    p_sigma.push_back(*b);
  }

  const double scale = std::exp(eps);
  const uint32_t subsets = 1u << projectors.size();
  for (uint32_t mask = 0; mask < subsets; ++mask) {
    double in_rho = 0.0;
    double in_sigma = 0.0;
    for (size_t k = 0; k < projectors.size(); ++k) {
      if (mask & (1u << k)) {
        in_rho += p_rho[k];
        in_sigma += p_sigma[k];
      }
    }
    if (in_rho > scale * in_sigma + delta + kQdpSlack) return false;
    if (in_sigma > scale * in_rho + delta + kQdpSlack) return false;
  }
  return true;
}

absl::StatusOr<AuditReport> DominanceAudit(const DominanceParams& params) {
  const double mu0 = params.mu0;
  const double mu1 = params.mu1;
  const int n = params.n;
  if (absl::Status s = CheckOpenMu(mu0, mu1); !s.ok()) return s;
  if (mu1 > mu0) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "PreconditionViolated: mu1 = %g must be the minimum (mu0 = %g)", mu1,
        mu0));
  }
  if (params.regime == Regime::kNoiseless) {
    if (mu0 - mu1 > params.d * params.r + kPreconditionSlack) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "PreconditionViolated: mu0 - mu1 = %g exceeds d r = %g", mu0 - mu1,
          params.d * params.r));
    }
  } else {
    if (!params.p.has_value() || !params.dim.has_value()) {
      return absl::InvalidArgumentError(
          "MissingParameter: depolarizing audit needs p and dim");
    }
    absl::StatusOr<double> bound =
        MuRatioBound(mu1, params.d, *params.p, *params.dim);
    if (!bound.ok()) return bound.status();
    if (mu0 > *bound + kPreconditionSlack) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "PreconditionViolated: mu0 = %g exceeds ratio bound %g", mu0,
          *bound));
    }
  }

  AuditReport report;
  absl::StatusOr<double> theorem = TheoremEpsilon(params);
  if (!theorem.ok()) return theorem.status();
  report.theorem_epsilon = *theorem;

  if (mu0 == mu1) report.flags.push_back(kFlagIdenticalLaws);
  const bool convex = mu0 + mu1 < 1.0;
  if (!convex) report.flags.push_back(kFlagNonConvexRegime);

  const double sigma0 = std::sqrt(mu0 * (1.0 - mu0) / n);
  auto endpoint = [&](double raw) -> absl::StatusOr<EndpointCheck> {
    EndpointCheck check;
    check.clipped = !(raw > 0.0 && raw < 1.0);
    check.x = std::clamp(raw, 0.0, 1.0);
    absl::StatusOr<double> llr = LogLikelihoodRatio(check.x, mu0, mu1, n);
    if (!llr.ok()) return llr.status();
    check.llr = *llr;
    check.dominated = check.llr <= report.theorem_epsilon + kDominanceSlack;
    return check;
  };
  absl::StatusOr<EndpointCheck> lower = endpoint(mu0 - 3.0 * sigma0);
  if (!lower.ok()) return lower.status();
  absl::StatusOr<EndpointCheck> upper = endpoint(mu0 + 3.0 * sigma0);
  if (!upper.ok()) return upper.status();
  report.lower = *lower;
  report.upper = *upper;
  if (lower->clipped || upper->clipped) {
    report.flags.push_back(kFlagEndpointClipped);
  }
  report.dominance_expected = convex && !lower->clipped && !upper->clipped;
  report.dominated = lower->dominated && upper->dominated;

  absl::StatusOr<LawPair> laws = Laws(mu0, mu1, n);
  if (!laws.ok()) return laws.status();
  const std::vector<double>& lp0 = laws->first.log_probs();
  const std::vector<double>& lp1 = laws->second.log_probs();
  double full = 0.0;
  double interior = 0.0;
  std::optional<double> window;
  for (int k = 0; k <= n; ++k) {
    const double gap = std::abs(lp0[k] - lp1[k]);
    full = std::max(full, gap);
    if (k == 0 || k == n) continue;
    interior = std::max(interior, gap);
    const double x = static_cast<double>(k) / n;
    if (x >= mu0 - 3.0 * sigma0 && x <= mu0 + 3.0 * sigma0) {
      window = std::max(window.value_or(0.0), gap);
    }
  }
  report.exact_epsilon = full;
  report.exact_epsilon_interior = interior;
  report.exact_epsilon_window = window;
  if (window.has_value()) {
    report.window_dominated =
        *window <= report.theorem_epsilon + kDominanceSlack;
  }
  report.exact_delta_at_eps =
      HockeyStick(lp0, lp1, std::max(0.0, report.theorem_epsilon));
  report.boundary_outcomes_excluded = {0, n};
  return report;
}

absl::StatusOr<AuditReport> MonteCarloAudit(double mu0, double mu1, int n,
                                            int64_t trials, uint64_t seed,
                                            double eps, double delta) {
  if (absl::Status s = CheckOpenMu(mu0, mu1); !s.ok()) return s;
  if (trials < kMinMonteCarloTrials) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "OutOfRange: trials = %d below the minimum %d", trials,
        kMinMonteCarloTrials));
  }
  if (!(eps >= 0.0) || !(delta >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: eps = %g, delta = %g", eps, delta));
  }
  absl::StatusOr<LawPair> laws = Laws(mu0, mu1, n);
  if (!laws.ok()) return laws.status();
  absl::StatusOr<std::vector<int>> draws0 = SampleCounts(mu0, n, trials, seed);
  if (!draws0.ok()) return draws0.status();
  absl::StatusOr<std::vector<int>> draws1 = SampleCounts(
      mu1, n, trials, DeriveSeed(seed, kSecondMechanismSalt));
  if (!draws1.ok()) return draws1.status();

  std::vector<int64_t> hist0(n + 1, 0);
  std::vector<int64_t> hist1(n + 1, 0);
  for (int k : *draws0) ++hist0[k];
  for (int k : *draws1) ++hist1[k];

  AuditReport report;
  report.trials = trials;
  report.seed = seed;
  report.theorem_epsilon = eps;
  report.requested_delta = delta;
  report.boundary_outcomes_excluded = {0, n};

  const std::vector<double>& lp0 = laws->first.log_probs();
  const std::vector<double>& lp1 = laws->second.log_probs();
  std::vector<double> emp0(n + 1);
  std::vector<double> emp1(n + 1);
  double exact_max = 0.0;
  double interior_max = 0.0;
  for (int k = 0; k <= n; ++k) {
    PerOutcome row;
    row.k = k;
    row.exact_log_ratio = lp0[k] - lp1[k];
    row.exact_prob0 = laws->first.probs()[k];
    row.exact_prob1 = laws->second.probs()[k];
    emp0[k] = static_cast<double>(hist0[k]) / trials;
    emp1[k] = static_cast<double>(hist1[k]) / trials;
    row.empirical_prob0 = emp0[k];
    row.empirical_prob1 = emp1[k];
    exact_max = std::max(exact_max, std::abs(row.exact_log_ratio));
    if (k != 0 && k != n) {
      interior_max = std::max(interior_max, std::abs(row.exact_log_ratio));
    }
    if (hist0[k] > 0 && hist1[k] > 0) {
      row.empirical_log_ratio =
          std::log(static_cast<double>(hist0[k])) -
          std::log(static_cast<double>(hist1[k]));
      const double error =
          std::abs(*row.empirical_log_ratio - row.exact_log_ratio);
      report.empirical_epsilon = std::max(report.empirical_epsilon.value_or(0),
                                          std::abs(*row.empirical_log_ratio));
      report.max_log_ratio_error =
          std::max(report.max_log_ratio_error.value_or(0.0), error);
    } else {
      report.zero_count_outcomes.push_back(k);
    }
    report.outcomes.push_back(row);
  }
  report.exact_epsilon = exact_max;
  report.exact_epsilon_interior = interior_max;
  report.exact_delta_at_eps = HockeyStick(lp0, lp1, eps);
  report.exact_satisfies_request = report.exact_delta_at_eps <= delta;
  report.empirical_delta_at_eps = HockeyStick(LogOf(emp0), LogOf(emp1), eps);
  return report;
}

}  // namespace shotqdp
