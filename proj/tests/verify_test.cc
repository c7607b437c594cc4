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

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "shotqdp/shot_model.h"
#include "test_util.h"

namespace shotqdp {
namespace {

using ::shotqdp::testing::OracleBinomialLogPmf;
using ::shotqdp::testing::RandomDensity;
using ::shotqdp::testing::RandomProjector;
using ::shotqdp::testing::ValueOrDie;
using ::testing::Contains;
using ::testing::ElementsAre;
using ::testing::StartsWith;

// Brute force over every outcome directly from the lgamma pmf.
double BruteExactEpsilon(double mu0, double mu1, int n) {
  std::vector<double> a = OracleBinomialLogPmf(mu0, n);
  std::vector<double> b = OracleBinomialLogPmf(mu1, n);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
  return worst;
}

double BruteHockeyStick(double mu0, double mu1, int n, double eps) {
  std::vector<double> a = OracleBinomialLogPmf(mu0, n);
  std::vector<double> b = OracleBinomialLogPmf(mu1, n);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    total += std::max(0.0, std::exp(a[k]) - std::exp(eps + b[k]));
  }
  return total;
}

TEST(ExactEpsilonTest, ReferenceCase) {
  EXPECT_NEAR(ValueOrDie(ExactEpsilon(0.25, 0.15, 4)), 4 * std::log(5.0 / 3.0),
              1e-12);
  EXPECT_NEAR(ValueOrDie(ExactEpsilon(0.25, 0.15, 4)), 2.043302495063963,
              1e-12);
  EXPECT_NEAR(ValueOrDie(ExactEpsilon(0.25, 0.15, 1)),
              std::log(0.25 / 0.15), 1e-14);
  EXPECT_THAT(std::string(ExactEpsilon(0.0, 0.15, 4).status().message()),
              StartsWith("DegenerateMu"));
}

TEST(ExactEpsilonTest, MatchesBruteForce) {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu0 = unit(rng);
    const double mu1 = unit(rng);
    const int n = 1 + trial % 60;
    const double expected = BruteExactEpsilon(mu0, mu1, n);
    EXPECT_NEAR(ValueOrDie(ExactEpsilon(mu0, mu1, n)), expected,
                1e-9 * std::max(1.0, expected));
  }
}

TEST(ExactEpsilonTest, NondecreasingInShots) {
  for (auto [mu0, mu1] : {std::pair{0.25, 0.15}, std::pair{0.6, 0.55},
                          std::pair{0.9, 0.2}, std::pair{0.02, 0.01}}) {
    double prev = 0.0;
    for (int n = 1; n <= 50; ++n) {
      const double eps = ValueOrDie(ExactEpsilon(mu0, mu1, n));
      EXPECT_GE(eps, prev - 1e-12) << mu0 << " " << mu1 << " " << n;
      prev = eps;
    }
  }
}

TEST(ExactEpsilonTest, RestrictedRange) {
  // Interior counts of the reference case: k = 1..3.
  std::vector<double> a = OracleBinomialLogPmf(0.25, 4);
  std::vector<double> b = OracleBinomialLogPmf(0.15, 4);
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
  EXPECT_NEAR(ValueOrDie(ExactEpsilonOver(0.25, 0.15, 4, 1, 3)), worst, 1e-12);
  EXPECT_FALSE(ExactEpsilonOver(0.25, 0.15, 4, 3, 1).ok());
}

TEST(HockeyStickTest, TotalVariationAtZero) {
  EXPECT_NEAR(ValueOrDie(HockeyStickDelta(0.25, 0.15, 4, 0.0)), 0.2056, 1e-12);
}

TEST(HockeyStickTest, VanishesAtExactEpsilon) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu0 = unit(rng);
    const double mu1 = unit(rng);
    const int n = 1 + trial % 40;
    const double eps = ValueOrDie(ExactEpsilon(mu0, mu1, n));
    EXPECT_NEAR(ValueOrDie(HockeyStickDelta(mu0, mu1, n, eps)), 0.0, 1e-12);
    EXPECT_NEAR(ValueOrDie(HockeyStickDelta(mu1, mu0, n, eps)), 0.0, 1e-12);
  }
}

TEST(HockeyStickTest, MatchesBruteForceAndIsMonotone) {
  std::mt19937_64 rng(305);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu0 = unit(rng);
    const double mu1 = unit(rng);
    const int n = 1 + trial % 30;
    double prev = 1.0;
    for (double eps : {0.0, 0.1, 0.5, 1.0, 2.0}) {
      const double delta = ValueOrDie(HockeyStickDelta(mu0, mu1, n, eps));
      EXPECT_NEAR(delta, BruteHockeyStick(mu0, mu1, n, eps), 1e-12);
      EXPECT_GE(delta, 0.0);
      EXPECT_LE(delta, prev + 1e-15);
      prev = delta;
    }
  }
  EXPECT_FALSE(HockeyStickDelta(0.25, 0.15, 4, -1.0).ok());
}

TEST(MinMuTest, PicksTheSmallerExpectation) {
  DensityMatrix rho = ValueOrDie(DensityMatrix::FromDiagonal({0.25, 0.75}));
  DensityMatrix sigma = ValueOrDie(DensityMatrix::FromDiagonal({0.15, 0.85}));
  Projector m = ValueOrDie(Projector::OntoBasis(2, {0}));
  MinMuResult r = ValueOrDie(MinMu(rho, sigma, Channel::Identity(2), m));
  EXPECT_DOUBLE_EQ(r.mu0, 0.25);
  EXPECT_DOUBLE_EQ(r.mu1, 0.15);
  EXPECT_DOUBLE_EQ(r.min, 0.15);
  EXPECT_FALSE(r.attained_by_rho);
  MinMuResult tie = ValueOrDie(MinMu(rho, rho, Channel::Identity(2), m));
  EXPECT_TRUE(tie.attained_by_rho);
}

TEST(MuRatioPropertyTest, DepolarizedPairsRespectTheRatioBound) {
  std::mt19937_64 rng(307);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    DensityMatrix rho = RandomDensity(dim, rng);
    DensityMatrix anchor = RandomDensity(dim, rng);
    const double d = unit(rng) * ValueOrDie(TraceDistance(rho, anchor));
    DensityMatrix sigma = ValueOrDie(NeighborState(rho, d, anchor));
    const double p = 0.01 + 0.99 * unit(rng);
    Channel e = ValueOrDie(Channel::Depolarizing(p, dim));
    Projector m = RandomProjector(dim, 1 + trial % (dim - 1), rng);
    MinMuResult mus = ValueOrDie(MinMu(rho, sigma, e, m));
    const double bound = ValueOrDie(MuRatioBound(mus.min, d, p, dim));
    EXPECT_LE(std::max(mus.mu0, mus.mu1), bound + 1e-12);
  }
}

std::vector<Projector> Binary(const Projector& m) {
  return {m, m.Complement()};
}

TEST(QdpCheckTest, ExactThresholdForBinaryMeasurement) {
  DensityMatrix rho = ValueOrDie(DensityMatrix::FromDiagonal({0.25, 0.75}));
  DensityMatrix sigma = ValueOrDie(DensityMatrix::FromDiagonal({0.15, 0.85}));
  Projector m = ValueOrDie(Projector::OntoBasis(2, {0}));
  const double eps = std::log(0.25 / 0.15);
  EXPECT_TRUE(ValueOrDie(
      QdpCheck(rho, sigma, Channel::Identity(2), Binary(m), eps, 0.0)));
  EXPECT_FALSE(ValueOrDie(
      QdpCheck(rho, sigma, Channel::Identity(2), Binary(m), eps - 1e-6, 0.0)));
  // The missing mass can be covered by delta instead.
  EXPECT_TRUE(ValueOrDie(
      QdpCheck(rho, sigma, Channel::Identity(2), Binary(m), 0.0, 0.1)));
}

TEST(QdpCheckTest, MonotoneInBothParameters) {
  std::mt19937_64 rng(309);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    DensityMatrix rho = RandomDensity(3, rng);
    DensityMatrix sigma = RandomDensity(3, rng);
    Projector a = ValueOrDie(Projector::OntoBasis(3, {0}));
    Projector b = ValueOrDie(Projector::OntoBasis(3, {1}));
    Projector c = ValueOrDie(Projector::OntoBasis(3, {2}));
    const double eps = unit(rng);
    const double delta = 0.2 * unit(rng);
    const bool pass = ValueOrDie(QdpCheck(rho, sigma, Channel::Identity(3),
                                          {a, b, c}, eps, delta));
    if (pass) {
      EXPECT_TRUE(ValueOrDie(QdpCheck(rho, sigma, Channel::Identity(3),
                                      {a, b, c}, eps + unit(rng),
                                      delta + 0.1 * unit(rng))));
    }
  }
}

TEST(QdpCheckTest, BinaryOutcomesReduceToSingletons) {
  // For two outcomes the subset family is {}, {0}, {1}, {0, 1}; the empty
  // and full sets hold trivially, so the singletons decide.
  std::mt19937_64 rng(311);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 3;
    DensityMatrix rho = RandomDensity(dim, rng);
    DensityMatrix sigma = RandomDensity(dim, rng);
    Projector m = RandomProjector(dim, 1, rng);
    const double eps = unit(rng);
    const double delta = 0.1 * unit(rng);
    const double a0 = ValueOrDie(Expectation(rho, m));
    const double b0 = ValueOrDie(Expectation(sigma, m));
    const double a1 = 1 - a0;
    const double b1 = 1 - b0;
    const double slack = 1e-12;
    const bool singletons = a0 <= std::exp(eps) * b0 + delta + slack &&
                            a1 <= std::exp(eps) * b1 + delta + slack &&
                            b0 <= std::exp(eps) * a0 + delta + slack &&
                            b1 <= std::exp(eps) * a1 + delta + slack;
    EXPECT_EQ(ValueOrDie(QdpCheck(rho, sigma, Channel::Identity(dim),
                                  Binary(m), eps, delta)),
              singletons);
  }
}

TEST(QdpCheckTest, RejectsBadMeasurements) {
  DensityMatrix rho = DensityMatrix::MaximallyMixed(2);
  Projector m = ValueOrDie(Projector::OntoBasis(2, {0}));
  EXPECT_THAT(std::string(QdpCheck(rho, rho, Channel::Identity(2), {m}, 0, 0)
                              .status()
                              .message()),
              StartsWith("IncompletePVM"));
  std::vector<Projector> many;
  for (int k = 0; k < 17; ++k) {
    many.push_back(ValueOrDie(Projector::OntoBasis(17, {k})));
  }
  DensityMatrix big = DensityMatrix::MaximallyMixed(17);
  EXPECT_THAT(std::string(QdpCheck(big, big, Channel::Identity(17), many, 0, 0)
                              .status()
                              .message()),
              StartsWith("TooManyOutcomes"));
}

DominanceParams ReferenceParams() {
  DominanceParams p;
  p.d = 0.1;
  p.r = 1;
  p.n = 10;
  p.mu0 = 0.25;
  p.mu1 = 0.15;
  return p;
}

TEST(DominanceAuditTest, ReferenceCase) {
  AuditReport r = ValueOrDie(DominanceAudit(ReferenceParams()));
  EXPECT_NEAR(r.theorem_epsilon, 6.421595401812857, 1e-12);
  ASSERT_TRUE(r.lower.has_value());
  ASSERT_TRUE(r.upper.has_value());
  EXPECT_TRUE(r.lower->clipped);
  EXPECT_FALSE(r.upper->clipped);
  EXPECT_NEAR(r.upper->llr, 5.7317013187, 1e-9);
  EXPECT_TRUE(r.dominated);
  EXPECT_FALSE(r.dominance_expected);
  EXPECT_THAT(r.flags, Contains(kFlagEndpointClipped));
  EXPECT_THAT(r.boundary_outcomes_excluded, ElementsAre(0, 10));
  EXPECT_NEAR(r.exact_epsilon, 10 * std::log(0.25 / 0.15), 1e-12);
}

TEST(DominanceAuditTest, UnclippedEndpointsAreExpectedToDominate) {
  DominanceParams p = ReferenceParams();
  p.n = 100;
  AuditReport r = ValueOrDie(DominanceAudit(p));
  EXPECT_TRUE(r.dominance_expected);
  EXPECT_TRUE(r.dominated);
  EXPECT_FALSE(r.lower->clipped);
}

TEST(DominanceAuditTest, FlagsNonConvexRegime) {
  DominanceParams p = ReferenceParams();
  p.mu0 = 0.6;
  p.mu1 = 0.55;
  p.n = 1000;
  AuditReport r = ValueOrDie(DominanceAudit(p));
  EXPECT_THAT(r.flags, Contains(kFlagNonConvexRegime));
  EXPECT_FALSE(r.dominance_expected);
}

TEST(DominanceAuditTest, Preconditions) {
  DominanceParams p = ReferenceParams();
  p.mu0 = 0.1;
  EXPECT_THAT(std::string(DominanceAudit(p).status().message()),
              StartsWith("PreconditionViolated"));
  p = ReferenceParams();
  p.mu0 = 0.3;
  EXPECT_THAT(std::string(DominanceAudit(p).status().message()),
              StartsWith("PreconditionViolated"));
  p = ReferenceParams();
  p.regime = Regime::kDepolarizing;
  p.p = 0.5;
  p.dim = 2;
  p.mu0 = 0.19;  // above 0.15 * 1.2
  EXPECT_THAT(std::string(DominanceAudit(p).status().message()),
              StartsWith("PreconditionViolated"));
  p.mu0 = 0.17;
  EXPECT_TRUE(DominanceAudit(p).ok());
}

TEST(DominanceAuditTest, ReportsTheKnownCounterexample) {
  DominanceParams p;
  p.d = 0.3551;
  p.r = 1;
  p.n = 4927;
  p.mu0 = 0.3535;
  p.mu1 = 0.002736;
  AuditReport r = ValueOrDie(DominanceAudit(p));
  EXPECT_TRUE(r.dominance_expected);
  EXPECT_FALSE(r.dominated);
  EXPECT_FALSE(r.upper->dominated);
}

TEST(MonteCarloAuditTest, DeterministicForFixedSeed) {
  AuditReport a = ValueOrDie(MonteCarloAudit(0.25, 0.15, 4, 20000, 42, 2.1, 0));
  AuditReport b = ValueOrDie(MonteCarloAudit(0.25, 0.15, 4, 20000, 42, 2.1, 0));
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (size_t k = 0; k < a.outcomes.size(); ++k) {
    EXPECT_EQ(a.outcomes[k].empirical_prob0, b.outcomes[k].empirical_prob0);
    EXPECT_EQ(a.outcomes[k].empirical_log_ratio,
              b.outcomes[k].empirical_log_ratio);
  }
  EXPECT_EQ(a.empirical_epsilon, b.empirical_epsilon);
}

TEST(MonteCarloAuditTest, ExactFieldsAndRequest) {
  AuditReport r = ValueOrDie(MonteCarloAudit(0.25, 0.15, 4, 1000, 1, 2.1, 0));
  EXPECT_NEAR(r.exact_epsilon, 2.043302495063963, 1e-12);
  EXPECT_EQ(r.exact_delta_at_eps, 0.0);
  EXPECT_EQ(r.exact_satisfies_request, true);
  AuditReport tight =
      ValueOrDie(MonteCarloAudit(0.25, 0.15, 4, 1000, 1, 0.0, 0.1));
  EXPECT_NEAR(tight.exact_delta_at_eps, 0.2056, 1e-12);
  EXPECT_EQ(tight.exact_satisfies_request, false);
  EXPECT_FALSE(MonteCarloAudit(0.25, 0.15, 4, 999, 1, 0.0, 0.0).ok());
}

TEST(MonteCarloAuditTest, HistogramsConvergeAcrossSeeds) {
  // Per-outcome probability error within 5 binomial standard errors for
  // every interior count, at 99%+ of seeds.
  const int n = 4;
  const int64_t trials = 1000000;
  int good = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    AuditReport r = ValueOrDie(MonteCarloAudit(0.25, 0.15, n, trials,
                                               static_cast<uint64_t>(seed),
                                               2.1, 0.0));
    bool ok = true;
    for (const PerOutcome& o : r.outcomes) {
      if (o.k == 0 || o.k == n) continue;
      ok = ok &&
           std::fabs(o.empirical_prob0 - o.exact_prob0) <=
               5 * std::sqrt(o.exact_prob0 / trials) &&
           std::fabs(o.empirical_prob1 - o.exact_prob1) <=
               5 * std::sqrt(o.exact_prob1 / trials);
    }
    good += ok;
  }
  EXPECT_GE(good, seeds * 99 / 100);
}

}  // namespace
}  // namespace shotqdp
