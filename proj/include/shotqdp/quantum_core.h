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

#ifndef SHOTQDP_QUANTUM_CORE_H_
#define SHOTQDP_QUANTUM_CORE_H_

#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace shotqdp {

using ComplexMatrix = Eigen::MatrixXcd;

// Tolerance used when validating Hermiticity, positivity, trace and
// idempotency of user-supplied operators.
inline constexpr double kValidationTolerance = 1e-10;
// Tolerance on the projector eigenvalues and on |Tr M - rank|.
inline constexpr double kRankTolerance = 1e-8;

// Returns OK if `m` is a valid density matrix, otherwise an InvalidArgument
// status whose message starts with the violated invariant (NotSquare,
// NotHermitian, NotPSD, TraceNotOne).
absl::Status CheckDensityInvariants(const ComplexMatrix& m);

// A D x D Hermitian, positive semidefinite, unit-trace operator. Instances are
// immutable and can only be obtained through the validating factories or the
// operations in this header, so every DensityMatrix is known to be valid.
class DensityMatrix {
 public:
  static absl::StatusOr<DensityMatrix> Create(ComplexMatrix entries);
  static absl::StatusOr<DensityMatrix> FromDiagonal(
      const std::vector<double>& diagonal);
  // Pure state |v><v| for a normalized vector `v`.
  static absl::StatusOr<DensityMatrix> FromPureState(const Eigen::VectorXcd& v);
  static DensityMatrix MaximallyMixed(int dim);
  // |k><k| in the computational basis.
  static absl::StatusOr<DensityMatrix> BasisState(int dim, int k);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }

 private:
  explicit DensityMatrix(ComplexMatrix entries)
      : entries_(std::move(entries)) {}

  friend absl::StatusOr<DensityMatrix> MixStates(const DensityMatrix&,
                                                 const DensityMatrix&, double);

  ComplexMatrix entries_;
};

// A Hermitian idempotent measurement operator M = V V^dagger.
class Projector {
 public:
  // Builds M = V V^dagger from D x k orthonormal columns. k = 0 yields the
  // zero operator of dimension D.
  static absl::StatusOr<Projector> FromColumns(const ComplexMatrix& columns);
  // Validates an explicit operator (Hermitian, idempotent, spectrum in {0,1},
  // round(Tr M) consistent with the eigenvalue count).
  static absl::StatusOr<Projector> FromMatrix(ComplexMatrix entries);
  // Projector onto the span of the listed computational basis vectors.
  static absl::StatusOr<Projector> OntoBasis(int dim,
                                             const std::vector<int>& indices);

  int dim() const { return static_cast<int>(entries_.rows()); }
  int rank() const { return rank_; }
  const ComplexMatrix& matrix() const { return entries_; }
  // Rank 0 or rank D: every state then yields expectation 0 or 1, where the
  // shot-noise budgets divide by zero.
  bool is_degenerate() const { return rank_ == 0 || rank_ == dim(); }

  // I - M.
  Projector Complement() const;

 private:
  Projector(ComplexMatrix entries, int rank)
      : entries_(std::move(entries)), rank_(rank) {}

  ComplexMatrix entries_;
  int rank_;
};

class Channel {
 public:
  enum class Kind { kIdentity, kDepolarizing };

  static Channel Identity(int dim);
  // E(rho) = (1 - p) rho + (p / D) I.
  static absl::StatusOr<Channel> Depolarizing(double p, int dim);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  int dim() const { return dim_; }

 private:
  Channel(Kind kind, double p, int dim) : kind_(kind), p_(p), dim_(dim) {}

  Kind kind_;
  double p_;
  int dim_;
};

// Half the sum of absolute eigenvalues of rho - sigma.
absl::StatusOr<double> TraceDistance(const DensityMatrix& rho,
                                     const DensityMatrix& sigma);

// Re Tr(rho M), clamped into [0, 1] when it lies within kValidationTolerance
// outside.
absl::StatusOr<double> Expectation(const DensityMatrix& rho,
                                   const Projector& m);

absl::StatusOr<DensityMatrix> ApplyChannel(const Channel& channel,
                                           const DensityMatrix& rho);

// (1 - weight) a + weight b for weight in [0, 1].
absl::StatusOr<DensityMatrix> MixStates(const DensityMatrix& a,
                                        const DensityMatrix& b, double weight);

// Returns sigma = (1 - lambda) rho + lambda anchor with lambda chosen so that
// TraceDistance(rho, sigma) == distance. Trace distance is affine along this
// segment, so lambda = distance / TraceDistance(rho, anchor).
//
// Errors: AnchorCoincides if the anchor equals rho, DistanceTooLarge if
// `distance` exceeds TraceDistance(rho, anchor).
absl::StatusOr<DensityMatrix> NeighborState(const DensityMatrix& rho,
                                            double distance,
                                            const DensityMatrix& anchor);

// Same with the maximally mixed state as anchor.
absl::StatusOr<DensityMatrix> NeighborState(const DensityMatrix& rho,
                                            double distance);

// Re Tr[(rho - sigma) M]. Bounded above by TraceDistance(rho, sigma) * rank.
absl::StatusOr<double> OverlapGap(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Projector& m);

}  // namespace shotqdp

#endif  // SHOTQDP_QUANTUM_CORE_H_
