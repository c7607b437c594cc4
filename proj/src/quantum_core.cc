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

#include "shotqdp/quantum_core.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace shotqdp {
namespace {

using HermitianSolver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>;

double HermitianDefect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd HermitianEigenvalues(const ComplexMatrix& m) {
  HermitianSolver solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

absl::Status CheckSameDim(int a, int b) {
  if (a != b) {
    return absl::InvalidArgumentError(
        absl::StrFormat("DimMismatch: %d vs %d", a, b));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status CheckDensityInvariants(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "NotSquare: density matrix must be D x D with D >= 1, got %d x %d",
        m.rows(), m.cols()));
  }
  if (!m.allFinite()) {
    return absl::InvalidArgumentError("NotHermitian: non-finite entry");
  }
  const double defect = HermitianDefect(m);
  if (defect > kValidationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "NotHermitian: max |m(i,j) - conj(m(j,i))| = %g", defect));
  }
  const double min_eigenvalue = HermitianEigenvalues(m).minCoeff();
  if (min_eigenvalue < -kValidationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "NotPSD: most negative eigenvalue %g", min_eigenvalue));
  }
  const double trace = m.trace().real();
  if (std::abs(trace - 1.0) > kValidationTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TraceNotOne: trace = %.17g", trace));
  }
  return absl::OkStatus();
}

absl::StatusOr<DensityMatrix> DensityMatrix::Create(ComplexMatrix entries) {
  if (absl::Status status = CheckDensityInvariants(entries); !status.ok()) {
    return status;
  }
  return DensityMatrix(std::move(entries));
}

absl::StatusOr<DensityMatrix> DensityMatrix::FromDiagonal(
    const std::vector<double>& diagonal) {
  const int dim = static_cast<int>(diagonal.size());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = diagonal[i];
  return Create(std::move(m));
}

absl::StatusOr<DensityMatrix> DensityMatrix::FromPureState(
    const Eigen::VectorXcd& v) {
  return Create(v * v.adjoint());
}

DensityMatrix DensityMatrix::MaximallyMixed(int dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) /
                       static_cast<double>(dim));
}

absl::StatusOr<DensityMatrix> DensityMatrix::BasisState(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: basis index %d for dimension %d", k, dim));
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

absl::StatusOr<Projector> Projector::FromColumns(const ComplexMatrix& columns) {
  const int dim = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  if (dim < 1) {
    return absl::InvalidArgumentError("OutOfRange: projector dimension < 1");
  }
  if (k > dim) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "ColumnsNotOrthonormal: %d columns in dimension %d", k, dim));
  }
  if (k > 0) {
    const ComplexMatrix gram = columns.adjoint() * columns;
    const double defect =
        (gram - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (defect > kValidationTolerance) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "ColumnsNotOrthonormal: max |V^dagger V - I| = %g", defect));
    }
  }
  ComplexMatrix m = columns * columns.adjoint();
  // Symmetrize away rounding so downstream Hermitian checks are exact.
  m = 0.5 * (m + m.adjoint()).eval();
  return Projector(std::move(m), k);
}

absl::StatusOr<Projector> Projector::FromMatrix(ComplexMatrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    return absl::InvalidArgumentError("NotSquare: projector must be D x D");
  }
  const double defect = HermitianDefect(entries);
  if (defect > kValidationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "NotHermitian: max |m(i,j) - conj(m(j,i))| = %g", defect));
  }
  const double idempotency =
      (entries * entries - entries).cwiseAbs().maxCoeff();
  if (idempotency > kValidationTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("NotIdempotent: max |M M - M| = %g", idempotency));
  }
  const Eigen::VectorXd eigenvalues = HermitianEigenvalues(entries);
  int unit_eigenvalues = 0;
  for (double lambda : eigenvalues) {
    if (std::abs(lambda - 1.0) <= kRankTolerance) {
      ++unit_eigenvalues;
    } else if (std::abs(lambda) > kRankTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("NotProjective: eigenvalue %g not in {0, 1}", lambda));
    }
  }
  const double trace = entries.trace().real();
  const int rank = static_cast<int>(std::lround(trace));
  if (std::abs(trace - rank) > kRankTolerance || rank != unit_eigenvalues) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "RankMismatch: Tr M = %.17g but %d unit eigenvalues", trace,
        unit_eigenvalues));
  }
  return Projector(std::move(entries), rank);
}

absl::StatusOr<Projector> Projector::OntoBasis(int dim,
                                               const std::vector<int>& indices) {
  if (dim < 1) {
    return absl::InvalidArgumentError("OutOfRange: projector dimension < 1");
  }
  ComplexMatrix columns = ComplexMatrix::Zero(dim, indices.size());
  for (size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] >= dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "OutOfRange: basis index %d for dimension %d", indices[j], dim));
    }
    columns(indices[j], j) = 1.0;
  }
  return FromColumns(columns);
}

Projector Projector::Complement() const {
  return Projector(ComplexMatrix::Identity(dim(), dim()) - entries_,
                   dim() - rank_);
}

Channel Channel::Identity(int dim) { return Channel(Kind::kIdentity, 0.0, dim); }

absl::StatusOr<Channel> Channel::Depolarizing(double p, int dim) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: depolarizing probability %g", p));
  }
  if (dim < 1) {
    return absl::InvalidArgumentError("OutOfRange: channel dimension < 1");
  }
  return Channel(Kind::kDepolarizing, p, dim);
}

absl::StatusOr<double> TraceDistance(const DensityMatrix& rho,
                                     const DensityMatrix& sigma) {
  if (absl::Status s = CheckSameDim(rho.dim(), sigma.dim()); !s.ok()) return s;
  const Eigen::VectorXd eigenvalues =
      HermitianEigenvalues(rho.matrix() - sigma.matrix());
  return std::clamp(0.5 * eigenvalues.cwiseAbs().sum(), 0.0, 1.0);
}

absl::StatusOr<double> Expectation(const DensityMatrix& rho,
                                   const Projector& m) {
  if (absl::Status s = CheckSameDim(rho.dim(), m.dim()); !s.ok()) return s;
  // Tr(AB) = sum_ij A_ij B_ji.
  const double value =
      (rho.matrix().cwiseProduct(m.matrix().transpose())).sum().real();
  if (value < -kValidationTolerance || value > 1.0 + kValidationTolerance) {
    return absl::InternalError(
        absl::StrFormat("expectation %.17g outside [0, 1]", value));
  }
  return std::clamp(value, 0.0, 1.0);
}

absl::StatusOr<DensityMatrix> ApplyChannel(const Channel& channel,
                                           const DensityMatrix& rho) {
  if (absl::Status s = CheckSameDim(channel.dim(), rho.dim()); !s.ok()) {
    return s;
  }
  switch (channel.kind()) {
    case Channel::Kind::kIdentity:
      return rho;
    case Channel::Kind::kDepolarizing:
      return MixStates(rho, DensityMatrix::MaximallyMixed(rho.dim()),
                       channel.p());
  }
  return absl::InternalError("unknown channel kind");
}

absl::StatusOr<DensityMatrix> MixStates(const DensityMatrix& a,
                                        const DensityMatrix& b,
                                        double weight) {
  if (absl::Status s = CheckSameDim(a.dim(), b.dim()); !s.ok()) return s;
  if (!(weight >= 0.0 && weight <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: mixing weight %g", weight));
  }
  // Convex combinations of density matrices are density matrices.
  return DensityMatrix((1.0 - weight) * a.matrix() + weight * b.matrix());
}

absl::StatusOr<DensityMatrix> NeighborState(const DensityMatrix& rho,
                                            double distance,
                                            const DensityMatrix& anchor) {
  absl::StatusOr<double> reach = TraceDistance(rho, anchor);
  if (!reach.ok()) return reach.status();
  if (!(distance >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("OutOfRange: distance %g < 0", distance));
  }
  if (distance == 0.0) return rho;
  if (*reach <= kValidationTolerance) {
    return absl::InvalidArgumentError(
        "AnchorCoincides: anchor is at trace distance 0 from rho");
  }
  if (distance > *reach + kValidationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "DistanceTooLarge: requested %g but anchor is only %g away", distance,
        *reach));
  }
  return MixStates(rho, anchor, std::min(1.0, distance / *reach));
}

absl::StatusOr<DensityMatrix> NeighborState(const DensityMatrix& rho,
                                            double distance) {
  return NeighborState(rho, distance, DensityMatrix::MaximallyMixed(rho.dim()));
}

absl::StatusOr<double> OverlapGap(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const Projector& m) {
  if (absl::Status s = CheckSameDim(rho.dim(), sigma.dim()); !s.ok()) return s;
  if (absl::Status s = CheckSameDim(rho.dim(), m.dim()); !s.ok()) return s;
  const ComplexMatrix diff = rho.matrix() - sigma.matrix();
  return diff.cwiseProduct(m.matrix().transpose()).sum().real();
}

}  // namespace shotqdp
