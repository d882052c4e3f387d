// Copyright 2026 The coexist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coexist/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coexist {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MapMismatch: return "MapMismatch";
    case ErrorKind::TooManyOutcomes: return "TooManyOutcomes";
    case ErrorKind::NotSummable: return "NotSummable";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::CertificateInvalid: return "CertificateInvalid";
    case ErrorKind::WitnessNotRegular: return "WitnessNotRegular";
    case ErrorKind::EmbeddingNotFound: return "EmbeddingNotFound";
    case ErrorKind::WitnessInvalid: return "WitnessInvalid";
    case ErrorKind::NotPvm: return "NotPvm";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::InvalidScheme: return "InvalidScheme";
    case ErrorKind::PointerNotProjective: return "PointerNotProjective";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (herm < 0 || psd < 0 || eq < 0 || prob < 0) {
    throw CoexistError(
        ErrorKind::ValidationError, "tolerances must be nonnegative");
  }
}

CMatrix Subspace::projector() const {
  if (dim() == 0) return CMatrix::Zero(ambient_dim, ambient_dim);
  return basis * basis.adjoint();
}

double Subspace::residual(const CVector& v) const {
  if (dim() == 0) return v.norm();
  return (v - basis * (basis.adjoint() * v)).norm();
}

CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw CoexistError(
        ErrorKind::DimMismatch,
        std::string(what) + ": expected a nonempty square matrix");
  }
}

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw CoexistError(
        ErrorKind::DimMismatch, std::string(what) + ": dimensions differ (" +
                                    std::to_string(a.rows()) + " vs " +
                                    std::to_string(b.rows()) + ")");
  }
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double hermiticity_deviation(const CMatrix& a) {
  return operator_norm(a - a.adjoint());
}

bool is_hermitian(const CMatrix& a, const Tolerance& tol) {
  return a.rows() == a.cols() && hermiticity_deviation(a) <= tol.herm;
}

RVector hermitian_eigenvalues(const CMatrix& a) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::vector<SpectralComponent> spectral_decomposition(
    const CMatrix& a, const Tolerance& tol) {
  require_square(a, "spectral_decomposition");
  const double dev = hermiticity_deviation(a);
  if (dev > tol.herm) {
    throw CoexistError(
        ErrorKind::NotHermitian,
        "Hermiticity deviation " + std::to_string(dev) + " exceeds tolerance");
  }
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const RVector& values = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();

  std::vector<SpectralComponent> out;
  Eigen::Index start = 0;
  const Eigen::Index d = h.rows();
  for (Eigen::Index k = 1; k <= d; ++k) {
    if (k < d && values(k) - values(k - 1) <= kEigenvalueMergeGap) continue;
    const auto block = vectors.middleCols(start, k - start);
    out.push_back(
        {values.segment(start, k - start).mean(), block * block.adjoint()});
    start = k;
  }
  return out;
}

bool is_psd(const CMatrix& a, const Tolerance& tol) {
  if (!is_hermitian(a, tol)) return false;
  return hermitian_eigenvalues(a)(0) >= -tol.psd;
}

bool loewner_leq(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  return hermitian_eigenvalues(b - a)(0) >= -tol.psd;
}

bool is_effect(const CMatrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (!is_hermitian(a, tol)) return false;
  const RVector ev = hermitian_eigenvalues(a);
  return ev(0) >= -tol.psd && ev(ev.size() - 1) <= 1.0 + tol.psd;
}

bool is_projection(const CMatrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (!is_hermitian(a, tol)) return false;
  return operator_norm(a * a - a) <= tol.eq;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return operator_norm(a - b) <= tol.eq;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Subspace kernel_intersection(
    std::span<const CMatrix> matrices, const Tolerance& tol) {
  if (matrices.empty()) {
    throw CoexistError(ErrorKind::EmptyInput, "kernel_intersection: no input");
  }
  const Eigen::Index d = matrices.front().cols();
  for (const CMatrix& m : matrices) {
    require_same_dim(matrices.front(), m, "kernel_intersection");
  }
  CMatrix stacked(d * static_cast<Eigen::Index>(matrices.size()), d);
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    stacked.middleRows(static_cast<Eigen::Index>(k) * d, d) = matrices[k];
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol.eq) ++rank;
  Subspace out;
  out.ambient_dim = d;
  out.basis = svd.matrixV().rightCols(d - rank);
  return out;
}

CMatrix projection_meet(const CMatrix& p, const CMatrix& q, const Tolerance& tol) {
  require_same_dim(p, q, "projection_meet");
  if (!is_projection(p, tol) || !is_projection(q, tol)) {
    throw CoexistError(
        ErrorKind::NotProjection, "projection_meet: arguments must be projections");
  }
  const CMatrix id = identity(p.rows());
  const std::vector<CMatrix> complements{id - p, id - q};
  return kernel_intersection(complements, tol).projector();
}

CMatrix partial_trace_apparatus(
    const CMatrix& a, Eigen::Index dim_h, Eigen::Index dim_k) {
  if (dim_h <= 0 || dim_k <= 0 || a.rows() != dim_h * dim_k ||
      a.cols() != dim_h * dim_k) {
    throw CoexistError(
        ErrorKind::DimMismatch, "partial_trace_apparatus: operator is " +
                                    std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + ", expected " +
                                    std::to_string(dim_h * dim_k));
  }
  CMatrix out = CMatrix::Zero(dim_h, dim_h);
  for (Eigen::Index i = 0; i < dim_h; ++i) {
    for (Eigen::Index j = 0; j < dim_h; ++j) {
      Complex s = 0;
      for (Eigen::Index k = 0; k < dim_k; ++k) {
        s += a(i * dim_k + k, j * dim_k + k);
      }
      out(i, j) = s;
    }
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

CMatrix map_spectrum(const CMatrix& a, double (*f)(double)) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  RVector mapped = solver.eigenvalues().unaryExpr(f);
  return solver.eigenvectors() * mapped.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

CMatrix psd_sqrt(const CMatrix& a) {
  require_square(a, "psd_sqrt");
  return map_spectrum(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix clip_to_psd(const CMatrix& a) {
  require_square(a, "clip_to_psd");
  return map_spectrum(a, [](double x) { return std::max(x, 0.0); });
}

}  // namespace coexist
