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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "coexist/errors.hpp"

namespace coexist {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Numerical slack used by every predicate in the library.
//   herm: operator-norm bound on A - A^dagger
//   psd:  eigenvalue floor (and ceiling slack for effects)
//   eq:   operator-norm bound for operator equality
//   prob: bound on probability sums and traces
struct Tolerance {
  double herm = 1e-10;
  double psd = 1e-10;
  double eq = 1e-8;
  double prob = 1e-9;

  // Throws ValidationError on a negative field.
  void validate() const;
};

// Eigenvalues closer than this are merged into one eigenprojection.
inline constexpr double kEigenvalueMergeGap = 1e-8;

// Orthonormal basis stored column-wise; a zero-column basis is the zero
// subspace.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  CMatrix basis;

  Eigen::Index dim() const { return basis.cols(); }
  CMatrix projector() const;
  // Distance of v from the subspace (norm of the orthogonal residual).
  double residual(const CVector& v) const;
};

struct SpectralComponent {
  double eigenvalue;
  CMatrix projection;
};

CMatrix identity(Eigen::Index d);

double operator_norm(const CMatrix& a);
double hermiticity_deviation(const CMatrix& a);
bool is_hermitian(const CMatrix& a, const Tolerance& tol = {});

// Ascending eigenvalues of the Hermitian part of a.
RVector hermitian_eigenvalues(const CMatrix& a);

// Eigenvalues ascending, degenerate eigenvalues merged.
std::vector<SpectralComponent> spectral_decomposition(
    const CMatrix& a, const Tolerance& tol = {});

bool is_psd(const CMatrix& a, const Tolerance& tol = {});
// a <= b in the Loewner order, i.e. b - a is PSD within tol.psd.
bool loewner_leq(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});
bool is_effect(const CMatrix& a, const Tolerance& tol = {});
bool is_projection(const CMatrix& a, const Tolerance& tol = {});
bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

CMatrix commutator(const CMatrix& a, const CMatrix& b);

// Orthonormal basis of the common kernel of all inputs, by singular value
// thresholding of the stacked matrix at tol.eq.
Subspace kernel_intersection(
    std::span<const CMatrix> matrices, const Tolerance& tol = {});

// Projection onto ran(p) ∩ ran(q).
CMatrix projection_meet(
    const CMatrix& p, const CMatrix& q, const Tolerance& tol = {});

// Tr_K of an operator on H ⊗ K, with H the leading (slow) tensor index.
CMatrix partial_trace_apparatus(
    const CMatrix& a, Eigen::Index dim_h, Eigen::Index dim_k);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Spectral square root of the Hermitian part, negative eigenvalues clipped.
CMatrix psd_sqrt(const CMatrix& a);
// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
CMatrix clip_to_psd(const CMatrix& a);

void require_square(const CMatrix& a, const char* what);
void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what);

}  // namespace coexist
