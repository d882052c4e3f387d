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

#include <cmath>
#include <vector>

#include "coexist/operator_core.hpp"
#include "coexist/observables.hpp"

namespace coexist::testing {

inline const Complex kI{0.0, 1.0};

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline CMatrix pauli_x() { return mat2(0, 1, 1, 0); }
inline CMatrix pauli_y() { return mat2(0, -kI, kI, 0); }
inline CMatrix pauli_z() { return mat2(1, 0, 0, -1); }
inline CMatrix id2() { return CMatrix::Identity(2, 2); }

inline CVector ket(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (Complex x : xs) v(k++) = x;
  return v;
}

inline CMatrix proj(const CVector& v) { return v * v.adjoint() / v.squaredNorm(); }

inline CMatrix diag(std::initializer_list<double> xs) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) {
    m(k, k) = x;
    ++k;
  }
  return m;
}

inline CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

// {(I + s)/2, (I - s)/2} for an involution s, or its unsharp version.
inline DiscreteObservable binary(const CMatrix& s, double gamma = 1.0) {
  const CMatrix i = CMatrix::Identity(s.rows(), s.cols());
  return DiscreteObservable({(i + gamma * s) / 2.0, (i - gamma * s) / 2.0});
}

inline DiscreteObservable sz_pvm() { return binary(pauli_z()); }
inline DiscreteObservable sx_pvm() { return binary(pauli_x()); }

inline double norm_of(const CMatrix& a) { return operator_norm(a); }

}  // namespace coexist::testing
