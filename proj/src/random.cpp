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

#include "coexist/random.hpp"

#include <algorithm>
#include <numeric>

namespace coexist {

CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

CMatrix random_hermitian(Eigen::Index d, Rng& rng) {
  const CMatrix g = random_gaussian(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_unitary(Eigen::Index d, Rng& rng) {
  const CMatrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(k) *= diag / mag;
  }
  return q;
}

CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return random_unitary(rows, rng).leftCols(cols);
}

CVector random_unit_vector(Eigen::Index d, Rng& rng) {
  CVector v = random_gaussian(d, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_density(Eigen::Index d, Rng& rng) {
  const CMatrix g = random_gaussian(d, d, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

DiscreteObservable random_povm(Eigen::Index d, std::size_t n, Rng& rng) {
  std::vector<CMatrix> g(n);
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    const CMatrix x = random_gaussian(d, d, rng);
    g[k] = x * x.adjoint();
    total += g[k];
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (total + total.adjoint()));
  const CMatrix inv_sqrt = solver.operatorInverseSqrt();
  for (CMatrix& a : g) {
    a = inv_sqrt * a * inv_sqrt;
    a = 0.5 * (a + a.adjoint()).eval();
  }
  return DiscreteObservable(std::move(g));
}

DiscreteObservable random_pvm(Eigen::Index d, std::size_t n, Rng& rng) {
  const CMatrix u = random_unitary(d, rng);
  std::vector<std::size_t> label(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < label.size(); ++k) {
    label[k] = k < n ? k : random_index(n, rng);
  }
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<CMatrix> atoms(n, CMatrix::Zero(d, d));
  for (Eigen::Index k = 0; k < d; ++k) {
    atoms[label[static_cast<std::size_t>(k)]] += u.col(k) * u.col(k).adjoint();
  }
  return DiscreteObservable(std::move(atoms));
}

std::size_t random_index(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return pick(rng);
}

OutcomeSet random_subset(std::size_t n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  OutcomeSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng)) out.push_back(i);
  }
  return out;
}

}  // namespace coexist
