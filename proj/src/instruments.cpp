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

#include "coexist/instruments.hpp"

#include <algorithm>
#include <cmath>

namespace coexist {

DensityState::DensityState(CMatrix rho, const Tolerance& tol) : rho_(std::move(rho)) {
  require_square(rho_, "DensityState");
  if (!is_psd(rho_, tol)) {
    throw CoexistError(ErrorKind::ValidationError, "state is not positive");
  }
  if (std::abs(rho_.trace().real() - 1.0) > tol.prob) {
    throw CoexistError(ErrorKind::ValidationError, "state trace differs from one");
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
}

Instrument::Instrument(std::vector<std::vector<CMatrix>> kraus, const Tolerance& tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty() || kraus_.front().empty()) {
    throw CoexistError(ErrorKind::ValidationError, "instrument needs at least one outcome");
  }
  const Eigen::Index d = kraus_.front().front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    if (kraus_[i].empty()) {
      throw CoexistError(
          ErrorKind::ValidationError,
          "outcome " + std::to_string(i + 1) + " has no Kraus operators");
    }
    for (const CMatrix& k : kraus_[i]) {
      if (k.rows() != d || k.cols() != d || d == 0) {
        throw CoexistError(ErrorKind::ValidationError, "Kraus operators have inconsistent dimensions");
      }
      total += k.adjoint() * k;
    }
  }
  const double dev = operator_norm(total - coexist::identity(d));
  if (dev > tol.eq) {
    throw CoexistError(
        ErrorKind::ValidationError,
        "completeness: sum of K^dagger K misses the identity by " + format_real(dev));
  }
}

Instrument Instrument::identity(Eigen::Index dim) {
  return Instrument({{coexist::identity(dim)}});
}

Instrument Instrument::luders(const DiscreteObservable& e, const Tolerance& tol) {
  std::vector<std::vector<CMatrix>> kraus;
  for (const CMatrix& a : e.effects()) kraus.push_back({psd_sqrt(a)});
  return Instrument(std::move(kraus), tol);
}

namespace {

std::vector<bool> membership(const Instrument& instr, const OutcomeSet& x) {
  std::vector<bool> in(instr.outcomes(), false);
  for (std::size_t i : x) {
    if (i >= instr.outcomes()) {
      throw CoexistError(ErrorKind::IndexOutOfRange, "outcome " + std::to_string(i) + " out of range");
    }
    in[i] = true;
  }
  return in;
}

}  // namespace

CMatrix apply(const Instrument& instr, const OutcomeSet& x, const CMatrix& t) {
  if (t.rows() != instr.dim() || t.cols() != instr.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "apply: operator dimension differs from instrument");
  }
  const std::vector<bool> in = membership(instr, x);
  CMatrix out = CMatrix::Zero(instr.dim(), instr.dim());
  for (std::size_t i = 0; i < instr.outcomes(); ++i) {
    if (!in[i]) continue;
    for (const CMatrix& k : instr.kraus(i)) out += k * t * k.adjoint();
  }
  return out;
}

CMatrix apply(const Instrument& instr, const OutcomeSet& x, const DensityState& t) {
  return apply(instr, x, t.matrix());
}

CMatrix dual_apply(const Instrument& instr, const OutcomeSet& x, const CMatrix& a) {
  if (a.rows() != instr.dim() || a.cols() != instr.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "dual_apply: operator dimension differs from instrument");
  }
  const std::vector<bool> in = membership(instr, x);
  CMatrix out = CMatrix::Zero(instr.dim(), instr.dim());
  for (std::size_t i = 0; i < instr.outcomes(); ++i) {
    if (!in[i]) continue;
    for (const CMatrix& k : instr.kraus(i)) out += k.adjoint() * a * k;
  }
  return out;
}

DiscreteObservable associate_observable(const Instrument& instr, const Tolerance& tol) {
  std::vector<CMatrix> atoms;
  const CMatrix id = identity(instr.dim());
  for (std::size_t i = 0; i < instr.outcomes(); ++i) {
    atoms.push_back(dual_apply(instr, {i}, id));
  }
  return DiscreteObservable(std::move(atoms), tol);
}

SequentialBiobservable sequential_biobservable(
    const Instrument& first, const Instrument& second, const Tolerance& tol) {
  if (first.dim() != second.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "sequential_biobservable: dimensions differ");
  }
  const DiscreteObservable e1 = associate_observable(first, tol);
  std::vector<CMatrix> grid;
  for (std::size_t i = 0; i < first.outcomes(); ++i) {
    for (std::size_t j = 0; j < second.outcomes(); ++j) {
      grid.push_back(dual_apply(second, {j}, e1.atom(i)));
    }
  }
  Biobservable b(first.outcomes(), second.outcomes(), std::move(grid), tol);
  DiscreteObservable row = b.first_marginal();
  DiscreteObservable col = b.second_marginal();
  return {SequenceOrder::SecondThenFirst, std::move(b), std::move(row), std::move(col)};
}

namespace {

Biobservable transposed(const Biobservable& b, const Tolerance& tol) {
  std::vector<CMatrix> grid;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) grid.push_back(b.cell(i, j));
  }
  return Biobservable(b.cols(), b.rows(), std::move(grid), tol);
}

}  // namespace

OrderIndependenceReport order_independence(
    const Instrument& a, const Instrument& b, const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "order_independence: dimensions differ");
  }
  Biobservable b_first = sequential_biobservable(a, b, tol).grid;
  Biobservable a_first = transposed(sequential_biobservable(b, a, tol).grid, tol);
  OrderIndependenceReport report{
      grid_distance(b_first, a_first), false, std::move(b_first), std::move(a_first), std::nullopt};
  report.equal = report.max_deviation <= tol.eq;
  if (report.equal) {
    report.certificate = joint_to_functional(JointObservable(report.b_then_a), tol);
  }
  return report;
}

}  // namespace coexist
