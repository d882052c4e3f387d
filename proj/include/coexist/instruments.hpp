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

#include <optional>
#include <vector>

#include "coexist/coexistence.hpp"

namespace coexist {

// Positive, trace-one operator.
class DensityState {
 public:
  explicit DensityState(CMatrix rho, const Tolerance& tol = {});

  const CMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  CMatrix rho_;
};

// Outcome-indexed completely positive maps in Kraus form,
//   I({i})(T) = sum_k K_{i,k} T K_{i,k}^dagger,
// with sum_{i,k} K^dagger K = I so that the total map preserves trace.
class Instrument {
 public:
  explicit Instrument(std::vector<std::vector<CMatrix>> kraus, const Tolerance& tol = {});

  // Single outcome, Kraus operator I.
  static Instrument identity(Eigen::Index dim);
  // K_i = sqrt(E_i).
  static Instrument luders(const DiscreteObservable& e, const Tolerance& tol = {});

  Eigen::Index dim() const { return kraus_.front().front().rows(); }
  std::size_t outcomes() const { return kraus_.size(); }
  const std::vector<CMatrix>& kraus(std::size_t i) const { return kraus_.at(i); }
  const std::vector<std::vector<CMatrix>>& all_kraus() const { return kraus_; }

 private:
  std::vector<std::vector<CMatrix>> kraus_;
};

// I(X)(T) for an arbitrary operator T (the map is linear).
CMatrix apply(const Instrument& instr, const OutcomeSet& x, const CMatrix& t);
CMatrix apply(const Instrument& instr, const OutcomeSet& x, const DensityState& t);

// I(X)^*(A) = sum_{i in X, k} K^dagger A K.
CMatrix dual_apply(const Instrument& instr, const OutcomeSet& x, const CMatrix& a);

DiscreteObservable associate_observable(const Instrument& instr, const Tolerance& tol = {});

// Time order of the two instruments relative to the argument order of the
// call that produced the grid.
enum class SequenceOrder { FirstThenSecond, SecondThenFirst };

struct SequentialBiobservable {
  SequenceOrder order;
  Biobservable grid;
  DiscreteObservable marginal_row;  // X -> B(X, Omega2)
  DiscreteObservable marginal_col;  // Y -> B(Omega1, Y)
};

// Grid B(X, Y) with tr[T B(X,Y)] = tr[first(X)(second(Y)(T))]: the `second`
// instrument acts on the state first in time. Rows index outcomes of `first`.
SequentialBiobservable sequential_biobservable(
    const Instrument& first, const Instrument& second, const Tolerance& tol = {});

struct OrderIndependenceReport {
  double max_deviation = 0.0;
  bool equal = false;
  // Rows index outcomes of a, columns outcomes of b in both grids.
  Biobservable b_then_a;  // b acts first in time
  Biobservable a_then_b;  // a acts first in time
  std::optional<FunctionalCoexistenceCertificate> certificate;
};

OrderIndependenceReport order_independence(
    const Instrument& a, const Instrument& b, const Tolerance& tol = {});

}  // namespace coexist
