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
#include <string>
#include <vector>

#include "coexist/instruments.hpp"

namespace coexist {

// <K, W, P, V>: apparatus space K of dimension dim_apparatus, apparatus state
// W, pointer observable P on K, and a trace-preserving coupling V on H ⊗ K in
// Kraus form. H is the leading tensor factor.
class MeasurementScheme {
 public:
  // Throws InvalidScheme naming the failing component.
  MeasurementScheme(Eigen::Index dim_system, CMatrix apparatus_state,
                    DiscreteObservable pointer, std::vector<CMatrix> coupling_kraus,
                    const Tolerance& tol = {});

  // One-dimensional apparatus, V = id, P = {1}.
  static MeasurementScheme trivial(Eigen::Index dim_system);

  Eigen::Index dim_system() const { return dim_system_; }
  Eigen::Index dim_apparatus() const { return apparatus_state_.rows(); }
  const CMatrix& apparatus_state() const { return apparatus_state_; }
  const DiscreteObservable& pointer() const { return pointer_; }
  const std::vector<CMatrix>& coupling_kraus() const { return coupling_kraus_; }

 private:
  Eigen::Index dim_system_;
  CMatrix apparatus_state_;
  DiscreteObservable pointer_;
  std::vector<CMatrix> coupling_kraus_;
};

// V(T ⊗ W).
CMatrix coupled_state(const MeasurementScheme& m, const CMatrix& t);

// E^M({i}) = Tr_K[(I ⊗ W) V^*(I ⊗ P_i)].
DiscreteObservable measured_observable(const MeasurementScheme& m, const Tolerance& tol = {});

// I^M(X)(T) = Tr_K[V(T ⊗ W)(I ⊗ P(X))]. Requires a projective pointer.
Instrument scheme_instrument(const MeasurementScheme& m, const Tolerance& tol = {});

struct MeasuredTogetherResult {
  bool holds = false;
  double deviation1 = 0.0;
  double deviation2 = 0.0;
  std::optional<FunctionalCoexistenceCertificate> certificate;
};

MeasuredTogetherResult measured_together(
    const MeasurementScheme& m, const OutcomeMap& f1, const OutcomeMap& f2,
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol = {});

// Ancilla construction: K = C^n, W = |0><0|, P the basis PVM, and V the
// unitary extending phi ⊗ |0> -> sum_i (sqrt(E_i) phi) ⊗ |i>.
MeasurementScheme scheme_for_observable(const DiscreteObservable& e, const Tolerance& tol = {});

struct SchemesCommutativeReport {
  OrderIndependenceReport order;
  DiscreteObservable measured1;
  DiscreteObservable measured2;
  std::string note;
};

SchemesCommutativeReport schemes_commutative(
    const MeasurementScheme& m1, const MeasurementScheme& m2, const Tolerance& tol = {});

}  // namespace coexist
