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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coexist/coexistence.hpp"

namespace coexist {

// A discrete observable whose every atom is a projection.
class PvmObservable {
 public:
  // Throws NotPvm if some atom is not a projection.
  explicit PvmObservable(DiscreteObservable e, const Tolerance& tol = {});

  const DiscreteObservable& observable() const { return e_; }
  std::size_t outcomes() const { return e_.outcomes(); }
  Eigen::Index dim() const { return e_.dim(); }
  const CMatrix& atom(std::size_t i) const { return e_.atom(i); }

 private:
  DiscreteObservable e_;
};

struct ProjectionCommutationResult {
  bool holds = true;
  double worst_norm = 0.0;
  // Subset Y whose effect fails to commute with E(X); empty when holds.
  OutcomeSet counterexample;
};

// Checks that a projection value E(X) commutes with every E(Y).
ProjectionCommutationResult projection_forces_commutation(
    const DiscreteObservable& e, const OutcomeSet& x, const Tolerance& tol = {});

struct PvmCoexistenceResult {
  FeasibilityStatus status = FeasibilityStatus::Indeterminate;
  CommutationCheck commutation;
  std::optional<JointObservable> joint;
  std::optional<CoexistenceWitness> witness;
  std::string reason;
};

PvmCoexistenceResult pvm_coexistence(
    const PvmObservable& e1, const DiscreteObservable& e2,
    const std::optional<DiscreteObservable>& witness = std::nullopt,
    const Tolerance& tol = {});

// Projection valued joint with cells P_i Q_j. Throws NotCommuting.
JointObservable commensurable_joint(
    const PvmObservable& e1, const PvmObservable& e2, const Tolerance& tol = {});

enum class SixWayCondition {
  Commute = 0,
  Commensurable,
  Coexistent,
  FunctionallyCoexistent,
  HasBiobservable,
  HasJointObservable,
};

std::string_view six_way_name(SixWayCondition c);

struct SixWayReport {
  std::array<bool, 6> holds{};
  CommutationCheck commutation;
  // Artifacts, present exactly when the conditions hold.
  std::optional<PvmObservable> commensurability_mother;
  std::optional<CoexistenceWitness> coexistence_witness;
  std::optional<FunctionalCoexistenceCertificate> certificate;
  std::optional<Biobservable> biobservable;
  std::optional<JointObservable> joint;

  bool all() const;
  bool none() const;
  bool consistent() const { return all() || none(); }
};

SixWayReport six_way_equivalence_check(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol = {});

struct Refinement {
  PvmObservable mother;
  OutcomeMap f1;
  OutcomeMap f2;
  // Grid cell (i, j) behind each mother outcome.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
};

// Common refinement of two commuting PVMs: the nonzero products P_i Q_j.
Refinement von_neumann_refinement(
    const PvmObservable& e1, const PvmObservable& e2, const Tolerance& tol = {});

struct CommutativityDomainResult {
  Subspace subspace;
  bool pvm_inputs = false;
  // Largest residual of an atom image of a basis vector outside the subspace
  // (computed for PVM inputs only).
  double invariance_residual = 0.0;
  std::optional<DiscreteObservable> reduced1;
  std::optional<DiscreteObservable> reduced2;
};

CommutativityDomainResult commutativity_domain(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol = {});

// Restriction V^dagger A V to the subspace spanned by the columns of V.
CMatrix restrict_to(const Subspace& s, const CMatrix& a);

struct JointDistribution {
  Eigen::MatrixXd probabilities;        // <phi| P_i Q_j phi>
  Eigen::MatrixXd meet_probabilities;   // <phi| (P_i ∧ Q_j) phi>
  double meet_deviation = 0.0;
  double membership_residual = 0.0;
};

JointDistribution joint_distribution_on_domain(
    const PvmObservable& e1, const PvmObservable& e2, const CVector& phi,
    const Tolerance& tol = {});

}  // namespace coexist
