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

#include "coexist/projective.hpp"

#include <algorithm>
#include <cmath>

namespace coexist {

PvmObservable::PvmObservable(DiscreteObservable e, const Tolerance& tol) : e_(std::move(e)) {
  for (std::size_t i = 0; i < e_.outcomes(); ++i) {
    if (!is_projection(e_.atom(i), tol)) {
      throw CoexistError(
          ErrorKind::NotPvm, "atom " + std::to_string(i + 1) + " is not a projection");
    }
  }
}

ProjectionCommutationResult projection_forces_commutation(
    const DiscreteObservable& e, const OutcomeSet& x, const Tolerance& tol) {
  const CMatrix p = effect_of_set(e, x);
  if (!is_projection(p, tol)) {
    throw CoexistError(ErrorKind::NotProjection, "E(X) is not a projection");
  }
  const std::size_t n = e.outcomes();
  if (n > kMaxEnumeratedOutcomes) {
    throw CoexistError(ErrorKind::TooManyOutcomes, "subset scan limited to 12 outcomes");
  }
  ProjectionCommutationResult out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const double norm = operator_norm(commutator(p, effect_of_mask(e, mask)));
    if (norm > out.worst_norm) {
      out.worst_norm = norm;
      if (norm > tol.eq) out.counterexample = mask_to_set(mask, n);
    }
  }
  out.holds = out.worst_norm <= tol.eq;
  if (out.holds) out.counterexample.clear();
  return out;
}

PvmCoexistenceResult pvm_coexistence(
    const PvmObservable& e1, const DiscreteObservable& e2,
    const std::optional<DiscreteObservable>& witness, const Tolerance& tol) {
  PvmCoexistenceResult out;
  out.commutation = check_mutual_commutation(e1.observable(), e2, tol);
  if (witness) {
    try {
      out.witness = embed_in_witness(*witness, e1.observable(), e2, tol);
    } catch (const CoexistError& err) {
      throw CoexistError(ErrorKind::WitnessInvalid, err.what());
    }
    if (!out.commutation.commute) {
      throw CoexistError(
          ErrorKind::WitnessInvalid,
          "witness embeds both ranges yet the observables do not commute (norm " +
              format_real(out.commutation.worst_norm) + ")");
    }
  }
  if (out.commutation.commute) {
    out.status = FeasibilityStatus::Feasible;
    out.joint = joint_from_commuting(e1.observable(), e2, tol);
    out.reason = "commuting: product joint";
  } else {
    out.status = FeasibilityStatus::Infeasible;
    out.reason = "projection valued observable does not commute with its partner";
  }
  return out;
}

JointObservable commensurable_joint(
    const PvmObservable& e1, const PvmObservable& e2, const Tolerance& tol) {
  JointObservable joint = joint_from_commuting(e1.observable(), e2.observable(), tol);
  for (const CMatrix& cell : joint.grid().cells()) {
    if (!is_projection(cell, tol)) {
      throw CoexistError(ErrorKind::NotProjection, "product cell is not a projection");
    }
  }
  return joint;
}

std::string_view six_way_name(SixWayCondition c) {
  switch (c) {
    case SixWayCondition::Commute: return "commute";
    case SixWayCondition::Commensurable: return "commensurable";
    case SixWayCondition::Coexistent: return "coexistent";
    case SixWayCondition::FunctionallyCoexistent: return "functionally_coexistent";
    case SixWayCondition::HasBiobservable: return "biobservable";
    case SixWayCondition::HasJointObservable: return "joint_observable";
  }
  return "unknown";
}

bool SixWayReport::all() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

bool SixWayReport::none() const {
  return std::none_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

SixWayReport six_way_equivalence_check(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol) {
  const PvmObservable p1(e1, tol);
  const PvmObservable p2(e2, tol);
  SixWayReport report;
  report.commutation = check_mutual_commutation(e1, e2, tol);
  if (!report.commutation.commute) return report;

  const auto set = [&](SixWayCondition c) { report.holds[static_cast<int>(c)] = true; };
  set(SixWayCondition::Commute);

  JointObservable joint = commensurable_joint(p1, p2, tol);
  PvmObservable mother(joint.flattened(tol), tol);
  report.coexistence_witness = embed_in_witness(mother.observable(), e1, e2, tol);
  report.commensurability_mother = mother;
  set(SixWayCondition::Commensurable);
  set(SixWayCondition::Coexistent);

  report.certificate = joint_to_functional(joint, tol);
  set(SixWayCondition::FunctionallyCoexistent);
  report.biobservable = functional_to_biobservable(*report.certificate, tol);
  set(SixWayCondition::HasBiobservable);
  report.joint = biobservable_to_joint(*report.biobservable);
  set(SixWayCondition::HasJointObservable);
  return report;
}

Refinement von_neumann_refinement(
    const PvmObservable& e1, const PvmObservable& e2, const Tolerance& tol) {
  const JointObservable joint = commensurable_joint(e1, e2, tol);
  std::vector<CMatrix> atoms;
  std::vector<std::size_t> t1, t2;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < e1.outcomes(); ++i) {
    for (std::size_t j = 0; j < e2.outcomes(); ++j) {
      const CMatrix& cell = joint.grid().cell(i, j);
      if (operator_norm(cell) <= tol.eq) continue;
      atoms.push_back(cell);
      t1.push_back(i);
      t2.push_back(j);
      cells.emplace_back(i, j);
    }
  }
  Refinement out{
      PvmObservable(DiscreteObservable(std::move(atoms), tol), tol),
      OutcomeMap(e1.outcomes(), std::move(t1)), OutcomeMap(e2.outcomes(), std::move(t2)),
      std::move(cells)};
  if (observable_distance(pushforward(out.mother.observable(), out.f1, tol), e1.observable()) > tol.eq ||
      observable_distance(pushforward(out.mother.observable(), out.f2, tol), e2.observable()) > tol.eq) {
    throw CoexistError(ErrorKind::CertificateInvalid, "refinement does not reproduce the inputs");
  }
  return out;
}

CMatrix restrict_to(const Subspace& s, const CMatrix& a) {
  return s.basis.adjoint() * a * s.basis;
}

CommutativityDomainResult commutativity_domain(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol) {
  if (e1.dim() != e2.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "commutativity_domain: dimensions differ");
  }
  // [E1(X), E2(Y)] is a sum of atom commutators, so atom pairs suffice.
  std::vector<CMatrix> commutators;
  for (const CMatrix& a : e1.effects()) {
    for (const CMatrix& b : e2.effects()) commutators.push_back(commutator(a, b));
  }
  CommutativityDomainResult out;
  out.subspace = kernel_intersection(commutators, tol);
  out.pvm_inputs = e1.is_pvm(tol) && e2.is_pvm(tol);
  if (!out.pvm_inputs) return out;

  for (const DiscreteObservable* e : {&e1, &e2}) {
    for (const CMatrix& a : e->effects()) {
      for (Eigen::Index k = 0; k < out.subspace.dim(); ++k) {
        const CVector image = a * out.subspace.basis.col(k);
        out.invariance_residual = std::max(out.invariance_residual, out.subspace.residual(image));
      }
    }
  }
  if (out.subspace.dim() > 0) {
    const auto reduce = [&](const DiscreteObservable& e) {
      std::vector<CMatrix> atoms;
      for (const CMatrix& a : e.effects()) atoms.push_back(restrict_to(out.subspace, a));
      return DiscreteObservable(std::move(atoms), tol);
    };
    out.reduced1 = reduce(e1);
    out.reduced2 = reduce(e2);
  }
  return out;
}

JointDistribution joint_distribution_on_domain(
    const PvmObservable& e1, const PvmObservable& e2, const CVector& phi, const Tolerance& tol) {
  if (e1.dim() != e2.dim() || phi.size() != e1.dim()) {
    throw CoexistError(ErrorKind::DimMismatch, "joint_distribution_on_domain: dimensions differ");
  }
  if (std::abs(phi.norm() - 1.0) > tol.eq) {
    throw CoexistError(ErrorKind::NotUnit, "phi has norm " + format_real(phi.norm()));
  }
  JointDistribution out;
  for (std::size_t i = 0; i < e1.outcomes(); ++i) {
    for (std::size_t j = 0; j < e2.outcomes(); ++j) {
      const CVector r = commutator(e1.atom(i), e2.atom(j)) * phi;
      out.membership_residual = std::max(out.membership_residual, r.norm());
    }
  }
  const double bound = tol.eq * std::sqrt(static_cast<double>(e1.dim()));
  if (out.membership_residual > bound) {
    throw CoexistError(
        ErrorKind::NotInDomain,
        "phi leaves the commutativity domain (residual " +
            format_real(out.membership_residual) + ")");
  }

  const auto n1 = static_cast<Eigen::Index>(e1.outcomes());
  const auto n2 = static_cast<Eigen::Index>(e2.outcomes());
  out.probabilities.resize(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      out.probabilities(i, j) =
          phi.dot(e1.atom(static_cast<std::size_t>(i)) * (e2.atom(static_cast<std::size_t>(j)) * phi)).real();
    }
  }

  const CommutativityDomainResult domain = commutativity_domain(e1.observable(), e2.observable(), tol);
  const Subspace& s = domain.subspace;
  if (s.dim() == 0) {
    throw CoexistError(ErrorKind::NotInDomain, "commutativity domain is the zero subspace");
  }
  const CVector reduced_phi = s.basis.adjoint() * phi;
  out.meet_probabilities.resize(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      const CMatrix meet = projection_meet(
          restrict_to(s, e1.atom(static_cast<std::size_t>(i))),
          restrict_to(s, e2.atom(static_cast<std::size_t>(j))), tol);
      out.meet_probabilities(i, j) = reduced_phi.dot(meet * reduced_phi).real();
    }
  }
  out.meet_deviation = (out.probabilities - out.meet_probabilities).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace coexist
