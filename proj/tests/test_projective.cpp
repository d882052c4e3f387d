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

#include <catch2/catch_amalgamated.hpp>

#include "coexist/projective.hpp"
#include "coexist/random.hpp"
#include "fixtures.hpp"

using namespace coexist;
using namespace coexist::testing;

namespace {

// Atoms {P, U(0 + F_k)U^dagger}: a projection followed by a POVM on its
// orthogonal complement.
DiscreteObservable with_projection_atom(Eigen::Index d, Eigen::Index rank, std::size_t rest, Rng& rng) {
  const CMatrix u = random_unitary(d, rng);
  const CMatrix v = u.leftCols(rank);
  const CMatrix w = u.rightCols(d - rank);
  std::vector<CMatrix> atoms{v * v.adjoint()};
  const DiscreteObservable f = random_povm(d - rank, rest, rng);
  for (const CMatrix& a : f.effects()) atoms.push_back(w * a * w.adjoint());
  return DiscreteObservable(atoms);
}

DiscreteObservable block_pvm(const CMatrix& a, const CMatrix& b) {
  return binary(block_diag(a, b));
}

}  // namespace

TEST_CASE("PvmObservable rejects non-projective atoms") {
  CHECK_NOTHROW(PvmObservable(sz_pvm()));
  try {
    PvmObservable p(binary(pauli_z(), 0.5));
    FAIL("expected NotPvm");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::NotPvm);
  }
}

TEST_CASE("projection forces commutation examples") {
  Rng rng(3);
  const DiscreteObservable p = random_pvm(3, 3, rng);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    CHECK(projection_forces_commutation(p, mask_to_set(mask, 3)).holds);
  }
  const CMatrix pr = proj(ket({1, 0}));
  const DiscreteObservable mixed({pr, (id2() - pr) / 2.0, (id2() - pr) / 2.0});
  CHECK(projection_forces_commutation(mixed, {0}).holds);
  CHECK(projection_forces_commutation(random_povm(2, 3, rng), full_set(3)).holds);
  CHECK_THROWS_AS(projection_forces_commutation(binary(pauli_z(), 0.5), {0}), CoexistError);
}

TEST_CASE("projection atoms commute with every subset effect") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const Eigen::Index rank = 1 + trial % (d - 1);
    const DiscreteObservable e = with_projection_atom(d, rank, 2 + trial % 3, rng);
    const ProjectionCommutationResult r = projection_forces_commutation(e, {0});
    CHECK(r.holds);
    CHECK(r.worst_norm <= 1e-9);
  }
}

TEST_CASE("pvm coexistence examples") {
  const PvmObservable z(sz_pvm());
  const PvmCoexistenceResult zz = pvm_coexistence(z, sz_pvm());
  CHECK(zz.status == FeasibilityStatus::Feasible);
  REQUIRE(zz.joint.has_value());
  const PvmCoexistenceResult zx = pvm_coexistence(z, sx_pvm());
  CHECK(zx.status == FeasibilityStatus::Infeasible);
  CHECK(zx.commutation.worst_norm == Catch::Approx(0.5));

  const DiscreteObservable nz = binary(pauli_z(), 0.5);
  const PvmCoexistenceResult zn = pvm_coexistence(z, nz);
  CHECK(zn.status == FeasibilityStatus::Feasible);
  REQUIRE(zn.joint.has_value());
  // Diagonal product oracle.
  CHECK(norm_of(zn.joint->grid().cell(0, 0) - diag({0.75, 0})) < 1e-15);
  CHECK(norm_of(zn.joint->grid().cell(0, 1) - diag({0.25, 0})) < 1e-15);
  CHECK(norm_of(zn.joint->grid().cell(1, 0) - diag({0, 0.25})) < 1e-15);
  CHECK(norm_of(zn.joint->grid().cell(1, 1) - diag({0, 0.75})) < 1e-15);

  try {
    pvm_coexistence(z, sx_pvm(), binary(pauli_y()));
    FAIL("expected WitnessInvalid");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::WitnessInvalid);
  }
  const PvmCoexistenceResult withw = pvm_coexistence(z, nz, joint_from_commuting(sz_pvm(), nz).flattened());
  CHECK(withw.status == FeasibilityStatus::Feasible);
  CHECK(withw.witness.has_value());
}

TEST_CASE("commensurable joint examples") {
  Rng rng(7);
  const PvmObservable p(random_pvm(3, 3, rng));
  const JointObservable d = commensurable_joint(p, p);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(norm_of(d.grid().cell(i, j) - (i == j ? p.atom(i) : CMatrix::Zero(3, 3))) < 1e-12);
    }
  }
  const JointObservable col = commensurable_joint(PvmObservable(sz_pvm()), PvmObservable(DiscreteObservable::trivial(2)));
  CHECK(col.grid().cols() == 1);

  const PvmObservable a(DiscreteObservable({diag({1, 1, 0, 0}), diag({0, 0, 1, 1})}));
  const PvmObservable b(DiscreteObservable({diag({1, 0, 1, 0}), diag({0, 1, 0, 1})}));
  const JointObservable ab = commensurable_joint(a, b);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const CMatrix& c = ab.grid().cell(i, j);
      CHECK(norm_of(c * c - c) < 1e-14);
      CHECK(norm_of(c - a.atom(i) * b.atom(j)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(commensurable_joint(PvmObservable(sz_pvm()), PvmObservable(sx_pvm())), CoexistError);
}

TEST_CASE("six-way check on commuting PVMs") {
  Rng rng(9);
  const DiscreteObservable p = random_pvm(4, 4, rng);
  const DiscreteObservable q = pushforward(p, OutcomeMap(2, {0, 1, 1, 0}));
  const SixWayReport r = six_way_equivalence_check(p, q);
  CHECK(r.all());
  CHECK(r.consistent());
  REQUIRE(r.commensurability_mother.has_value());
  REQUIRE(r.certificate.has_value());
  REQUIRE(r.biobservable.has_value());
  REQUIRE(r.joint.has_value());
  REQUIRE(r.coexistence_witness.has_value());
  CHECK(r.commensurability_mother->observable().is_pvm());
  CHECK(observable_distance(pushforward(r.certificate->mother(), r.certificate->map1()), p) < 1e-10);
  CHECK(observable_distance(pushforward(r.certificate->mother(), r.certificate->map2()), q) < 1e-10);
}

TEST_CASE("six-way check on sigma_z and sigma_x") {
  const SixWayReport r = six_way_equivalence_check(sz_pvm(), sx_pvm());
  CHECK(r.none());
  CHECK(r.consistent());
  CHECK(std::abs(r.commutation.worst_norm - 0.5) <= 1e-10);
  CHECK_FALSE(r.certificate.has_value());
  CHECK_FALSE(r.joint.has_value());
  CHECK_THROWS_AS(six_way_equivalence_check(sz_pvm(), binary(pauli_x(), 0.5)), CoexistError);
}

TEST_CASE("six-way condition names") {
  CHECK(six_way_name(SixWayCondition::Commute) == "commute");
  CHECK(six_way_name(SixWayCondition::HasJointObservable) == "joint_observable");
}

TEST_CASE("von Neumann refinement examples") {
  const PvmObservable z(sz_pvm());
  const Refinement zz = von_neumann_refinement(z, z);
  CHECK(observable_distance(zz.mother.observable(), sz_pvm()) < 1e-14);
  CHECK(zz.f1.table() == std::vector<std::size_t>({0, 1}));
  CHECK(zz.f2.table() == std::vector<std::size_t>({0, 1}));

  const Refinement zt = von_neumann_refinement(z, PvmObservable(DiscreteObservable::trivial(2)));
  CHECK(observable_distance(zt.mother.observable(), sz_pvm()) < 1e-14);

  // Overlapping blocks: diag(1,1,0,0)/diag(0,0,1,1) against diag(1,0,0,0)/diag(0,1,1,1).
  const PvmObservable a(DiscreteObservable({diag({1, 1, 0, 0}), diag({0, 0, 1, 1})}));
  const PvmObservable b(DiscreteObservable({diag({1, 0, 0, 0}), diag({0, 1, 1, 1})}));
  const Refinement ab = von_neumann_refinement(a, b);
  CHECK(ab.mother.outcomes() == 3);
  CHECK(observable_distance(pushforward(ab.mother.observable(), ab.f1), a.observable()) < 1e-14);
  CHECK(observable_distance(pushforward(ab.mother.observable(), ab.f2), b.observable()) < 1e-14);
  CHECK_THROWS_AS(von_neumann_refinement(z, PvmObservable(sx_pvm())), CoexistError);
}

TEST_CASE("von Neumann refinement round trip on random commuting PVMs") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteObservable base = random_pvm(4, 4, rng);
    std::vector<std::size_t> t1(4), t2(4);
    for (auto& v : t1) v = random_index(2, rng);
    for (auto& v : t2) v = random_index(3, rng);
    const PvmObservable p1(pushforward(base, OutcomeMap(2, t1)));
    const PvmObservable p2(pushforward(base, OutcomeMap(3, t2)));
    const Refinement r = von_neumann_refinement(p1, p2);
    CHECK(r.mother.observable().is_pvm());
    CHECK(observable_distance(pushforward(r.mother.observable(), r.f1), p1.observable()) < 1e-8);
    CHECK(observable_distance(pushforward(r.mother.observable(), r.f2), p2.observable()) < 1e-8);
  }
}

TEST_CASE("commutativity domain examples") {
  Rng rng(13);
  const DiscreteObservable e = random_povm(3, 3, rng);
  // E1 = E2 gives the whole space when the atoms commute among themselves.
  const DiscreteObservable p = random_pvm(3, 3, rng);
  CHECK(commutativity_domain(p, p).subspace.dim() == 3);
  CHECK(commutativity_domain(sz_pvm(), sx_pvm()).subspace.dim() == 0);

  const DiscreteObservable a = block_pvm(pauli_z(), pauli_z());
  const DiscreteObservable b = block_pvm(pauli_z(), pauli_x());
  const CommutativityDomainResult r = commutativity_domain(a, b);
  REQUIRE(r.subspace.dim() == 2);
  CHECK(norm_of(r.subspace.projector() - diag({1, 1, 0, 0})) < 1e-10);
  CHECK(r.pvm_inputs);
  CHECK(r.invariance_residual <= 1e-8);
  REQUIRE(r.reduced1.has_value());
  REQUIRE(r.reduced2.has_value());
  CHECK(check_mutual_commutation(*r.reduced1, *r.reduced2).worst_norm <= 1e-10);
  CHECK_FALSE(commutativity_domain(e, random_povm(3, 2, rng)).pvm_inputs);
  CHECK_THROWS_AS(commutativity_domain(sz_pvm(), a), CoexistError);
}

TEST_CASE("commutativity domain of PVMs reduces both observables") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    // Common block on the first two coordinates of a random frame.
    const CMatrix u = random_unitary(5, rng);
    const DiscreteObservable shared = random_pvm(2, 2, rng);
    auto embed = [&](const CMatrix& top, const CMatrix& bottom) {
      CMatrix m = CMatrix::Zero(5, 5);
      m.topLeftCorner(2, 2) = top;
      m.bottomRightCorner(3, 3) = bottom;
      return CMatrix(u * m * u.adjoint());
    };
    const DiscreteObservable q1 = random_pvm(3, 2, rng);
    const DiscreteObservable q2 = random_pvm(3, 2, rng);
    const DiscreteObservable p1({embed(shared.atom(0), q1.atom(0)), embed(shared.atom(1), q1.atom(1))});
    const DiscreteObservable p2({embed(shared.atom(0), q2.atom(0)), embed(shared.atom(1), q2.atom(1))});
    const CommutativityDomainResult r = commutativity_domain(p1, p2);
    CHECK(r.subspace.dim() >= 2);
    CHECK(r.invariance_residual <= 1e-8);
    for (const DiscreteObservable* e : {&p1, &p2}) {
      for (const CMatrix& atom : e->effects()) {
        for (Eigen::Index k = 0; k < r.subspace.dim(); ++k) {
          CHECK(r.subspace.residual(atom * r.subspace.basis.col(k)) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("joint distribution examples") {
  const PvmObservable z(sz_pvm());
  const JointDistribution up = joint_distribution_on_domain(z, z, ket({1, 0}));
  CHECK(std::abs(up.probabilities(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(up.probabilities(1, 1)) < 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  const JointDistribution plus = joint_distribution_on_domain(z, z, ket({r, r}));
  CHECK(std::abs(plus.probabilities(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(plus.probabilities(1, 1) - 0.5) < 1e-14);
  CHECK(std::abs(plus.probabilities(0, 1)) < 1e-14);

  const PvmObservable a(block_pvm(pauli_z(), pauli_z()));
  const PvmObservable b(block_pvm(pauli_z(), pauli_x()));
  const JointDistribution blk = joint_distribution_on_domain(a, b, ket({0.6, 0.8, 0, 0}));
  CHECK(std::abs(blk.probabilities.sum() - 1.0) < 1e-12);
  CHECK(blk.meet_deviation < 1e-9);
  CHECK(std::abs(blk.probabilities(0, 0) - 0.36) < 1e-12);

  try {
    joint_distribution_on_domain(a, b, ket({0, 0, 1, 0}));
    FAIL("expected NotInDomain");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::NotInDomain);
  }
  try {
    joint_distribution_on_domain(z, z, ket({1, 1}));
    FAIL("expected NotUnit");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::NotUnit);
  }
}

TEST_CASE("joint distribution on random domain vectors is symmetric and normalized") {
  Rng rng(17);
  const PvmObservable a(block_pvm(pauli_z(), pauli_z()));
  const PvmObservable b(block_pvm(pauli_z(), pauli_x()));
  const Subspace s = commutativity_domain(a.observable(), b.observable()).subspace;
  for (int trial = 0; trial < 30; ++trial) {
    const CVector phi = s.basis * random_unit_vector(s.dim(), rng);
    const JointDistribution ab = joint_distribution_on_domain(a, b, phi);
    const JointDistribution ba = joint_distribution_on_domain(b, a, phi);
    CHECK((ab.probabilities - ba.probabilities.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(ab.probabilities.minCoeff() >= -1e-9);
    CHECK(std::abs(ab.probabilities.sum() - 1.0) <= 1e-9);
    CHECK(ab.meet_deviation <= 1e-9);
  }
}
