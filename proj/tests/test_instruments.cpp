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

#include "coexist/instruments.hpp"
#include "coexist/random.hpp"
#include "fixtures.hpp"

using namespace coexist;
using namespace coexist::testing;

namespace {

// Random instrument: a random isometry C^d -> C^(d*m) cut into m*r Kraus
// operators, r per outcome.
Instrument random_instrument(Eigen::Index d, std::size_t outcomes, std::size_t per_outcome, Rng& rng) {
  const auto total = static_cast<Eigen::Index>(outcomes * per_outcome);
  const CMatrix v = random_isometry(d * total, d, rng);
  std::vector<std::vector<CMatrix>> kraus(outcomes);
  for (Eigen::Index k = 0; k < total; ++k) {
    kraus[static_cast<std::size_t>(k) / per_outcome].push_back(v.middleRows(k * d, d));
  }
  return Instrument(kraus);
}

// State-side evaluation tr[I1(X)(I2(Y)(T))] of the sequential grid cell.
double state_side(const Instrument& first, const Instrument& second, std::size_t i, std::size_t j,
                  const CMatrix& t) {
  return apply(first, {i}, apply(second, {j}, t)).trace().real();
}

}  // namespace

TEST_CASE("instrument validation") {
  CHECK_NOTHROW(Instrument::identity(3));
  CHECK_THROWS_AS(Instrument({{id2() * 0.5}}), CoexistError);
  try {
    Instrument({{id2() * 0.5}});
  } catch (const CoexistError& e) {
    CHECK(std::string(e.what()).find("completeness") != std::string::npos);
  }
  CHECK_THROWS_AS(Instrument({}), CoexistError);
  CHECK_THROWS_AS(Instrument({{id2()}, {}}), CoexistError);
  CHECK_THROWS_AS(DensityState(diag({0.5, 0.6})), CoexistError);
}

TEST_CASE("apply examples") {
  Rng rng(1);
  const CMatrix t = random_density(2, rng);
  CHECK(norm_of(apply(Instrument::identity(2), {0}, t) - t) < 1e-15);
  const Instrument lz = Instrument::luders(sz_pvm());
  CHECK(norm_of(apply(lz, {}, t)) < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  const DensityState plus(proj(ket({r, r})));
  CHECK(norm_of(apply(lz, {0}, plus) - diag({0.5, 0})) < 1e-14);
  CHECK_THROWS_AS(apply(lz, {0}, identity(3)), CoexistError);
  CHECK_THROWS_AS(apply(lz, {2}, t), CoexistError);
}

TEST_CASE("associate observable examples") {
  const DiscreteObservable triv = associate_observable(Instrument::identity(2));
  REQUIRE(triv.outcomes() == 1);
  CHECK(norm_of(triv.atom(0) - id2()) < 1e-15);

  Rng rng(3);
  const DiscreteObservable e = random_povm(3, 4, rng);
  CHECK(observable_distance(associate_observable(Instrument::luders(e)), e) < 1e-10);

  // Outcome 1 carries K = |0><0| and K' = |0><1|; outcome 2 is the zero operation.
  const CMatrix k0 = mat2(1, 0, 0, 0);
  const CMatrix k1 = mat2(0, 1, 0, 0);
  const Instrument two({{k0, k1}, {CMatrix::Zero(2, 2)}});
  const DiscreteObservable a = associate_observable(two);
  CHECK(norm_of(a.atom(0) - (k0.adjoint() * k0 + k1.adjoint() * k1)) < 1e-15);
  CHECK(norm_of(a.atom(0) - id2()) < 1e-15);
  CHECK(norm_of(a.atom(1)) < 1e-15);
}

TEST_CASE("dual apply examples") {
  Rng rng(5);
  const Instrument in = random_instrument(3, 3, 2, rng);
  CHECK(norm_of(dual_apply(in, full_set(3), identity(3)) - identity(3)) < 1e-10);
  const CMatrix a = random_hermitian(3, rng);
  CHECK(norm_of(dual_apply(Instrument::identity(3), {0}, a) - a) < 1e-15);
  // Lueders sigma_z sandwich kills the off-diagonal sigma_x.
  CHECK(norm_of(dual_apply(Instrument::luders(sz_pvm()), {0, 1}, pauli_x())) < 1e-15);
}

TEST_CASE("duality between apply and dual apply") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const std::size_t n = 2 + trial % 3;
    const Instrument in = random_instrument(d, n, 1 + trial % 2, rng);
    const CMatrix t = random_density(d, rng);
    const CMatrix a = random_gaussian(d, d, rng);
    const OutcomeSet x = random_subset(n, rng);
    const Complex lhs = (apply(in, x, t) * a).trace();
    const Complex rhs = (t * dual_apply(in, x, a)).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("instrument outcome statistics form a probability measure") {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const Instrument in = random_instrument(3, 4, 2, rng);
    const CMatrix t = random_density(3, rng);
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double p = apply(in, {i}, t).trace().real();
      CHECK(p >= -1e-12);
      total += p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    const OutcomeSet x = random_subset(4, rng);
    const OutcomeSet xc = complement_set(x, 4);
    CHECK(std::abs(apply(in, x, t).trace().real() + apply(in, xc, t).trace().real() - 1.0) <= 1e-9);
  }
}

TEST_CASE("sequential biobservable examples") {
  Rng rng(11);
  const DiscreteObservable e = random_povm(2, 3, rng);
  const Instrument le = Instrument::luders(e);
  const SequentialBiobservable s1 = sequential_biobservable(le, Instrument::identity(2));
  CHECK(s1.order == SequenceOrder::SecondThenFirst);
  REQUIRE(s1.grid.cols() == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(norm_of(s1.grid.cell(i, 0) - e.atom(i)) < 1e-10);
  CHECK(observable_distance(s1.marginal_row, e) < 1e-10);
  CHECK(s1.marginal_col.outcomes() == 1);

  const SequentialBiobservable s2 = sequential_biobservable(Instrument::identity(2), le);
  REQUIRE(s2.grid.rows() == 1);
  for (std::size_t j = 0; j < 3; ++j) CHECK(norm_of(s2.grid.cell(0, j) - e.atom(j)) < 1e-10);
  CHECK_THROWS_AS(sequential_biobservable(le, Instrument::identity(3)), CoexistError);
}

TEST_CASE("sequential grid matches state-side evaluation and marginal identities") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 2;
    const Instrument i1 = random_instrument(d, 2 + trial % 2, 2, rng);
    const Instrument i2 = random_instrument(d, 2, 1 + trial % 2, rng);
    const SequentialBiobservable s = sequential_biobservable(i1, i2);
    const CMatrix t = random_density(d, rng);
    for (std::size_t i = 0; i < i1.outcomes(); ++i) {
      for (std::size_t j = 0; j < i2.outcomes(); ++j) {
        CHECK(std::abs((t * s.grid.cell(i, j)).trace().real() - state_side(i1, i2, i, j, t)) <= 1e-9);
      }
    }
    // B(Omega1, Y) = E2(Y) and B(X, Omega2) = I2(Omega2)*(E1(X)).
    const DiscreteObservable e1 = associate_observable(i1);
    const DiscreteObservable e2 = associate_observable(i2);
    CHECK(observable_distance(s.marginal_col, e2) <= 1e-9);
    for (std::size_t i = 0; i < i1.outcomes(); ++i) {
      CHECK(norm_of(s.marginal_row.atom(i) - dual_apply(i2, full_set(i2.outcomes()), e1.atom(i))) <= 1e-9);
    }
  }
}

TEST_CASE("order independence examples") {
  const Instrument lz = Instrument::luders(sz_pvm());
  const Instrument lx = Instrument::luders(sx_pvm());
  const OrderIndependenceReport zz = order_independence(lz, lz);
  CHECK(zz.equal);
  CHECK(zz.max_deviation == 0.0);
  CHECK(zz.certificate.has_value());

  const OrderIndependenceReport zx = order_independence(lz, lx);
  CHECK_FALSE(zx.equal);
  const CMatrix p0 = sz_pvm().atom(0);
  const CMatrix px = sx_pvm().atom(0);
  const double oracle = norm_of(p0 * px * p0 - px * p0 * px);
  CHECK(std::abs(zx.max_deviation - oracle) < 1e-12);
  CHECK(zx.max_deviation > 1e-3);
  CHECK_FALSE(zx.certificate.has_value());

  Rng rng(15);
  const Instrument b = random_instrument(2, 3, 2, rng);
  CHECK(order_independence(Instrument::identity(2), b).equal);
  CHECK_THROWS_AS(order_independence(lz, Instrument::identity(3)), CoexistError);
}

TEST_CASE("Lueders instruments of a PVM are order independent with themselves") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Instrument l = Instrument::luders(random_pvm(3, 2 + trial % 2, rng));
    const OrderIndependenceReport r = order_independence(l, l);
    CHECK(r.equal);
    CHECK(r.max_deviation <= 1e-9);
  }
}
