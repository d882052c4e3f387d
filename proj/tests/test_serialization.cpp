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

#include "coexist/random.hpp"
#include "coexist/serialization.hpp"
#include "fixtures.hpp"

using namespace coexist;
using namespace coexist::testing;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const CoexistError& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("complex scalars and matrices use [re, im] pairs") {
  const Json z = complex_to_json({1.5, -2.0});
  CHECK(z.dump() == "[1.5,-2.0]");
  CHECK(complex_from_json(Json::parse("[0.25, 1]")) == Complex(0.25, 1.0));
  CHECK(complex_from_json(Json::parse("3")) == Complex(3.0, 0.0));
  CHECK(matrix_to_json(pauli_y()).dump() == "[[[0.0,0.0],[-0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
  CHECK(kind_of([] { complex_from_json(Json::parse("[1, 2, 3]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { matrix_from_json(Json::parse("[[[1,0]],[[1,0],[0,0]]]")); }) == ErrorKind::ParseError);
}

TEST_CASE("matrices round trip bit-exactly") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_gaussian(3, 3, rng);
    const CMatrix b = matrix_from_json(Json::parse(matrix_to_json(a).dump()));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("observable schema") {
  const Json j = observable_to_json(sz_pvm());
  CHECK(j.at("dim") == 2);
  CHECK(j.at("effects").size() == 2);
  CHECK(observable_distance(observable_from_json(j), sz_pvm()) == 0.0);
  Json bad = j;
  bad["dim"] = 3;
  CHECK(kind_of([&] { observable_from_json(bad); }) == ErrorKind::ParseError);
  Json unnormalized = observable_to_json(DiscreteObservable({id2()}));
  unnormalized["effects"].push_back(matrix_to_json(id2() * 0.1));
  CHECK(kind_of([&] { observable_from_json(unnormalized); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { observable_from_json(Json::parse("{\"dim\": 2}")); }) == ErrorKind::ParseError);
}

TEST_CASE("instrument schema") {
  Rng rng(2);
  const Instrument in = Instrument::luders(random_povm(2, 3, rng));
  const Json j = instrument_to_json(in);
  CHECK(j.at("outcomes").size() == 3);
  const Instrument back = instrument_from_json(j);
  for (std::size_t i = 0; i < 3; ++i) CHECK(norm_of(back.kraus(i)[0] - in.kraus(i)[0]) == 0.0);
  Json broken = j;
  broken["outcomes"][0]["kraus"][0] = matrix_to_json(CMatrix::Zero(2, 2));
  CHECK(kind_of([&] { instrument_from_json(broken); }) == ErrorKind::ValidationError);
}

TEST_CASE("scheme schema") {
  Rng rng(3);
  const MeasurementScheme m = scheme_for_observable(random_povm(2, 3, rng));
  const Json j = scheme_to_json(m);
  for (const char* key : {"dim_system", "dim_apparatus", "W", "pointer", "V_kraus"}) CHECK(j.contains(key));
  const MeasurementScheme back = scheme_from_json(j);
  CHECK(observable_distance(measured_observable(back), measured_observable(m)) == 0.0);
}

TEST_CASE("outcome maps and subsets are 1-based") {
  CHECK(subset_to_json({0, 2}).dump() == "[1,3]");
  const OutcomeMap f(2, {0, 1, 0, 1});
  CHECK(outcome_map_to_json(f).dump() == "[1,2,1,2]");
  CHECK(outcome_map_from_json(Json::parse("[1,2,1,2]"), 2).table() == f.table());
  CHECK(kind_of([] { outcome_map_from_json(Json::parse("[0,1]"), 2); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { outcome_map_from_json(Json::parse("[1,3]"), 2); }) == ErrorKind::MapMismatch);
}

TEST_CASE("emitted certificates re-validate when loaded back") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteObservable w = random_povm(2 + trial % 2, 5, rng);
    const FunctionalCoexistenceCertificate c = two_valued_joint(w, random_subset(5, rng), random_subset(5, rng));
    const Json j = Json::parse(certificate_to_json(c).dump());
    const FunctionalCoexistenceCertificate back = certificate_from_json(j);
    CHECK(observable_distance(back.mother(), c.mother()) == 0.0);
    CHECK(back.map1().table() == c.map1().table());
  }
  // A tampered target no longer matches the pushforward.
  const FunctionalCoexistenceCertificate c = two_valued_joint(random_povm(2, 4, rng), {0}, {1});
  Json j = certificate_to_json(c);
  j["target1"] = observable_to_json(sz_pvm());
  CHECK(kind_of([&] { certificate_from_json(j); }) == ErrorKind::CertificateInvalid);
}

TEST_CASE("biobservable schema") {
  Rng rng(5);
  const DiscreteObservable g = random_povm(2, 6, rng);
  const Biobservable b(2, 3, g.effects());
  const Json j = biobservable_to_json(b);
  CHECK(j.at("n1") == 2);
  CHECK(j.at("grid").size() == 2);
  CHECK(grid_distance(biobservable_from_json(j), b) == 0.0);
}

TEST_CASE("subspaces and separation certificates serialize") {
  const std::vector<CMatrix> ms{block_diag(CMatrix::Zero(2, 2), pauli_y())};
  const Json s = subspace_to_json(kernel_intersection(ms));
  CHECK(s.at("dim") == 2);
  CHECK(s.at("basis").size() == 2);
  SeparationCertificate cert{{id2()}, {-id2()}, -1.0, 0.0};
  const Json c = separation_to_json(cert);
  CHECK(c.at("value") == -1.0);
  CHECK(c.at("alpha").size() == 1);
}
