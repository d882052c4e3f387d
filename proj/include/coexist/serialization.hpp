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

#include <json.hpp>

#include "coexist/projective.hpp"
#include "coexist/schemes.hpp"

namespace coexist {

using Json = nlohmann::json;

// Schema:
//   complex    [re, im]
//   matrix     row-major nested arrays of complex
//   vector     array of complex
//   observable {"dim": d, "effects": [matrix, ...]}
//   instrument {"dim": d, "outcomes": [{"kraus": [matrix, ...]}, ...]}
//   scheme     {"dim_system", "dim_apparatus", "W": matrix,
//               "pointer": observable, "V_kraus": [matrix, ...]}
// Outcome maps and subsets are written with 1-based outcome labels.
// Parse failures throw ParseError; invariant failures throw ValidationError.

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

Json real_matrix_to_json(const Eigen::MatrixXd& m);

Json observable_to_json(const DiscreteObservable& e);
DiscreteObservable observable_from_json(const Json& j, const Tolerance& tol = {});

Json instrument_to_json(const Instrument& instr);
Instrument instrument_from_json(const Json& j, const Tolerance& tol = {});

Json scheme_to_json(const MeasurementScheme& m);
MeasurementScheme scheme_from_json(const Json& j, const Tolerance& tol = {});

Json subset_to_json(const OutcomeSet& s);
Json outcome_map_to_json(const OutcomeMap& f);
OutcomeMap outcome_map_from_json(const Json& j, std::size_t target_outcomes);

Json biobservable_to_json(const Biobservable& b);
Biobservable biobservable_from_json(const Json& j, const Tolerance& tol = {});

Json certificate_to_json(const FunctionalCoexistenceCertificate& c);
FunctionalCoexistenceCertificate certificate_from_json(const Json& j, const Tolerance& tol = {});

Json subspace_to_json(const Subspace& s);
Json commutation_to_json(const CommutationCheck& c);
Json separation_to_json(const SeparationCertificate& s);

}  // namespace coexist
