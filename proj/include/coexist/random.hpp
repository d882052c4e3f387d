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

#include <random>

#include "coexist/observables.hpp"

namespace coexist {

// Random instances for property tests and solver restarts. All generators are
// deterministic functions of the engine state.
using Rng = std::mt19937_64;

CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CMatrix random_hermitian(Eigen::Index d, Rng& rng);
// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
CMatrix random_unitary(Eigen::Index d, Rng& rng);
CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CVector random_unit_vector(Eigen::Index d, Rng& rng);
// Full-rank density matrix from a Wishart draw.
CMatrix random_density(Eigen::Index d, Rng& rng);

DiscreteObservable random_povm(Eigen::Index d, std::size_t n, Rng& rng);
// Rank-one projections of a random basis distributed over n atoms; every atom
// is nonzero when n <= d.
DiscreteObservable random_pvm(Eigen::Index d, std::size_t n, Rng& rng);

std::size_t random_index(std::size_t n, Rng& rng);
OutcomeSet random_subset(std::size_t n, Rng& rng);

}  // namespace coexist
