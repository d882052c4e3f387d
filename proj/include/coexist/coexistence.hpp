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
#include <string_view>
#include <vector>

#include "coexist/observables.hpp"

namespace coexist {

// An n1 x n2 grid of positive operators totaling the identity. Atom (i, j) is
// B({i}, {j}); set values follow by finite additivity in each argument.
class Biobservable {
 public:
  Biobservable(std::size_t n1, std::size_t n2, std::vector<CMatrix> grid,
               const Tolerance& tol = {});

  Eigen::Index dim() const { return grid_.front().rows(); }
  std::size_t rows() const { return n1_; }
  std::size_t cols() const { return n2_; }
  const CMatrix& cell(std::size_t i, std::size_t j) const { return grid_.at(i * n2_ + j); }
  const std::vector<CMatrix>& cells() const { return grid_; }

  CMatrix value(const OutcomeSet& x, const OutcomeSet& y) const;
  // X -> B(X, Omega2) and Y -> B(Omega1, Y).
  const DiscreteObservable& first_marginal() const { return first_; }
  const DiscreteObservable& second_marginal() const { return second_; }

 private:
  std::size_t n1_, n2_;
  std::vector<CMatrix> grid_;
  DiscreteObservable first_, second_;
};

double grid_distance(const Biobservable& a, const Biobservable& b);

// The same data read as an observable on the product outcome set, flattened
// so that the pair (i, j) is outcome i * n2 + j.
class JointObservable {
 public:
  explicit JointObservable(Biobservable grid) : grid_(std::move(grid)) {}

  const Biobservable& grid() const { return grid_; }
  DiscreteObservable flattened(const Tolerance& tol = {}) const;
  const DiscreteObservable& first_marginal() const { return grid_.first_marginal(); }
  const DiscreteObservable& second_marginal() const { return grid_.second_marginal(); }

 private:
  Biobservable grid_;
};

// Mother observable plus outcome maps exhibiting both targets as pushforwards.
class FunctionalCoexistenceCertificate {
 public:
  // Throws CertificateInvalid unless pushforward(mother, map_k) = target_k.
  FunctionalCoexistenceCertificate(
      DiscreteObservable mother, OutcomeMap map1, OutcomeMap map2,
      DiscreteObservable target1, DiscreteObservable target2,
      const Tolerance& tol = {});

  const DiscreteObservable& mother() const { return mother_; }
  const OutcomeMap& map1() const { return map1_; }
  const OutcomeMap& map2() const { return map2_; }
  const DiscreteObservable& target1() const { return target1_; }
  const DiscreteObservable& target2() const { return target2_; }

 private:
  DiscreteObservable mother_;
  OutcomeMap map1_, map2_;
  DiscreteObservable target1_, target2_;
};

struct Embedding {
  std::size_t target;         // 1 or 2
  OutcomeSet target_subset;   // X in the target's value space
  OutcomeSet witness_subset;  // Z with witness(Z) = target(X)
};

struct CoexistenceWitness {
  DiscreteObservable witness;
  std::vector<Embedding> embeddings;
};

// Range-inclusion check: embeds every subset effect of both targets into the
// witness range. Throws EmbeddingNotFound naming the first missing effect.
CoexistenceWitness embed_in_witness(
    const DiscreteObservable& witness, const DiscreteObservable& e1,
    const DiscreteObservable& e2, const Tolerance& tol = {});

struct CommutationCheck {
  bool commute = true;
  std::size_t worst_first = 0;
  std::size_t worst_second = 0;
  double worst_norm = 0.0;
};

CommutationCheck check_mutual_commutation(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const Tolerance& tol = {});

JointObservable joint_from_commuting(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const Tolerance& tol = {});

// Diagonal joint of an observable with itself: cell (i, i) = E_i.
JointObservable diagonal_joint(const DiscreteObservable& e, const Tolerance& tol = {});

JointObservable biobservable_to_joint(const Biobservable& b);
FunctionalCoexistenceCertificate joint_to_functional(
    const JointObservable& f, const Tolerance& tol = {});
Biobservable functional_to_biobservable(
    const FunctionalCoexistenceCertificate& cert, const Tolerance& tol = {});

// Coarse-grains the witness over {X∩Y, X'∩Y, X∩Y', X'∩Y'} and returns the
// certificate for the two-valued observables {E(X), I-E(X)}, {E(Y), I-E(Y)}.
FunctionalCoexistenceCertificate two_valued_joint(
    const DiscreteObservable& witness, const OutcomeSet& x, const OutcomeSet& y,
    const Tolerance& tol = {});

// Biobservable of meets in the Boolean range of a regular witness, realized
// as witness effects of intersected representative subsets.
Biobservable regular_coexistence_joint(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const DiscreteObservable& witness, const Tolerance& tol = {});

enum class FeasibilityStatus { Feasible, Infeasible, Indeterminate };

std::string_view feasibility_name(FeasibilityStatus s);

// Dual certificate: Hermitian alpha_i, beta_j with alpha_i + beta_j >= 0 for
// every cell and sum tr(alpha_i E1_i) + sum tr(beta_j E2_j) = value < 0. Any
// joint G would give sum tr((alpha_i + beta_j) G_ij) >= 0, equal to value.
struct SeparationCertificate {
  std::vector<CMatrix> alpha;
  std::vector<CMatrix> beta;
  double value = 0.0;
  double min_cell_eigenvalue = 0.0;
};

bool verify_separation(
    const SeparationCertificate& cert, const DiscreteObservable& e1,
    const DiscreteObservable& e2, const Tolerance& tol = {});

struct FeasibilityOptions {
  std::size_t max_iters = 20000;
  std::uint64_t seed = 0;
  // Independent starts; start r > 0 perturbs the product guess with seed + r.
  std::size_t restarts = 1;
  std::size_t certificate_interval = 25;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Indeterminate;
  std::optional<JointObservable> joint;
  std::optional<SeparationCertificate> separation;
  std::string reason;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::uint64_t seed = 0;
  // Tolerance the joint was validated under; eq is loosened for grids
  // accepted on marginal residual alone.
  Tolerance tolerance;
};

// Upper bound on n1 * n2 * d^2 accepted by the search.
inline constexpr std::size_t kMaxFeasibilitySize = 65536;

FeasibilityResult find_joint_observable(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const FeasibilityOptions& options = {}, const Tolerance& tol = {});

enum class Verdict { CoexistentFunctional, Infeasible, Indeterminate, WitnessOnly };

std::string_view verdict_code(Verdict v);

struct CoexistenceReport {
  Verdict verdict = Verdict::Indeterminate;
  std::string method;
  std::string reason;
  CommutationCheck commutation;
  bool first_pvm = false;
  bool second_pvm = false;
  std::optional<FunctionalCoexistenceCertificate> certificate;
  std::optional<JointObservable> joint;
  std::optional<CoexistenceWitness> witness;
  std::optional<FeasibilityResult> search;
  // Tolerance under which the certificate validates.
  Tolerance certificate_tolerance;
};

CoexistenceReport coexistence_report(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const std::optional<DiscreteObservable>& witness = std::nullopt,
    const FeasibilityOptions& options = {}, const Tolerance& tol = {});

}  // namespace coexist
