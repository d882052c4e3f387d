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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coexist/operator_core.hpp"

namespace coexist {

// Outcome subsets are lists of 0-based outcome indices. Duplicates are
// ignored; order is irrelevant.
using OutcomeSet = std::vector<std::size_t>;

// Largest outcome count for which all 2^n subsets are enumerated.
inline constexpr std::size_t kMaxEnumeratedOutcomes = 12;

OutcomeSet mask_to_set(std::uint64_t mask, std::size_t n);
std::uint64_t set_to_mask(const OutcomeSet& set, std::size_t n);
OutcomeSet full_set(std::size_t n);
OutcomeSet complement_set(const OutcomeSet& set, std::size_t n);

// A POVM on the value space {0..n-1}: a finite family of effects that sums to
// the identity. The constructor validates; an instance is always valid under
// the tolerance it was built with.
class DiscreteObservable {
 public:
  explicit DiscreteObservable(
      std::vector<CMatrix> effects, const Tolerance& tol = {});

  static DiscreteObservable trivial(Eigen::Index dim);

  Eigen::Index dim() const { return effects_.front().rows(); }
  std::size_t outcomes() const { return effects_.size(); }
  const std::vector<CMatrix>& effects() const { return effects_; }
  const CMatrix& atom(std::size_t i) const { return effects_.at(i); }

  bool is_pvm(const Tolerance& tol = {}) const;

 private:
  std::vector<CMatrix> effects_;
};

// Maximum operator-norm distance between corresponding atoms; infinity if
// the outcome counts or dimensions differ.
double observable_distance(const DiscreteObservable& a, const DiscreteObservable& b);

// Total function {0..source-1} -> {0..target-1}.
class OutcomeMap {
 public:
  OutcomeMap(std::size_t target_outcomes, std::vector<std::size_t> table);

  static OutcomeMap identity(std::size_t n);
  static OutcomeMap constant(std::size_t source, std::size_t target = 1,
                             std::size_t value = 0);

  std::size_t source_outcomes() const { return table_.size(); }
  std::size_t target_outcomes() const { return target_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t operator()(std::size_t i) const { return table_.at(i); }

  OutcomeSet preimage(const OutcomeSet& targets) const;

  // (then ∘ *this): first apply this map, then `then`.
  OutcomeMap followed_by(const OutcomeMap& then) const;

 private:
  std::size_t target_;
  std::vector<std::size_t> table_;
};

CMatrix effect_of_set(const DiscreteObservable& e, const OutcomeSet& x);
CMatrix effect_of_mask(const DiscreteObservable& e, std::uint64_t mask);

DiscreteObservable pushforward(
    const DiscreteObservable& e, const OutcomeMap& f, const Tolerance& tol = {});

struct RegularityResult {
  bool regular = true;
  std::optional<OutcomeSet> witness;  // a nontrivial X with E(X) <= I/2 or >= I/2
};

RegularityResult is_regular(const DiscreteObservable& e, const Tolerance& tol = {});

struct RangeElement {
  CMatrix effect;
  std::uint64_t mask;  // first-seen representative subset
};

struct RangeLattice {
  std::size_t outcomes = 0;
  std::vector<RangeElement> elements;

  // Index of the element equal to a within tol.eq, if any.
  std::optional<std::size_t> find(const CMatrix& a, const Tolerance& tol = {}) const;
};

RangeLattice range_lattice(const DiscreteObservable& e, const Tolerance& tol = {});

struct BooleanRangeReport {
  bool boolean = false;
  bool regular = false;
  // Set when the poset verdict and the regularity verdict disagree.
  bool anomaly = false;
  std::size_t lattice_size = 0;
  std::string failure;
};

BooleanRangeReport range_is_boolean(
    const DiscreteObservable& e, const Tolerance& tol = {});

bool summable_closure_check(
    const DiscreteObservable& e, const std::vector<OutcomeSet>& selection,
    const Tolerance& tol = {});

}  // namespace coexist
