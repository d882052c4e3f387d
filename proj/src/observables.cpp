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

#include "coexist/observables.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace coexist {

OutcomeSet mask_to_set(std::uint64_t mask, std::size_t n) {
  OutcomeSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (std::uint64_t{1} << i)) out.push_back(i);
  }
  return out;
}

std::uint64_t set_to_mask(const OutcomeSet& set, std::size_t n) {
  if (n > 64) {
    throw CoexistError(ErrorKind::TooManyOutcomes, "subset masks hold at most 64 outcomes");
  }
  std::uint64_t mask = 0;
  for (std::size_t i : set) {
    if (i >= n) {
      throw CoexistError(
          ErrorKind::IndexOutOfRange, "outcome index " + std::to_string(i) +
                                          " outside {0.." + std::to_string(n) + ")");
    }
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

OutcomeSet full_set(std::size_t n) {
  OutcomeSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

OutcomeSet complement_set(const OutcomeSet& set, std::size_t n) {
  std::vector<bool> in(n, false);
  for (std::size_t i : set) {
    if (i >= n) throw CoexistError(ErrorKind::IndexOutOfRange, "complement_set");
    in[i] = true;
  }
  OutcomeSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

DiscreteObservable::DiscreteObservable(
    std::vector<CMatrix> effects, const Tolerance& tol)
    : effects_(std::move(effects)) {
  if (effects_.empty()) {
    throw CoexistError(ErrorKind::ValidationError, "observable has no outcomes");
  }
  const Eigen::Index d = effects_.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    CMatrix& a = effects_[i];
    if (a.rows() != d || a.cols() != d || d == 0) {
      throw CoexistError(
          ErrorKind::ValidationError,
          "atom " + std::to_string(i) + " has inconsistent dimensions");
    }
    if (!is_effect(a, tol)) {
      throw CoexistError(
          ErrorKind::ValidationError,
          "atom " + std::to_string(i) + " is not an effect");
    }
    a = 0.5 * (a + a.adjoint()).eval();
    total += a;
  }
  const double dev = operator_norm(total - identity(d));
  if (dev > tol.eq) {
    throw CoexistError(
        ErrorKind::ValidationError,
        "normalization: effects sum to identity only within " + format_real(dev));
  }
}

DiscreteObservable DiscreteObservable::trivial(Eigen::Index dim) {
  return DiscreteObservable({identity(dim)});
}

bool DiscreteObservable::is_pvm(const Tolerance& tol) const {
  return std::all_of(effects_.begin(), effects_.end(), [&](const CMatrix& a) {
    return is_projection(a, tol);
  });
}

double observable_distance(const DiscreteObservable& a, const DiscreteObservable& b) {
  if (a.outcomes() != b.outcomes() || a.dim() != b.dim()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.outcomes(); ++i) {
    worst = std::max(worst, operator_norm(a.atom(i) - b.atom(i)));
  }
  return worst;
}

OutcomeMap::OutcomeMap(std::size_t target_outcomes, std::vector<std::size_t> table)
    : target_(target_outcomes), table_(std::move(table)) {
  if (table_.empty() || target_ == 0) {
    throw CoexistError(ErrorKind::MapMismatch, "outcome map must have nonempty domain and codomain");
  }
  for (std::size_t v : table_) {
    if (v >= target_) {
      throw CoexistError(
          ErrorKind::MapMismatch,
          "outcome map value " + std::to_string(v) + " outside target range");
    }
  }
}

OutcomeMap OutcomeMap::identity(std::size_t n) { return OutcomeMap(n, full_set(n)); }

OutcomeMap OutcomeMap::constant(std::size_t source, std::size_t target, std::size_t value) {
  return OutcomeMap(target, std::vector<std::size_t>(source, value));
}

OutcomeSet OutcomeMap::preimage(const OutcomeSet& targets) const {
  std::vector<bool> hit(target_, false);
  for (std::size_t t : targets) {
    if (t >= target_) throw CoexistError(ErrorKind::IndexOutOfRange, "preimage target");
    hit[t] = true;
  }
  OutcomeSet out;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (hit[table_[i]]) out.push_back(i);
  }
  return out;
}

OutcomeMap OutcomeMap::followed_by(const OutcomeMap& then) const {
  if (then.source_outcomes() != target_) {
    throw CoexistError(ErrorKind::MapMismatch, "cannot compose outcome maps");
  }
  std::vector<std::size_t> table(table_.size());
  for (std::size_t i = 0; i < table_.size(); ++i) table[i] = then(table_[i]);
  return OutcomeMap(then.target_outcomes(), std::move(table));
}

CMatrix effect_of_set(const DiscreteObservable& e, const OutcomeSet& x) {
  std::vector<bool> in(e.outcomes(), false);
  for (std::size_t i : x) {
    if (i >= e.outcomes()) {
      throw CoexistError(
          ErrorKind::IndexOutOfRange,
          "outcome " + std::to_string(i) + " outside {0.." +
              std::to_string(e.outcomes()) + ")");
    }
    in[i] = true;
  }
  CMatrix out = CMatrix::Zero(e.dim(), e.dim());
  for (std::size_t i = 0; i < e.outcomes(); ++i) {
    if (in[i]) out += e.atom(i);
  }
  return out;
}

CMatrix effect_of_mask(const DiscreteObservable& e, std::uint64_t mask) {
  CMatrix out = CMatrix::Zero(e.dim(), e.dim());
  for (std::size_t i = 0; i < e.outcomes() && i < 64; ++i) {
    if (mask & (std::uint64_t{1} << i)) out += e.atom(i);
  }
  return out;
}

DiscreteObservable pushforward(
    const DiscreteObservable& e, const OutcomeMap& f, const Tolerance& tol) {
  if (f.source_outcomes() != e.outcomes()) {
    throw CoexistError(
        ErrorKind::MapMismatch,
        "map domain has " + std::to_string(f.source_outcomes()) +
            " outcomes, observable has " + std::to_string(e.outcomes()));
  }
  std::vector<CMatrix> atoms(
      f.target_outcomes(), CMatrix::Zero(e.dim(), e.dim()));
  for (std::size_t i = 0; i < e.outcomes(); ++i) atoms[f(i)] += e.atom(i);
  return DiscreteObservable(std::move(atoms), tol);
}

namespace {

constexpr std::size_t kMaxRegularityOutcomes = 30;

bool irregular_effect(const CMatrix& a, const Tolerance& tol) {
  const RVector ev = hermitian_eigenvalues(a);
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  const bool is_zero = std::max(std::abs(lo), std::abs(hi)) <= tol.eq;
  const bool is_one = std::max(std::abs(1.0 - lo), std::abs(1.0 - hi)) <= tol.eq;
  if (is_zero || is_one) return false;
  return hi <= 0.5 + tol.psd || lo >= 0.5 - tol.psd;
}

}  // namespace

RegularityResult is_regular(const DiscreteObservable& e, const Tolerance& tol) {
  const std::size_t n = e.outcomes();
  if (n > kMaxRegularityOutcomes) {
    throw CoexistError(ErrorKind::TooManyOutcomes, "regularity scan limited to 30 outcomes");
  }
  if (n == 1) return {};
  // X and its complement give the same verdict, so fix the top outcome out.
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < half; ++mask) {
    if (irregular_effect(effect_of_mask(e, mask), tol)) {
      return {false, mask_to_set(mask, n)};
    }
  }
  return {};
}

std::optional<std::size_t> RangeLattice::find(const CMatrix& a, const Tolerance& tol) const {
  const double d = static_cast<double>(a.rows());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const CMatrix diff = elements[k].effect - a;
    const double fro = diff.norm();
    if (fro > tol.eq * std::sqrt(d)) continue;
    if (fro <= tol.eq || operator_norm(diff) <= tol.eq) return k;
  }
  return std::nullopt;
}

RangeLattice range_lattice(const DiscreteObservable& e, const Tolerance& tol) {
  const std::size_t n = e.outcomes();
  if (n > kMaxEnumeratedOutcomes) {
    throw CoexistError(
        ErrorKind::TooManyOutcomes,
        "range enumeration needs n <= 12, got " + std::to_string(n));
  }
  RangeLattice lattice;
  lattice.outcomes = n;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    CMatrix a = effect_of_mask(e, mask);
    if (!lattice.find(a, tol)) lattice.elements.push_back({std::move(a), mask});
  }
  return lattice;
}

namespace {

// Finite poset over the deduplicated range, ordered by Loewner order.
class RangePoset {
 public:
  RangePoset(const RangeLattice& lattice, const Tolerance& tol)
      : size_(lattice.elements.size()), leq_(size_ * size_, false) {
    for (std::size_t a = 0; a < size_; ++a) {
      for (std::size_t b = 0; b < size_; ++b) {
        leq_[a * size_ + b] =
            a == b ||
            loewner_leq(lattice.elements[a].effect, lattice.elements[b].effect, tol);
      }
    }
  }

  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size_ + b]; }

  std::optional<std::size_t> meet(std::size_t a, std::size_t b) const {
    return extremum(a, b, true);
  }
  std::optional<std::size_t> join(std::size_t a, std::size_t b) const {
    return extremum(a, b, false);
  }

 private:
  // Greatest lower bound (lower = true) or least upper bound.
  std::optional<std::size_t> extremum(std::size_t a, std::size_t b, bool lower) const {
    std::vector<std::size_t> bounds;
    for (std::size_t c = 0; c < size_; ++c) {
      const bool ok = lower ? (leq(c, a) && leq(c, b)) : (leq(a, c) && leq(b, c));
      if (ok) bounds.push_back(c);
    }
    for (std::size_t c : bounds) {
      const bool best = std::all_of(bounds.begin(), bounds.end(), [&](std::size_t x) {
        return lower ? leq(x, c) : leq(c, x);
      });
      if (best) return c;
    }
    return std::nullopt;
  }

  std::size_t size_;
  std::vector<bool> leq_;
};

std::string describe(const RangeLattice& lattice, std::size_t k) {
  std::string s = "{";
  for (std::size_t i : mask_to_set(lattice.elements[k].mask, lattice.outcomes)) {
    if (s.size() > 1) s += ",";
    s += std::to_string(i + 1);
  }
  return s + "}";
}

std::string boolean_failure(const RangeLattice& lattice, const Tolerance& tol) {
  const std::size_t size = lattice.elements.size();
  const Eigen::Index d = lattice.elements.front().effect.rows();
  const auto zero = lattice.find(CMatrix::Zero(d, d), tol);
  const auto one = lattice.find(identity(d), tol);
  if (!zero || !one) return "range lacks zero or identity";

  std::vector<std::size_t> complement(size);
  for (std::size_t a = 0; a < size; ++a) {
    const auto c = lattice.find(identity(d) - lattice.elements[a].effect, tol);
    if (!c) return "range not closed under complement at E(" + describe(lattice, a) + ")";
    complement[a] = *c;
  }

  const RangePoset poset(lattice, tol);

  // Complement checks first: any irregular element fails here.
  for (std::size_t a = 0; a < size; ++a) {
    const auto m = poset.meet(a, complement[a]);
    if (!m) return "E(" + describe(lattice, a) + ") and its complement have no meet";
    if (*m != *zero) {
      return "E(" + describe(lattice, a) + ") meets its complement in a nonzero element";
    }
  }

  std::vector<std::size_t> meets(size * size), joins(size * size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      const auto m = poset.meet(a, b);
      const auto j = poset.join(a, b);
      if (!m) return "no meet for E(" + describe(lattice, a) + "), E(" + describe(lattice, b) + ")";
      if (!j) return "no join for E(" + describe(lattice, a) + "), E(" + describe(lattice, b) + ")";
      meets[a * size + b] = *m;
      joins[a * size + b] = *j;
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      for (std::size_t c = 0; c < size; ++c) {
        const std::size_t lhs = meets[a * size + joins[b * size + c]];
        const std::size_t rhs = joins[meets[a * size + b] * size + meets[a * size + c]];
        if (lhs != rhs) return "distributivity fails at E(" + describe(lattice, a) + ")";
      }
    }
  }
  return {};
}

}  // namespace

BooleanRangeReport range_is_boolean(const DiscreteObservable& e, const Tolerance& tol) {
  const RangeLattice lattice = range_lattice(e, tol);
  BooleanRangeReport report;
  report.lattice_size = lattice.elements.size();
  report.failure = boolean_failure(lattice, tol);
  report.boolean = report.failure.empty();
  report.regular = is_regular(e, tol).regular;
  report.anomaly = report.boolean != report.regular;
  return report;
}

bool summable_closure_check(
    const DiscreteObservable& e, const std::vector<OutcomeSet>& selection,
    const Tolerance& tol) {
  if (!is_regular(e, tol).regular) {
    throw CoexistError(ErrorKind::NotRegular, "summable_closure_check needs a regular observable");
  }
  const CMatrix id = identity(e.dim());
  CMatrix sum = CMatrix::Zero(e.dim(), e.dim());
  for (std::size_t k = 0; k < selection.size(); ++k) {
    sum += effect_of_set(e, selection[k]);
    if (!loewner_leq(sum, id, tol)) {
      throw CoexistError(
          ErrorKind::NotSummable,
          "partial sum " + std::to_string(k + 1) + " exceeds the identity");
    }
  }
  return range_lattice(e, tol).find(sum, tol).has_value();
}

}  // namespace coexist
