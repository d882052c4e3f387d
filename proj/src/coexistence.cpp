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

#include "coexist/coexistence.hpp"

#include <algorithm>
#include <future>
#include <limits>

#include "coexist/random.hpp"

namespace coexist {

namespace {

std::vector<CMatrix> validated_grid(
    std::size_t n1, std::size_t n2, std::vector<CMatrix> grid, const Tolerance& tol) {
  if (n1 == 0 || n2 == 0 || grid.size() != n1 * n2) {
    throw CoexistError(
        ErrorKind::ValidationError,
        "biobservable grid must hold n1*n2 = " + std::to_string(n1 * n2) + " cells");
  }
  const Eigen::Index d = grid.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CMatrix& a = grid[k];
    if (a.rows() != d || a.cols() != d || d == 0) {
      throw CoexistError(ErrorKind::ValidationError, "grid cells have inconsistent dimensions");
    }
    if (!is_psd(a, tol)) {
      throw CoexistError(
          ErrorKind::ValidationError,
          "grid cell (" + std::to_string(k / n2 + 1) + "," + std::to_string(k % n2 + 1) +
              ") is not positive");
    }
    a = 0.5 * (a + a.adjoint()).eval();
    total += a;
  }
  if (operator_norm(total - identity(d)) > tol.eq) {
    throw CoexistError(ErrorKind::ValidationError, "normalization: grid does not total the identity");
  }
  return grid;
}

DiscreteObservable row_sums(
    std::size_t n1, std::size_t n2, const std::vector<CMatrix>& grid, const Tolerance& tol) {
  std::vector<CMatrix> atoms(n1, CMatrix::Zero(grid.front().rows(), grid.front().rows()));
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) atoms[i] += grid[i * n2 + j];
  }
  return DiscreteObservable(std::move(atoms), tol);
}

DiscreteObservable col_sums(
    std::size_t n1, std::size_t n2, const std::vector<CMatrix>& grid, const Tolerance& tol) {
  std::vector<CMatrix> atoms(n2, CMatrix::Zero(grid.front().rows(), grid.front().rows()));
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) atoms[j] += grid[i * n2 + j];
  }
  return DiscreteObservable(std::move(atoms), tol);
}

void require_same_dim(const DiscreteObservable& e1, const DiscreteObservable& e2, const char* what) {
  if (e1.dim() != e2.dim()) {
    throw CoexistError(
        ErrorKind::DimMismatch, std::string(what) + ": observables act on spaces of dimension " +
                                    std::to_string(e1.dim()) + " and " + std::to_string(e2.dim()));
  }
}

}  // namespace

Biobservable::Biobservable(
    std::size_t n1, std::size_t n2, std::vector<CMatrix> grid, const Tolerance& tol)
    : n1_(n1),
      n2_(n2),
      grid_(validated_grid(n1, n2, std::move(grid), tol)),
      first_(row_sums(n1, n2, grid_, tol)),
      second_(col_sums(n1, n2, grid_, tol)) {}

CMatrix Biobservable::value(const OutcomeSet& x, const OutcomeSet& y) const {
  const std::uint64_t mx = set_to_mask(x, n1_);
  const std::uint64_t my = set_to_mask(y, n2_);
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < n1_; ++i) {
    if (!(mx >> i & 1)) continue;
    for (std::size_t j = 0; j < n2_; ++j) {
      if (my >> j & 1) out += cell(i, j);
    }
  }
  return out;
}

double grid_distance(const Biobservable& a, const Biobservable& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.dim() != b.dim()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.cells().size(); ++k) {
    worst = std::max(worst, operator_norm(a.cells()[k] - b.cells()[k]));
  }
  return worst;
}

DiscreteObservable JointObservable::flattened(const Tolerance& tol) const {
  return DiscreteObservable(grid_.cells(), tol);
}

FunctionalCoexistenceCertificate::FunctionalCoexistenceCertificate(
    DiscreteObservable mother, OutcomeMap map1, OutcomeMap map2,
    DiscreteObservable target1, DiscreteObservable target2, const Tolerance& tol)
    : mother_(std::move(mother)),
      map1_(std::move(map1)),
      map2_(std::move(map2)),
      target1_(std::move(target1)),
      target2_(std::move(target2)) {
  const auto check = [&](const OutcomeMap& f, const DiscreteObservable& target, int k) {
    if (f.source_outcomes() != mother_.outcomes() || f.target_outcomes() != target.outcomes() ||
        target.dim() != mother_.dim()) {
      throw CoexistError(
          ErrorKind::CertificateInvalid, "map " + std::to_string(k) + " does not fit mother/target");
    }
    const double dev = observable_distance(pushforward(mother_, f, tol), target);
    if (dev > tol.eq) {
      throw CoexistError(
          ErrorKind::CertificateInvalid,
          "pushforward under map " + std::to_string(k) + " misses target by " + std::to_string(dev));
    }
  };
  check(map1_, target1_, 1);
  check(map2_, target2_, 2);
}

CoexistenceWitness embed_in_witness(
    const DiscreteObservable& witness, const DiscreteObservable& e1,
    const DiscreteObservable& e2, const Tolerance& tol) {
  require_same_dim(witness, e1, "embed_in_witness");
  require_same_dim(witness, e2, "embed_in_witness");
  const RangeLattice lattice = range_lattice(witness, tol);
  CoexistenceWitness out{witness, {}};
  for (std::size_t k = 1; k <= 2; ++k) {
    const DiscreteObservable& target = k == 1 ? e1 : e2;
    const std::size_t n = target.outcomes();
    if (n > kMaxEnumeratedOutcomes) {
      throw CoexistError(ErrorKind::TooManyOutcomes, "target has too many outcomes to embed");
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto hit = lattice.find(effect_of_mask(target, mask), tol);
      if (!hit) {
        std::string subset;
        for (std::size_t i : mask_to_set(mask, n)) {
          subset += (subset.empty() ? "" : ",") + std::to_string(i + 1);
        }
        throw CoexistError(
            ErrorKind::EmbeddingNotFound,
            "E" + std::to_string(k) + "({" + subset + "}) is not in the witness range");
      }
      out.embeddings.push_back(
          {k, mask_to_set(mask, n), mask_to_set(lattice.elements[*hit].mask, witness.outcomes())});
    }
  }
  return out;
}

CommutationCheck check_mutual_commutation(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol) {
  require_same_dim(e1, e2, "check_mutual_commutation");
  CommutationCheck out;
  for (std::size_t i = 0; i < e1.outcomes(); ++i) {
    for (std::size_t j = 0; j < e2.outcomes(); ++j) {
      const double norm = operator_norm(commutator(e1.atom(i), e2.atom(j)));
      if (norm > out.worst_norm) out = {true, i, j, norm};
    }
  }
  out.commute = out.worst_norm <= tol.eq;
  return out;
}

JointObservable joint_from_commuting(
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol) {
  const CommutationCheck check = check_mutual_commutation(e1, e2, tol);
  if (!check.commute) {
    throw CoexistError(
        ErrorKind::NotCommuting,
        "atoms (" + std::to_string(check.worst_first + 1) + "," +
            std::to_string(check.worst_second + 1) + ") have commutator norm " +
            format_real(check.worst_norm));
  }
  std::vector<CMatrix> grid;
  grid.reserve(e1.outcomes() * e2.outcomes());
  for (const CMatrix& a : e1.effects()) {
    for (const CMatrix& b : e2.effects()) {
      // Symmetrized product; equals a*b for commuting a, b.
      grid.push_back(0.5 * (a * b + b * a));
    }
  }
  return JointObservable(Biobservable(e1.outcomes(), e2.outcomes(), std::move(grid), tol));
}

JointObservable diagonal_joint(const DiscreteObservable& e, const Tolerance& tol) {
  const std::size_t n = e.outcomes();
  std::vector<CMatrix> grid(n * n, CMatrix::Zero(e.dim(), e.dim()));
  for (std::size_t i = 0; i < n; ++i) grid[i * n + i] = e.atom(i);
  return JointObservable(Biobservable(n, n, std::move(grid), tol));
}

JointObservable biobservable_to_joint(const Biobservable& b) { return JointObservable(b); }

FunctionalCoexistenceCertificate joint_to_functional(
    const JointObservable& f, const Tolerance& tol) {
  const std::size_t n1 = f.grid().rows();
  const std::size_t n2 = f.grid().cols();
  std::vector<std::size_t> pi1(n1 * n2), pi2(n1 * n2);
  for (std::size_t k = 0; k < n1 * n2; ++k) {
    pi1[k] = k / n2;
    pi2[k] = k % n2;
  }
  return FunctionalCoexistenceCertificate(
      f.flattened(tol), OutcomeMap(n1, std::move(pi1)), OutcomeMap(n2, std::move(pi2)),
      f.first_marginal(), f.second_marginal(), tol);
}

Biobservable functional_to_biobservable(
    const FunctionalCoexistenceCertificate& cert, const Tolerance& tol) {
  const std::size_t n1 = cert.map1().target_outcomes();
  const std::size_t n2 = cert.map2().target_outcomes();
  const Eigen::Index d = cert.mother().dim();
  std::vector<CMatrix> grid(n1 * n2, CMatrix::Zero(d, d));
  for (std::size_t k = 0; k < cert.mother().outcomes(); ++k) {
    grid[cert.map1()(k) * n2 + cert.map2()(k)] += cert.mother().atom(k);
  }
  Biobservable b(n1, n2, std::move(grid), tol);
  if (observable_distance(b.first_marginal(), cert.target1()) > tol.eq ||
      observable_distance(b.second_marginal(), cert.target2()) > tol.eq) {
    throw CoexistError(ErrorKind::CertificateInvalid, "biobservable marginals miss the targets");
  }
  return b;
}

FunctionalCoexistenceCertificate two_valued_joint(
    const DiscreteObservable& witness, const OutcomeSet& x, const OutcomeSet& y,
    const Tolerance& tol) {
  const std::size_t n = witness.outcomes();
  const std::uint64_t all = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t mx = set_to_mask(x, n);
  const std::uint64_t my = set_to_mask(y, n);
  const std::uint64_t cx = all & ~mx;
  const std::uint64_t cy = all & ~my;
  // Cells ordered X∩Y, X'∩Y, X∩Y', X'∩Y'.
  std::vector<CMatrix> cells{
      effect_of_mask(witness, mx & my), effect_of_mask(witness, cx & my),
      effect_of_mask(witness, mx & cy), effect_of_mask(witness, cx & cy)};
  const CMatrix ex = effect_of_mask(witness, mx);
  const CMatrix ey = effect_of_mask(witness, my);
  const CMatrix id = identity(witness.dim());
  return FunctionalCoexistenceCertificate(
      DiscreteObservable(std::move(cells), tol), OutcomeMap(2, {0, 1, 0, 1}),
      OutcomeMap(2, {0, 0, 1, 1}), DiscreteObservable({ex, id - ex}, tol),
      DiscreteObservable({ey, id - ey}, tol), tol);
}

Biobservable regular_coexistence_joint(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const DiscreteObservable& witness, const Tolerance& tol) {
  require_same_dim(witness, e1, "regular_coexistence_joint");
  require_same_dim(witness, e2, "regular_coexistence_joint");
  if (!is_regular(witness, tol).regular) {
    throw CoexistError(ErrorKind::WitnessNotRegular, "witness observable is not regular");
  }
  const RangeLattice lattice = range_lattice(witness, tol);
  const auto representatives = [&](const DiscreteObservable& e, int k) {
    std::vector<std::uint64_t> masks;
    for (std::size_t i = 0; i < e.outcomes(); ++i) {
      const auto hit = lattice.find(e.atom(i), tol);
      if (!hit) {
        throw CoexistError(
            ErrorKind::EmbeddingNotFound,
            "atom " + std::to_string(i + 1) + " of E" + std::to_string(k) +
                " is not in the witness range");
      }
      masks.push_back(lattice.elements[*hit].mask);
    }
    return masks;
  };
  const std::vector<std::uint64_t> z1 = representatives(e1, 1);
  const std::vector<std::uint64_t> z2 = representatives(e2, 2);

  std::vector<CMatrix> grid;
  for (std::uint64_t a : z1) {
    for (std::uint64_t b : z2) grid.push_back(effect_of_mask(witness, a & b));
  }
  Biobservable out(e1.outcomes(), e2.outcomes(), std::move(grid), tol);
  if (observable_distance(out.first_marginal(), e1) > tol.eq ||
      observable_distance(out.second_marginal(), e2) > tol.eq) {
    throw CoexistError(
        ErrorKind::CertificateInvalid, "meet grid marginals do not reproduce the targets");
  }
  return out;
}

std::string_view feasibility_name(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::Feasible: return "FEASIBLE";
    case FeasibilityStatus::Infeasible: return "INFEASIBLE";
    case FeasibilityStatus::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

bool verify_separation(
    const SeparationCertificate& cert, const DiscreteObservable& e1,
    const DiscreteObservable& e2, const Tolerance& tol) {
  if (cert.alpha.size() != e1.outcomes() || cert.beta.size() != e2.outcomes()) return false;
  double value = 0.0;
  for (std::size_t i = 0; i < e1.outcomes(); ++i) {
    value += (cert.alpha[i] * e1.atom(i)).trace().real();
  }
  for (std::size_t j = 0; j < e2.outcomes(); ++j) {
    value += (cert.beta[j] * e2.atom(j)).trace().real();
  }
  if (value >= -tol.prob) return false;
  for (const CMatrix& a : cert.alpha) {
    for (const CMatrix& b : cert.beta) {
      if (hermitian_eigenvalues(a + b)(0) < 0.0) return false;
    }
  }
  return true;
}

namespace {

// Alternating projections between the product of PSD cones and the affine
// set of grids with prescribed marginals.
constexpr double kInteriorMargin = 1e-6;

class MarginalProblem {
 public:
  MarginalProblem(const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol)
      : e1_(e1), e2_(e2), tol_(tol), n1_(e1.outcomes()), n2_(e2.outcomes()), d_(e1.dim()) {}

  std::vector<CMatrix> product_guess() const {
    std::vector<CMatrix> g;
    for (std::size_t i = 0; i < n1_; ++i) {
      for (std::size_t j = 0; j < n2_; ++j) {
        g.push_back(e1_.atom(i) * (e2_.atom(j).trace().real() / static_cast<double>(d_)));
      }
    }
    return g;
  }

  // Frobenius projection onto {sum_j G_ij = E1_i, sum_i G_ij = E2_j}.
  void project_affine(std::vector<CMatrix>& g) const {
    std::vector<CMatrix> row(n1_), col(n2_);
    for (std::size_t i = 0; i < n1_; ++i) row[i] = e1_.atom(i);
    for (std::size_t j = 0; j < n2_; ++j) col[j] = e2_.atom(j);
    CMatrix total = identity(d_);
    for (std::size_t i = 0; i < n1_; ++i) {
      for (std::size_t j = 0; j < n2_; ++j) {
        row[i] -= g[i * n2_ + j];
        col[j] -= g[i * n2_ + j];
        total -= g[i * n2_ + j];
      }
    }
    const double a = 1.0 / static_cast<double>(n2_);
    const double b = 1.0 / static_cast<double>(n1_);
    const double c = a * b;
    for (std::size_t i = 0; i < n1_; ++i) {
      for (std::size_t j = 0; j < n2_; ++j) {
        CMatrix& cell = g[i * n2_ + j];
        cell += a * row[i] + b * col[j] - c * total;
        cell = 0.5 * (cell + cell.adjoint()).eval();
      }
    }
  }

  double min_eigenvalue(const std::vector<CMatrix>& g) const {
    double lo = std::numeric_limits<double>::infinity();
    for (const CMatrix& cell : g) lo = std::min(lo, hermitian_eigenvalues(cell)(0));
    return lo;
  }

  double marginal_residual(const std::vector<CMatrix>& g) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n1_; ++i) {
      CMatrix s = -e1_.atom(i);
      for (std::size_t j = 0; j < n2_; ++j) s += g[i * n2_ + j];
      worst = std::max(worst, operator_norm(s));
    }
    for (std::size_t j = 0; j < n2_; ++j) {
      CMatrix s = -e2_.atom(j);
      for (std::size_t i = 0; i < n1_; ++i) s += g[i * n2_ + j];
      worst = std::max(worst, operator_norm(s));
    }
    return worst;
  }

  // Fits alpha_i + beta_j to the clipped-away negative parts, shifts alpha to
  // make every cell PSD, and keeps the result only if it verifies.
  std::optional<SeparationCertificate> try_separation(
      const std::vector<CMatrix>& gap) const {
    CMatrix grand = CMatrix::Zero(d_, d_);
    std::vector<CMatrix> alpha(n1_, CMatrix::Zero(d_, d_)), beta(n2_, CMatrix::Zero(d_, d_));
    for (std::size_t i = 0; i < n1_; ++i) {
      for (std::size_t j = 0; j < n2_; ++j) {
        alpha[i] += gap[i * n2_ + j] / static_cast<double>(n2_);
        beta[j] += gap[i * n2_ + j] / static_cast<double>(n1_);
        grand += gap[i * n2_ + j] / static_cast<double>(n1_ * n2_);
      }
    }
    double scale = 0.0;
    for (CMatrix& a : alpha) {
      a -= grand;
      a = 0.5 * (a + a.adjoint()).eval();
      scale = std::max(scale, operator_norm(a));
    }
    for (CMatrix& b : beta) {
      b = 0.5 * (b + b.adjoint()).eval();
      scale = std::max(scale, operator_norm(b));
    }
    if (scale <= 0.0) return std::nullopt;
    for (CMatrix& a : alpha) a /= scale;
    for (CMatrix& b : beta) b /= scale;
    double lo = std::numeric_limits<double>::infinity();
    for (const CMatrix& a : alpha) {
      for (const CMatrix& b : beta) lo = std::min(lo, hermitian_eigenvalues(a + b)(0));
    }
    // Slightly more than -lo so that rounding cannot leave a negative cell.
    const double shift = std::max(0.0, -lo) * (1.0 + 1e-9) + 1e-12;
    for (CMatrix& a : alpha) a += shift * identity(d_);
    SeparationCertificate cert{std::move(alpha), std::move(beta), 0.0, 0.0};
    for (std::size_t i = 0; i < n1_; ++i) {
      cert.value += (cert.alpha[i] * e1_.atom(i)).trace().real();
    }
    for (std::size_t j = 0; j < n2_; ++j) {
      cert.value += (cert.beta[j] * e2_.atom(j)).trace().real();
    }
    cert.min_cell_eigenvalue = std::numeric_limits<double>::infinity();
    for (const CMatrix& a : cert.alpha) {
      for (const CMatrix& b : cert.beta) {
        cert.min_cell_eigenvalue = std::min(cert.min_cell_eigenvalue, hermitian_eigenvalues(a + b)(0));
      }
    }
    if (!verify_separation(cert, e1_, e2_, tol_)) return std::nullopt;
    return cert;
  }

  FeasibilityResult run(std::vector<CMatrix> g, const FeasibilityOptions& options,
                        std::uint64_t seed) const {
    FeasibilityResult result;
    result.seed = seed;
    result.residual = std::numeric_limits<double>::infinity();
    const std::size_t interval = std::max<std::size_t>(options.certificate_interval, 1);
    // Loosened validation for grids accepted on marginal residual alone.
    Tolerance loose = tol_;
    loose.eq = 10.0 * tol_.eq * static_cast<double>(std::max(n1_, n2_));

    // First half: clip to cells >= margin * I so that problems with interior
    // points end on an exactly feasible affine iterate.
    const std::size_t margin_phase = options.max_iters / 2;
    for (std::size_t it = 1; it <= options.max_iters; ++it) {
      result.iterations = it;
      const double margin = it <= margin_phase ? kInteriorMargin : 0.0;
      project_affine(g);
      if (min_eigenvalue(g) >= -tol_.psd) {
        result.status = FeasibilityStatus::Feasible;
        result.residual = marginal_residual(g);
        result.tolerance = tol_;
        result.joint = JointObservable(Biobservable(n1_, n2_, g, tol_));
        result.reason = "alternating projections reached a positive grid with exact marginals";
        return result;
      }
      std::vector<CMatrix> clipped(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        clipped[k] = margin > 0.0 ? CMatrix(clip_to_psd(g[k] - margin * identity(d_)) + margin * identity(d_))
                                  : clip_to_psd(g[k]);
      }
      const double residual = marginal_residual(clipped);
      result.residual = std::min(result.residual, residual);
      if (residual <= 10.0 * tol_.eq) {
        result.status = FeasibilityStatus::Feasible;
        result.residual = residual;
        result.tolerance = loose;
        result.joint = JointObservable(Biobservable(n1_, n2_, clipped, loose));
        result.reason = "alternating projections converged within marginal tolerance";
        return result;
      }
      if (it % interval == 0) {
        std::vector<CMatrix> gap(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) gap[k] = clipped[k] - g[k];
        if (auto cert = try_separation(gap)) {
          result.status = FeasibilityStatus::Infeasible;
          result.separation = std::move(cert);
          result.reason = "dual separation certificate: positive cell weights with negative pairing";
          return result;
        }
      }
      g = std::move(clipped);
    }
    result.status = FeasibilityStatus::Indeterminate;
    result.reason = "no convergence within the iteration budget";
    return result;
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  Eigen::Index d() const { return d_; }

 private:
  const DiscreteObservable& e1_;
  const DiscreteObservable& e2_;
  Tolerance tol_;
  std::size_t n1_, n2_;
  Eigen::Index d_;
};

bool better(const FeasibilityResult& a, const FeasibilityResult& b) {
  const auto rank = [](FeasibilityStatus s) {
    switch (s) {
      case FeasibilityStatus::Feasible: return 0;
      case FeasibilityStatus::Infeasible: return 1;
      case FeasibilityStatus::Indeterminate: return 2;
    }
    return 2;
  };
  if (rank(a.status) != rank(b.status)) return rank(a.status) < rank(b.status);
  if (a.residual != b.residual) return a.residual < b.residual;
  return a.seed < b.seed;
}

}  // namespace

FeasibilityResult find_joint_observable(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const FeasibilityOptions& options, const Tolerance& tol) {
  require_same_dim(e1, e2, "find_joint_observable");
  const auto d = static_cast<std::size_t>(e1.dim());
  if (e1.outcomes() * e2.outcomes() * d * d > kMaxFeasibilitySize) {
    throw CoexistError(ErrorKind::TooLarge, "feasibility search limited to n1*n2*d^2 <= 65536");
  }

  const CommutationCheck commutation = check_mutual_commutation(e1, e2, tol);
  if (commutation.commute) {
    FeasibilityResult r;
    r.status = FeasibilityStatus::Feasible;
    r.joint = joint_from_commuting(e1, e2, tol);
    r.residual = 0.0;
    r.tolerance = tol;
    r.seed = options.seed;
    r.reason = "observables commute; product joint";
    return r;
  }
  if (e1.is_pvm(tol) || e2.is_pvm(tol)) {
    FeasibilityResult r;
    r.status = FeasibilityStatus::Infeasible;
    r.seed = options.seed;
    r.residual = commutation.worst_norm;
    r.reason = "a projection valued observable must commute with any coexistent partner; "
               "commutator norm " + format_real(commutation.worst_norm);
    return r;
  }

  const MarginalProblem problem(e1, e2, tol);
  const std::size_t starts = std::max<std::size_t>(options.restarts, 1);
  std::vector<std::future<FeasibilityResult>> jobs;
  for (std::size_t r = 0; r < starts; ++r) {
    const std::uint64_t seed = options.seed + r;
    jobs.push_back(std::async(std::launch::async, [&problem, &options, seed, r] {
      std::vector<CMatrix> g = problem.product_guess();
      if (r > 0) {
        Rng rng(seed);
        for (CMatrix& cell : g) {
          cell += 0.1 * random_hermitian(problem.d(), rng) /
                  static_cast<double>(problem.n1() * problem.n2());
        }
      }
      return problem.run(std::move(g), options, seed);
    }));
  }
  std::optional<FeasibilityResult> best;
  for (auto& job : jobs) {
    FeasibilityResult r = job.get();
    if (!best || better(r, *best)) best = std::move(r);
  }
  return *best;
}

std::string_view verdict_code(Verdict v) {
  switch (v) {
    case Verdict::CoexistentFunctional: return "COEXISTENT_FUNCTIONAL";
    case Verdict::Infeasible: return "INFEASIBLE";
    case Verdict::Indeterminate: return "INDETERMINATE";
    case Verdict::WitnessOnly: return "WITNESS_ONLY";
  }
  return "INDETERMINATE";
}

CoexistenceReport coexistence_report(
    const DiscreteObservable& e1, const DiscreteObservable& e2,
    const std::optional<DiscreteObservable>& witness, const FeasibilityOptions& options,
    const Tolerance& tol) {
  require_same_dim(e1, e2, "coexistence_report");
  CoexistenceReport report;
  report.commutation = check_mutual_commutation(e1, e2, tol);
  report.first_pvm = e1.is_pvm(tol);
  report.second_pvm = e2.is_pvm(tol);

  const auto conclude = [&](JointObservable joint, std::string method, std::string reason,
                            const Tolerance& ctol) {
    report.verdict = Verdict::CoexistentFunctional;
    // Targets are the inputs themselves, not the joint's marginals.
    const FunctionalCoexistenceCertificate f = joint_to_functional(joint, ctol);
    report.certificate.emplace(f.mother(), f.map1(), f.map2(), e1, e2, ctol);
    report.certificate_tolerance = ctol;
    report.joint = std::move(joint);
    report.method = std::move(method);
    report.reason = std::move(reason);
    return report;
  };

  if (observable_distance(e1, e2) <= tol.eq) {
    return conclude(diagonal_joint(e1, tol), "identical", "both observables coincide", tol);
  }
  if (report.commutation.commute) {
    return conclude(joint_from_commuting(e1, e2, tol), "commuting-product",
                    "mutually commuting observables have the product joint", tol);
  }
  if (report.first_pvm || report.second_pvm) {
    report.verdict = Verdict::Infeasible;
    report.method = "projection-fast-path";
    report.reason = "a projection valued observable coexists only with commuting observables; "
                    "commutator norm " + format_real(report.commutation.worst_norm);
    return report;
  }

  std::string witness_note;
  if (witness) {
    try {
      report.witness = embed_in_witness(*witness, e1, e2, tol);
      if (is_regular(*witness, tol).regular) {
        return conclude(
            JointObservable(regular_coexistence_joint(e1, e2, *witness, tol)), "regular-witness",
            "regular witness: meets in its Boolean range form a biobservable", tol);
      }
      witness_note = "witness verified (range inclusion) but not regular";
    } catch (const CoexistError& err) {
      if (err.kind() != ErrorKind::EmbeddingNotFound && err.kind() != ErrorKind::DimMismatch) {
        throw;
      }
      witness_note = std::string("witness rejected: ") + err.what();
    }
  }

  FeasibilityResult search = find_joint_observable(e1, e2, options, tol);
  report.search = search;
  if (search.status == FeasibilityStatus::Feasible) {
    return conclude(*search.joint, "feasibility-search", search.reason, search.tolerance);
  }
  if (report.witness) {
    report.verdict = Verdict::WitnessOnly;
    report.method = "witness";
    report.reason = witness_note + "; joint search: " + search.reason;
    return report;
  }
  report.verdict = search.status == FeasibilityStatus::Infeasible ? Verdict::Infeasible
                                                                  : Verdict::Indeterminate;
  report.method = "feasibility-search";
  report.reason = search.reason;
  if (!witness_note.empty()) report.reason = witness_note + "; " + report.reason;
  return report;
}

}  // namespace coexist
