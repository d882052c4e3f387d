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

#include "coexist/schemes.hpp"

#include <cmath>

namespace coexist {

namespace {

DiscreteObservable checked_pointer(DiscreteObservable p, const CMatrix& w) {
  if (p.dim() != w.rows()) {
    throw CoexistError(ErrorKind::InvalidScheme, "pointer acts on a space of the wrong dimension");
  }
  return p;
}

CMatrix checked_state(CMatrix w, const Tolerance& tol) {
  try {
    return DensityState(std::move(w), tol).matrix();
  } catch (const CoexistError& err) {
    throw CoexistError(ErrorKind::InvalidScheme, std::string("apparatus state: ") + err.what());
  }
}

}  // namespace

MeasurementScheme::MeasurementScheme(
    Eigen::Index dim_system, CMatrix apparatus_state, DiscreteObservable pointer,
    std::vector<CMatrix> coupling_kraus, const Tolerance& tol)
    : dim_system_(dim_system),
      apparatus_state_(checked_state(std::move(apparatus_state), tol)),
      pointer_(checked_pointer(std::move(pointer), apparatus_state_)),
      coupling_kraus_(std::move(coupling_kraus)) {
  if (dim_system_ <= 0) {
    throw CoexistError(ErrorKind::InvalidScheme, "system dimension must be positive");
  }
  if (coupling_kraus_.empty()) {
    throw CoexistError(ErrorKind::InvalidScheme, "coupling has no Kraus operators");
  }
  const Eigen::Index n = dim_system_ * dim_apparatus();
  CMatrix total = CMatrix::Zero(n, n);
  for (const CMatrix& k : coupling_kraus_) {
    if (k.rows() != n || k.cols() != n) {
      throw CoexistError(ErrorKind::InvalidScheme, "coupling Kraus operator has the wrong size");
    }
    total += k.adjoint() * k;
  }
  if (operator_norm(total - identity(n)) > tol.eq) {
    throw CoexistError(ErrorKind::InvalidScheme, "coupling is not trace preserving");
  }
}

MeasurementScheme MeasurementScheme::trivial(Eigen::Index dim_system) {
  return MeasurementScheme(
      dim_system, identity(1), DiscreteObservable::trivial(1), {identity(dim_system)});
}

CMatrix coupled_state(const MeasurementScheme& m, const CMatrix& t) {
  if (t.rows() != m.dim_system() || t.cols() != m.dim_system()) {
    throw CoexistError(ErrorKind::DimMismatch, "state dimension differs from the scheme's system");
  }
  const CMatrix joint = kron(t, m.apparatus_state());
  CMatrix out = CMatrix::Zero(joint.rows(), joint.cols());
  for (const CMatrix& k : m.coupling_kraus()) out += k * joint * k.adjoint();
  return out;
}

DiscreteObservable measured_observable(const MeasurementScheme& m, const Tolerance& tol) {
  const Eigen::Index dh = m.dim_system();
  const Eigen::Index dk = m.dim_apparatus();
  const CMatrix id_h = identity(dh);
  const CMatrix weight = kron(id_h, m.apparatus_state());
  std::vector<CMatrix> atoms;
  for (const CMatrix& p : m.pointer().effects()) {
    const CMatrix pointer = kron(id_h, p);
    CMatrix dual = CMatrix::Zero(dh * dk, dh * dk);
    for (const CMatrix& k : m.coupling_kraus()) dual += k.adjoint() * pointer * k;
    atoms.push_back(partial_trace_apparatus(weight * dual, dh, dk));
  }
  try {
    return DiscreteObservable(std::move(atoms), tol);
  } catch (const CoexistError& err) {
    throw CoexistError(ErrorKind::InvalidScheme, std::string("measured observable: ") + err.what());
  }
}

namespace {

// Orthonormal basis of ran(p) for a projection p.
CMatrix range_basis(const CMatrix& p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (p + p.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < p.rows(); ++k) {
    if (solver.eigenvalues()(k) > 0.5) keep.push_back(k);
  }
  CMatrix basis(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
  }
  return basis;
}

}  // namespace

Instrument scheme_instrument(const MeasurementScheme& m, const Tolerance& tol) {
  if (!m.pointer().is_pvm(tol)) {
    throw CoexistError(ErrorKind::PointerNotProjective, "induced instrument needs a projective pointer");
  }
  const Eigen::Index dh = m.dim_system();
  const Eigen::Index dk = m.dim_apparatus();
  const CMatrix id_h = identity(dh);

  // W = sum_a w_a |a><a|.
  Eigen::SelfAdjointEigenSolver<CMatrix> wsolver(m.apparatus_state());
  std::vector<CMatrix> inject;  // sqrt(w_a) (I ⊗ |a>)
  for (Eigen::Index a = 0; a < dk; ++a) {
    const double w = wsolver.eigenvalues()(a);
    if (w <= tol.psd) continue;
    inject.push_back(std::sqrt(w) * kron(id_h, wsolver.eigenvectors().col(a)));
  }

  std::vector<std::vector<CMatrix>> kraus;
  for (const CMatrix& p : m.pointer().effects()) {
    const CMatrix basis = range_basis(p);
    std::vector<CMatrix> ops;
    for (Eigen::Index b = 0; b < basis.cols(); ++b) {
      const CMatrix project = kron(id_h, basis.col(b).adjoint());
      for (const CMatrix& k : m.coupling_kraus()) {
        for (const CMatrix& in : inject) ops.push_back(project * k * in);
      }
    }
    if (ops.empty()) ops.push_back(CMatrix::Zero(dh, dh));
    kraus.push_back(std::move(ops));
  }
  return Instrument(std::move(kraus), tol);
}

MeasuredTogetherResult measured_together(
    const MeasurementScheme& m, const OutcomeMap& f1, const OutcomeMap& f2,
    const DiscreteObservable& e1, const DiscreteObservable& e2, const Tolerance& tol) {
  const DiscreteObservable em = measured_observable(m, tol);
  if (f1.source_outcomes() != em.outcomes() || f2.source_outcomes() != em.outcomes()) {
    throw CoexistError(ErrorKind::MapMismatch, "pointer functions must be defined on the scheme's outcomes");
  }
  MeasuredTogetherResult out;
  out.deviation1 = observable_distance(pushforward(em, f1, tol), e1);
  out.deviation2 = observable_distance(pushforward(em, f2, tol), e2);
  out.holds = out.deviation1 <= tol.eq && out.deviation2 <= tol.eq;
  if (out.holds) out.certificate.emplace(em, f1, f2, e1, e2, tol);
  return out;
}

namespace {

// Completes the orthonormal columns of `partial` (placed at `fixed` column
// indices) to a unitary, filling the remaining columns in increasing index
// order with Gram-Schmidt over the standard basis.
CMatrix complete_to_unitary(
    const CMatrix& partial, const std::vector<Eigen::Index>& fixed, Eigen::Index n) {
  CMatrix u = CMatrix::Zero(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  CMatrix found(n, 0);
  for (std::size_t c = 0; c < fixed.size(); ++c) {
    u.col(fixed[c]) = partial.col(static_cast<Eigen::Index>(c));
    used[static_cast<std::size_t>(fixed[c])] = true;
  }
  found = partial;
  Eigen::Index next = 0;
  for (Eigen::Index e = 0; e < n && found.cols() < n; ++e) {
    CVector v = CVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) v -= found * (found.adjoint() * v);
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    v /= norm;
    while (used[static_cast<std::size_t>(next)]) ++next;
    u.col(next) = v;
    used[static_cast<std::size_t>(next)] = true;
    found.conservativeResize(Eigen::NoChange, found.cols() + 1);
    found.col(found.cols() - 1) = v;
  }
  return u;
}

}  // namespace

MeasurementScheme scheme_for_observable(const DiscreteObservable& e, const Tolerance& tol) {
  const Eigen::Index d = e.dim();
  const auto n = static_cast<Eigen::Index>(e.outcomes());
  const Eigen::Index total = d * n;

  // Isometry columns: J(h * n + i, c) = sqrt(E_i)(h, c).
  CMatrix isometry = CMatrix::Zero(total, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CMatrix root = psd_sqrt(e.atom(static_cast<std::size_t>(i)));
    for (Eigen::Index h = 0; h < d; ++h) isometry.row(h * n + i) = root.row(h);
  }
  // Column c carries the input phi = |c> ⊗ |0>, i.e. index c * n.
  std::vector<Eigen::Index> fixed;
  for (Eigen::Index c = 0; c < d; ++c) fixed.push_back(c * n);
  const CMatrix unitary = complete_to_unitary(isometry, fixed, total);

  std::vector<CMatrix> basis_pvm;
  for (Eigen::Index i = 0; i < n; ++i) {
    CMatrix p = CMatrix::Zero(n, n);
    p(i, i) = 1.0;
    basis_pvm.push_back(std::move(p));
  }
  CMatrix w = CMatrix::Zero(n, n);
  w(0, 0) = 1.0;
  MeasurementScheme scheme(d, std::move(w), DiscreteObservable(std::move(basis_pvm), tol), {unitary}, tol);

  const double dev = observable_distance(measured_observable(scheme, tol), e);
  if (dev > tol.eq) {
    throw CoexistError(
        ErrorKind::InvalidScheme, "constructed scheme misses the observable by " + std::to_string(dev));
  }
  return scheme;
}

SchemesCommutativeReport schemes_commutative(
    const MeasurementScheme& m1, const MeasurementScheme& m2, const Tolerance& tol) {
  if (m1.dim_system() != m2.dim_system()) {
    throw CoexistError(ErrorKind::InvalidScheme, "schemes act on systems of different dimension");
  }
  SchemesCommutativeReport report{
      order_independence(scheme_instrument(m1, tol), scheme_instrument(m2, tol), tol),
      measured_observable(m1, tol), measured_observable(m2, tol), {}};
  report.note = report.order.equal
                    ? "sequential application is order independent; measured observables are "
                      "functionally coexistent"
                    : "sequential application depends on the order (the generic case)";
  return report;
}

}  // namespace coexist
