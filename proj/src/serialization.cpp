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

#include "coexist/serialization.hpp"

#include <string>

namespace coexist {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw CoexistError(ErrorKind::ParseError, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::Index dim_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    parse_error(std::string("field '") + key + "' must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

void require_dim(const CMatrix& m, Eigen::Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    parse_error(std::string(what) + " must be " + std::to_string(d) + "x" + std::to_string(d));
  }
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_error("complex scalar must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) parse_error("matrix must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      parse_error("matrix rows have unequal lengths");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("vector must be a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json observable_to_json(const DiscreteObservable& e) {
  Json effects = Json::array();
  for (const CMatrix& a : e.effects()) effects.push_back(matrix_to_json(a));
  return {{"dim", e.dim()}, {"effects", std::move(effects)}};
}

DiscreteObservable observable_from_json(const Json& j, const Tolerance& tol) {
  const Eigen::Index d = dim_field(j, "dim");
  const Json& effects = field(j, "effects");
  if (!effects.is_array() || effects.empty()) parse_error("'effects' must be a nonempty array");
  std::vector<CMatrix> atoms;
  for (const Json& m : effects) {
    atoms.push_back(matrix_from_json(m));
    require_dim(atoms.back(), d, "effect");
  }
  return DiscreteObservable(std::move(atoms), tol);
}

Json instrument_to_json(const Instrument& instr) {
  Json outcomes = Json::array();
  for (const auto& ops : instr.all_kraus()) {
    Json kraus = Json::array();
    for (const CMatrix& k : ops) kraus.push_back(matrix_to_json(k));
    outcomes.push_back({{"kraus", std::move(kraus)}});
  }
  return {{"dim", instr.dim()}, {"outcomes", std::move(outcomes)}};
}

Instrument instrument_from_json(const Json& j, const Tolerance& tol) {
  const Eigen::Index d = dim_field(j, "dim");
  const Json& outcomes = field(j, "outcomes");
  if (!outcomes.is_array() || outcomes.empty()) parse_error("'outcomes' must be a nonempty array");
  std::vector<std::vector<CMatrix>> kraus;
  for (const Json& o : outcomes) {
    const Json& ops = field(o, "kraus");
    if (!ops.is_array()) parse_error("'kraus' must be an array");
    std::vector<CMatrix> list;
    for (const Json& m : ops) {
      list.push_back(matrix_from_json(m));
      require_dim(list.back(), d, "Kraus operator");
    }
    kraus.push_back(std::move(list));
  }
  return Instrument(std::move(kraus), tol);
}

Json scheme_to_json(const MeasurementScheme& m) {
  Json kraus = Json::array();
  for (const CMatrix& k : m.coupling_kraus()) kraus.push_back(matrix_to_json(k));
  return {{"dim_system", m.dim_system()},
          {"dim_apparatus", m.dim_apparatus()},
          {"W", matrix_to_json(m.apparatus_state())},
          {"pointer", observable_to_json(m.pointer())},
          {"V_kraus", std::move(kraus)}};
}

MeasurementScheme scheme_from_json(const Json& j, const Tolerance& tol) {
  const Eigen::Index dh = dim_field(j, "dim_system");
  const Eigen::Index dk = dim_field(j, "dim_apparatus");
  CMatrix w = matrix_from_json(field(j, "W"));
  require_dim(w, dk, "W");
  DiscreteObservable pointer = observable_from_json(field(j, "pointer"), tol);
  const Json& ops = field(j, "V_kraus");
  if (!ops.is_array() || ops.empty()) parse_error("'V_kraus' must be a nonempty array");
  std::vector<CMatrix> kraus;
  for (const Json& m : ops) {
    kraus.push_back(matrix_from_json(m));
    require_dim(kraus.back(), dh * dk, "coupling Kraus operator");
  }
  return MeasurementScheme(dh, std::move(w), std::move(pointer), std::move(kraus), tol);
}

Json subset_to_json(const OutcomeSet& s) {
  Json out = Json::array();
  for (std::size_t i : s) out.push_back(i + 1);
  return out;
}

Json outcome_map_to_json(const OutcomeMap& f) {
  Json out = Json::array();
  for (std::size_t v : f.table()) out.push_back(v + 1);
  return out;
}

OutcomeMap outcome_map_from_json(const Json& j, std::size_t target_outcomes) {
  if (!j.is_array() || j.empty()) parse_error("outcome map must be a nonempty array");
  std::vector<std::size_t> table;
  for (const Json& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 1) parse_error("outcome labels are 1-based integers");
    table.push_back(static_cast<std::size_t>(v.get<long long>() - 1));
  }
  return OutcomeMap(target_outcomes, std::move(table));
}

Json biobservable_to_json(const Biobservable& b) {
  Json grid = Json::array();
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < b.cols(); ++k) row.push_back(matrix_to_json(b.cell(i, k)));
    grid.push_back(std::move(row));
  }
  return {{"dim", b.dim()}, {"n1", b.rows()}, {"n2", b.cols()}, {"grid", std::move(grid)}};
}

Biobservable biobservable_from_json(const Json& j, const Tolerance& tol) {
  const Eigen::Index d = dim_field(j, "dim");
  const auto n1 = static_cast<std::size_t>(dim_field(j, "n1"));
  const auto n2 = static_cast<std::size_t>(dim_field(j, "n2"));
  const Json& grid = field(j, "grid");
  if (!grid.is_array() || grid.size() != n1) parse_error("'grid' must have n1 rows");
  std::vector<CMatrix> cells;
  for (const Json& row : grid) {
    if (!row.is_array() || row.size() != n2) parse_error("grid rows must have n2 cells");
    for (const Json& m : row) {
      cells.push_back(matrix_from_json(m));
      require_dim(cells.back(), d, "grid cell");
    }
  }
  return Biobservable(n1, n2, std::move(cells), tol);
}

Json certificate_to_json(const FunctionalCoexistenceCertificate& c) {
  return {{"mother", observable_to_json(c.mother())},
          {"map1", outcome_map_to_json(c.map1())},
          {"map2", outcome_map_to_json(c.map2())},
          {"target1", observable_to_json(c.target1())},
          {"target2", observable_to_json(c.target2())}};
}

FunctionalCoexistenceCertificate certificate_from_json(const Json& j, const Tolerance& tol) {
  DiscreteObservable target1 = observable_from_json(field(j, "target1"), tol);
  DiscreteObservable target2 = observable_from_json(field(j, "target2"), tol);
  OutcomeMap map1 = outcome_map_from_json(field(j, "map1"), target1.outcomes());
  OutcomeMap map2 = outcome_map_from_json(field(j, "map2"), target2.outcomes());
  return FunctionalCoexistenceCertificate(
      observable_from_json(field(j, "mother"), tol), std::move(map1), std::move(map2),
      std::move(target1), std::move(target2), tol);
}

Json subspace_to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Eigen::Index k = 0; k < s.dim(); ++k) basis.push_back(vector_to_json(s.basis.col(k)));
  return {{"dim_ambient", s.ambient_dim}, {"dim", s.dim()}, {"basis", std::move(basis)}};
}

Json commutation_to_json(const CommutationCheck& c) {
  return {{"commute", c.commute},
          {"worst_pair", Json::array({c.worst_first + 1, c.worst_second + 1})},
          {"worst_norm", c.worst_norm}};
}

Json separation_to_json(const SeparationCertificate& s) {
  Json alpha = Json::array();
  Json beta = Json::array();
  for (const CMatrix& a : s.alpha) alpha.push_back(matrix_to_json(a));
  for (const CMatrix& b : s.beta) beta.push_back(matrix_to_json(b));
  return {{"alpha", std::move(alpha)},
          {"beta", std::move(beta)},
          {"value", s.value},
          {"min_cell_eigenvalue", s.min_cell_eigenvalue}};
}

}  // namespace coexist
