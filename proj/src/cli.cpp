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

#include "coexist/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

namespace coexist {

namespace {

template <typename T>
const T& lookup(const std::map<std::string, T>& table, const std::string& name, const char* kind) {
  auto it = table.find(name);
  if (it == table.end()) {
    throw CoexistError(ErrorKind::UnknownName, std::string("no ") + kind + " named '" + name + "'");
  }
  return it->second;
}

[[noreturn]] void invalid(const std::string& name, const CoexistError& err) {
  throw CoexistError(ErrorKind::ValidationError, name + ": " + err.message());
}

Tolerance tolerance_from_json(const Json& j, Tolerance tol) {
  if (!j.is_object()) throw CoexistError(ErrorKind::ParseError, "'tolerances' must be an object");
  const std::pair<const char*, double*> keys[] = {
      {"eps_herm", &tol.herm}, {"eps_psd", &tol.psd}, {"eps_eq", &tol.eq}, {"eps_prob", &tol.prob}};
  for (const auto& [key, slot] : keys) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_number()) {
      throw CoexistError(ErrorKind::ParseError, std::string("tolerance '") + key + "' must be a number");
    }
    *slot = j.at(key).get<double>();
  }
  return tol;
}

const Json& section(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  const Json& s = j.at(key);
  if (!s.is_object()) throw CoexistError(ErrorKind::ParseError, std::string("'") + key + "' must be an object");
  return s;
}

// Parses one named object; schema errors stay ParseError, invariant failures
// become ValidationError carrying the object name.
template <typename F>
auto load_named(const std::string& name, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const CoexistError& e) {
    if (e.kind() == ErrorKind::ParseError) {
      throw CoexistError(ErrorKind::ParseError, name + ": " + e.message());
    }
    invalid(name, e);
  }
}

void require_workspace_dim(const std::string& name, Eigen::Index got, Eigen::Index want) {
  if (got != want) {
    throw CoexistError(ErrorKind::ValidationError,
                       name + ": dimension " + std::to_string(got) + " differs from workspace dimension " +
                           std::to_string(want));
  }
}

void require_args(const Command& c, std::size_t n, const char* usage) {
  if (c.args.size() != n) {
    throw CoexistError(ErrorKind::ParseError, std::string("usage: ") + usage);
  }
}

std::string subset_text(const OutcomeSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k] + 1);
  return out + "}";
}

Json eigenvalues_json(const CMatrix& a) {
  Json out = Json::array();
  const RVector ev = hermitian_eigenvalues(a);
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev(i));
  return out;
}

VerdictReport make(const Command& c, std::string verdict, int code) {
  VerdictReport r;
  r.command = command_echo(c);
  r.verdict = std::move(verdict);
  r.exit_code = code;
  return r;
}

VerdictReport holds_or_fails(const Command& c, bool holds) {
  return make(c, holds ? "HOLDS" : "FAILS", holds ? kExitHolds : kExitFails);
}

Json maps_json(const Refinement& r) {
  Json cells = Json::array();
  for (const auto& [i, j] : r.cells) cells.push_back(Json::array({i + 1, j + 1}));
  return {{"mother", observable_to_json(r.mother.observable())},
          {"map1", outcome_map_to_json(r.f1)},
          {"map2", outcome_map_to_json(r.f2)},
          {"cells", std::move(cells)}};
}

// ---------------------------------------------------------------------------

VerdictReport cmd_validate(const Workspace& ws, const Command& c) {
  require_args(c, 0, "validate");
  VerdictReport r = make(c, "VALID", kExitHolds);
  Json names = Json::object();
  auto keys = [](const auto& table) {
    Json out = Json::array();
    for (const auto& kv : table) out.push_back(kv.first);
    return out;
  };
  names["observables"] = keys(ws.observables);
  names["instruments"] = keys(ws.instruments);
  names["schemes"] = keys(ws.schemes);
  names["vectors"] = keys(ws.vectors);
  r.certificates["objects"] = std::move(names);
  r.certificates["dim"] = ws.dim;
  r.summary.push_back("dimension " + std::to_string(ws.dim) + ": " + std::to_string(ws.observables.size()) +
                      " observables, " + std::to_string(ws.instruments.size()) + " instruments, " +
                      std::to_string(ws.schemes.size()) + " schemes");
  return r;
}

VerdictReport cmd_check_effect(const Workspace& ws, const Command& c) {
  if (c.args.empty() || c.args.size() > 2) throw CoexistError(ErrorKind::ParseError, "usage: check-effect OBS [X]");
  const DiscreteObservable& e = ws.observable(c.args[0]);
  std::vector<OutcomeSet> subsets;
  if (c.args.size() == 2) {
    subsets.push_back(parse_subset(c.args[1], e.outcomes()));
  } else {
    for (std::size_t i = 0; i < e.outcomes(); ++i) subsets.push_back({i});
  }
  bool all = true;
  Json checks = Json::array();
  std::vector<std::string> lines;
  for (const OutcomeSet& x : subsets) {
    const CMatrix a = effect_of_set(e, x);
    const bool effect = is_effect(a, ws.tol);
    const bool projection = is_projection(a, ws.tol);
    all = all && effect;
    checks.push_back({{"subset", subset_to_json(x)},
                      {"effect", effect},
                      {"projection", projection},
                      {"eigenvalues", eigenvalues_json(a)}});
    lines.push_back("E" + subset_text(x) + (effect ? " is an effect" : " is not an effect") +
                    (projection ? ", projection" : ""));
  }
  VerdictReport r = holds_or_fails(c, all);
  r.summary = std::move(lines);
  r.certificates["checks"] = std::move(checks);
  return r;
}

VerdictReport cmd_check_regular(const Workspace& ws, const Command& c) {
  require_args(c, 1, "check-regular OBS");
  const DiscreteObservable& e = ws.observable(c.args[0]);
  const RegularityResult res = is_regular(e, ws.tol);
  VerdictReport r = holds_or_fails(c, res.regular);
  if (res.witness) {
    const CMatrix a = effect_of_set(e, *res.witness);
    const RVector ev = hermitian_eigenvalues(a);
    const bool below = ev.maxCoeff() <= 0.5 + ws.tol.psd;
    r.certificates["witness"] = {{"subset", subset_to_json(*res.witness)},
                                 {"effect", matrix_to_json(a)},
                                 {"relation", below ? "below_half" : "above_half"}};
    r.residuals["eigenvalue_min"] = ev.minCoeff();
    r.residuals["eigenvalue_max"] = ev.maxCoeff();
    r.summary.push_back("not regular: E" + subset_text(*res.witness) + (below ? " <= I/2" : " >= I/2"));
  } else {
    r.summary.push_back("regular");
  }
  return r;
}

VerdictReport cmd_range_boolean(const Workspace& ws, const Command& c) {
  require_args(c, 1, "range-boolean OBS");
  const BooleanRangeReport b = range_is_boolean(ws.observable(c.args[0]), ws.tol);
  VerdictReport r = holds_or_fails(c, b.boolean);
  r.certificates["boolean"] = b.boolean;
  r.certificates["regular"] = b.regular;
  r.certificates["anomaly"] = b.anomaly;
  r.certificates["lattice_size"] = b.lattice_size;
  if (!b.failure.empty()) r.certificates["failure"] = b.failure;
  r.summary.push_back(std::string(b.boolean ? "range is Boolean" : "range is not Boolean") + " (" +
                      std::to_string(b.lattice_size) + " elements)");
  if (!b.failure.empty()) r.summary.push_back(b.failure);
  if (b.anomaly) r.summary.push_back("anomaly: regularity verdict disagrees");
  return r;
}

VerdictReport cmd_commute(const Workspace& ws, const Command& c) {
  require_args(c, 2, "commute E1 E2");
  const DiscreteObservable& e1 = ws.observable(c.args[0]);
  const DiscreteObservable& e2 = ws.observable(c.args[1]);
  const CommutationCheck chk = check_mutual_commutation(e1, e2, ws.tol);
  VerdictReport r = holds_or_fails(c, chk.commute);
  r.certificates["commutation"] = commutation_to_json(chk);
  r.residuals["commutator_norm"] = chk.worst_norm;
  if (chk.commute) {
    r.certificates["joint"] = biobservable_to_json(joint_from_commuting(e1, e2, ws.tol).grid());
    r.summary.push_back("all atoms commute; product joint attached");
  } else {
    r.summary.push_back("[E1_" + std::to_string(chk.worst_first + 1) + ", E2_" +
                        std::to_string(chk.worst_second + 1) + "] has norm " + format_real(chk.worst_norm));
  }
  return r;
}

VerdictReport cmd_coexist(const Workspace& ws, const Command& c) {
  require_args(c, 2, "coexist E1 E2 [--witness NAME] [--seed N] [--max-iters N]");
  const DiscreteObservable& e1 = ws.observable(c.args[0]);
  const DiscreteObservable& e2 = ws.observable(c.args[1]);
  std::optional<DiscreteObservable> witness;
  if (c.witness) witness = ws.observable(*c.witness);
  FeasibilityOptions opts;
  opts.seed = c.seed;
  opts.max_iters = c.max_iters;
  const CoexistenceReport rep = coexistence_report(e1, e2, witness, opts, ws.tol);

  int code = kExitIndeterminate;
  switch (rep.verdict) {
    case Verdict::CoexistentFunctional:
    case Verdict::WitnessOnly:
      code = kExitHolds;
      break;
    case Verdict::Infeasible:
      code = kExitFails;
      break;
    case Verdict::Indeterminate:
      code = kExitIndeterminate;
      break;
  }
  VerdictReport r = make(c, std::string(verdict_code(rep.verdict)), code);
  r.certificates["method"] = rep.method;
  r.certificates["reason"] = rep.reason;
  r.certificates["commutation"] = commutation_to_json(rep.commutation);
  r.certificates["pvm"] = Json::array({rep.first_pvm, rep.second_pvm});
  if (rep.certificate) {
    r.certificates["certificate"] = certificate_to_json(*rep.certificate);
    r.certificates["certificate_eps_eq"] = rep.certificate_tolerance.eq;
  }
  if (rep.joint) r.certificates["joint"] = biobservable_to_json(rep.joint->grid());
  if (rep.witness) {
    Json emb = Json::array();
    for (const Embedding& m : rep.witness->embeddings) {
      emb.push_back({{"target", m.target},
                     {"target_subset", subset_to_json(m.target_subset)},
                     {"witness_subset", subset_to_json(m.witness_subset)}});
    }
    r.certificates["witness"] = {{"observable", observable_to_json(rep.witness->witness)},
                                 {"embeddings", std::move(emb)}};
  }
  if (rep.search) {
    r.residuals["marginal_residual"] = rep.search->residual;
    r.residuals["iterations"] = rep.search->iterations;
    r.residuals["seed"] = rep.search->seed;
    if (rep.search->separation) {
      r.certificates["separation"] = separation_to_json(*rep.search->separation);
    }
  }
  if (rep.certificate) {
    r.residuals["pushforward_deviation"] =
        std::max(observable_distance(pushforward(rep.certificate->mother(), rep.certificate->map1(), ws.tol), e1),
                 observable_distance(pushforward(rep.certificate->mother(), rep.certificate->map2(), ws.tol), e2));
  }
  r.summary.push_back(std::string(verdict_code(rep.verdict)) + " via " + rep.method);
  if (!rep.reason.empty()) r.summary.push_back(rep.reason);
  return r;
}

VerdictReport cmd_two_valued_joint(const Workspace& ws, const Command& c) {
  require_args(c, 3, "two-valued-joint WITNESS X Y");
  const DiscreteObservable& w = ws.observable(c.args[0]);
  const OutcomeSet x = parse_subset(c.args[1], w.outcomes());
  const OutcomeSet y = parse_subset(c.args[2], w.outcomes());
  const FunctionalCoexistenceCertificate cert = two_valued_joint(w, x, y, ws.tol);
  VerdictReport r = make(c, std::string(verdict_code(Verdict::CoexistentFunctional)), kExitHolds);
  r.certificates["certificate"] = certificate_to_json(cert);
  r.certificates["joint"] = biobservable_to_json(functional_to_biobservable(cert, ws.tol));
  r.residuals["pushforward_deviation"] =
      std::max(observable_distance(pushforward(cert.mother(), cert.map1(), ws.tol), cert.target1()),
               observable_distance(pushforward(cert.mother(), cert.map2(), ws.tol), cert.target2()));
  r.summary.push_back("joint for {E" + subset_text(x) + ", I-E" + subset_text(x) + "} and {E" + subset_text(y) +
                      ", I-E" + subset_text(y) + "}");
  return r;
}

VerdictReport cmd_commensurable(const Workspace& ws, const Command& c) {
  require_args(c, 2, "commensurable E1 E2");
  const PvmObservable p1(ws.observable(c.args[0]), ws.tol);
  const PvmObservable p2(ws.observable(c.args[1]), ws.tol);
  const CommutationCheck chk = check_mutual_commutation(p1.observable(), p2.observable(), ws.tol);
  VerdictReport r = holds_or_fails(c, chk.commute);
  r.certificates["commutation"] = commutation_to_json(chk);
  r.residuals["commutator_norm"] = chk.worst_norm;
  if (chk.commute) {
    r.certificates["joint"] = biobservable_to_json(commensurable_joint(p1, p2, ws.tol).grid());
    r.certificates["refinement"] = maps_json(von_neumann_refinement(p1, p2, ws.tol));
    r.summary.push_back("commensurable: common refinement attached");
  } else {
    r.summary.push_back("not commensurable: commutator norm " + format_real(chk.worst_norm));
  }
  return r;
}

VerdictReport cmd_six_way(const Workspace& ws, const Command& c) {
  require_args(c, 2, "six-way E1 E2");
  const SixWayReport s = six_way_equivalence_check(ws.observable(c.args[0]), ws.observable(c.args[1]), ws.tol);
  VerdictReport r = s.all() ? make(c, "HOLDS", kExitHolds)
                            : s.none() ? make(c, "FAILS", kExitFails)
                                       : make(c, "INDETERMINATE", kExitIndeterminate);
  Json conditions = Json::object();
  for (std::size_t k = 0; k < s.holds.size(); ++k) {
    const auto name = std::string(six_way_name(static_cast<SixWayCondition>(k)));
    conditions[name] = s.holds[k];
    r.summary.push_back(name + ": " + (s.holds[k] ? "yes" : "no"));
  }
  r.certificates["conditions"] = std::move(conditions);
  r.certificates["commutation"] = commutation_to_json(s.commutation);
  r.residuals["commutator_norm"] = s.commutation.worst_norm;
  if (s.commensurability_mother) {
    r.certificates["mother"] = observable_to_json(s.commensurability_mother->observable());
  }
  if (s.certificate) r.certificates["certificate"] = certificate_to_json(*s.certificate);
  if (s.biobservable) r.certificates["biobservable"] = biobservable_to_json(*s.biobservable);
  if (s.joint) r.certificates["joint"] = biobservable_to_json(s.joint->grid());
  return r;
}

VerdictReport cmd_refine(const Workspace& ws, const Command& c) {
  require_args(c, 2, "refine E1 E2");
  const PvmObservable p1(ws.observable(c.args[0]), ws.tol);
  const PvmObservable p2(ws.observable(c.args[1]), ws.tol);
  const CommutationCheck chk = check_mutual_commutation(p1.observable(), p2.observable(), ws.tol);
  VerdictReport r = holds_or_fails(c, chk.commute);
  r.certificates["commutation"] = commutation_to_json(chk);
  if (chk.commute) {
    const Refinement ref = von_neumann_refinement(p1, p2, ws.tol);
    r.certificates["refinement"] = maps_json(ref);
    r.residuals["pushforward_deviation"] =
        std::max(observable_distance(pushforward(ref.mother.observable(), ref.f1, ws.tol), p1.observable()),
                 observable_distance(pushforward(ref.mother.observable(), ref.f2, ws.tol), p2.observable()));
    r.summary.push_back("refinement with " + std::to_string(ref.mother.outcomes()) + " outcomes");
  } else {
    r.summary.push_back("no common refinement: commutator norm " + format_real(chk.worst_norm));
  }
  return r;
}

VerdictReport cmd_comdomain(const Workspace& ws, const Command& c) {
  require_args(c, 2, "comdomain E1 E2");
  const CommutativityDomainResult d =
      commutativity_domain(ws.observable(c.args[0]), ws.observable(c.args[1]), ws.tol);
  VerdictReport r = make(c, "HOLDS", kExitHolds);
  r.certificates["subspace"] = subspace_to_json(d.subspace);
  r.certificates["pvm_inputs"] = d.pvm_inputs;
  if (d.pvm_inputs) r.residuals["invariance_residual"] = d.invariance_residual;
  if (d.reduced1) r.certificates["reduced1"] = observable_to_json(*d.reduced1);
  if (d.reduced2) r.certificates["reduced2"] = observable_to_json(*d.reduced2);
  r.summary.push_back("commutativity domain has dimension " + std::to_string(d.subspace.dim()));
  return r;
}

VerdictReport cmd_joint_dist(const Workspace& ws, const Command& c) {
  require_args(c, 3, "joint-dist E1 E2 PHI");
  const PvmObservable p1(ws.observable(c.args[0]), ws.tol);
  const PvmObservable p2(ws.observable(c.args[1]), ws.tol);
  const CVector& phi = ws.vector(c.args[2]);
  try {
    const JointDistribution jd = joint_distribution_on_domain(p1, p2, phi, ws.tol);
    VerdictReport r = make(c, "HOLDS", kExitHolds);
    r.certificates["probabilities"] = real_matrix_to_json(jd.probabilities);
    r.certificates["meet_probabilities"] = real_matrix_to_json(jd.meet_probabilities);
    r.residuals["meet_deviation"] = jd.meet_deviation;
    r.residuals["membership_residual"] = jd.membership_residual;
    r.residuals["total"] = jd.probabilities.sum();
    r.summary.push_back("joint distribution total " + format_real(jd.probabilities.sum()));
    return r;
  } catch (const CoexistError& e) {
    if (e.kind() != ErrorKind::NotInDomain) throw;
    VerdictReport r = make(c, "FAILS", kExitFails);
    r.certificates["reason"] = e.message();
    r.summary.push_back(e.message());
    return r;
  }
}

Json sequential_json(const SequentialBiobservable& s) {
  return {{"grid", biobservable_to_json(s.grid)},
          {"marginal_row", observable_to_json(s.marginal_row)},
          {"marginal_col", observable_to_json(s.marginal_col)}};
}

VerdictReport order_report(const Command& c, const OrderIndependenceReport& o) {
  VerdictReport r = o.equal ? make(c, "ORDER_INDEPENDENT", kExitHolds) : make(c, "ORDER_DEPENDENT", kExitFails);
  r.residuals["order_deviation"] = o.max_deviation;
  r.certificates["b_then_a"] = biobservable_to_json(o.b_then_a);
  r.certificates["a_then_b"] = biobservable_to_json(o.a_then_b);
  if (o.certificate) r.certificates["certificate"] = certificate_to_json(*o.certificate);
  r.summary.push_back("order deviation " + format_real(o.max_deviation));
  return r;
}

VerdictReport cmd_sequential(const Workspace& ws, const Command& c) {
  require_args(c, 2, "sequential I1 I2 [--compare-orders]");
  const Instrument& a = ws.instrument(c.args[0]);
  const Instrument& b = ws.instrument(c.args[1]);
  const SequentialBiobservable s = sequential_biobservable(a, b, ws.tol);
  VerdictReport r = make(c, "HOLDS", kExitHolds);
  if (c.compare_orders) r = order_report(c, order_independence(a, b, ws.tol));
  r.certificates["sequential"] = sequential_json(s);
  r.summary.push_back("grid: " + c.args[1] + " operation applied first, then " + c.args[0] + " measured");
  return r;
}

VerdictReport cmd_scheme_measure(const Workspace& ws, const Command& c) {
  require_args(c, 1, "scheme-measure M");
  const MeasurementScheme& m = ws.scheme(c.args[0]);
  const DiscreteObservable e = measured_observable(m, ws.tol);
  VerdictReport r = make(c, "HOLDS", kExitHolds);
  r.certificates["observable"] = observable_to_json(e);
  r.certificates["pvm"] = e.is_pvm(ws.tol);
  if (m.pointer().is_pvm(ws.tol)) {
    const Instrument instr = scheme_instrument(m, ws.tol);
    r.certificates["instrument"] = instrument_to_json(instr);
    r.residuals["associate_deviation"] = observable_distance(associate_observable(instr, ws.tol), e);
  }
  r.summary.push_back("measured observable with " + std::to_string(e.outcomes()) + " outcomes");
  return r;
}

VerdictReport cmd_scheme_build(const Workspace& ws, const Command& c) {
  require_args(c, 1, "scheme-build E");
  const DiscreteObservable& e = ws.observable(c.args[0]);
  const MeasurementScheme m = scheme_for_observable(e, ws.tol);
  const double dev = observable_distance(measured_observable(m, ws.tol), e);
  VerdictReport r = holds_or_fails(c, dev <= ws.tol.eq);
  r.certificates["scheme"] = scheme_to_json(m);
  r.residuals["roundtrip_deviation"] = dev;
  r.summary.push_back("scheme on apparatus of dimension " + std::to_string(m.dim_apparatus()));
  return r;
}

VerdictReport cmd_schemes_commute(const Workspace& ws, const Command& c) {
  require_args(c, 2, "schemes-commute M1 M2");
  const SchemesCommutativeReport s = schemes_commutative(ws.scheme(c.args[0]), ws.scheme(c.args[1]), ws.tol);
  VerdictReport r = order_report(c, s.order);
  r.certificates["measured1"] = observable_to_json(s.measured1);
  r.certificates["measured2"] = observable_to_json(s.measured2);
  if (!s.note.empty()) r.summary.push_back(s.note);
  return r;
}

using Handler = std::function<VerdictReport(const Workspace&, const Command&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"validate", cmd_validate},
      {"check-effect", cmd_check_effect},
      {"check-regular", cmd_check_regular},
      {"range-boolean", cmd_range_boolean},
      {"commute", cmd_commute},
      {"coexist", cmd_coexist},
      {"two-valued-joint", cmd_two_valued_joint},
      {"commensurable", cmd_commensurable},
      {"six-way", cmd_six_way},
      {"refine", cmd_refine},
      {"comdomain", cmd_comdomain},
      {"joint-dist", cmd_joint_dist},
      {"sequential", cmd_sequential},
      {"scheme-measure", cmd_scheme_measure},
      {"scheme-build", cmd_scheme_build},
      {"schemes-commute", cmd_schemes_commute},
  };
  return table;
}

}  // namespace

const DiscreteObservable& Workspace::observable(const std::string& name) const {
  return lookup(observables, name, "observable");
}
const Instrument& Workspace::instrument(const std::string& name) const {
  return lookup(instruments, name, "instrument");
}
const MeasurementScheme& Workspace::scheme(const std::string& name) const {
  return lookup(schemes, name, "scheme");
}
const CVector& Workspace::vector(const std::string& name) const { return lookup(vectors, name, "vector"); }

Workspace parse_workspace(const Json& j, const ToleranceOverrides& overrides) {
  if (!j.is_object()) throw CoexistError(ErrorKind::ParseError, "workspace must be a JSON object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long long>() <= 0) {
    throw CoexistError(ErrorKind::ParseError, "workspace 'dim' must be a positive integer");
  }
  Workspace ws;
  ws.dim = static_cast<Eigen::Index>(j.at("dim").get<long long>());
  if (j.contains("tolerances")) ws.tol = tolerance_from_json(j.at("tolerances"), ws.tol);
  if (overrides.eq) ws.tol.eq = *overrides.eq;
  if (overrides.psd) ws.tol.psd = *overrides.psd;
  ws.tol.validate();

  for (const auto& [name, v] : section(j, "observables").items()) {
    auto e = load_named(name, [&] { return observable_from_json(v, ws.tol); });
    require_workspace_dim(name, e.dim(), ws.dim);
    ws.observables.emplace(name, std::move(e));
  }
  for (const auto& [name, v] : section(j, "instruments").items()) {
    auto instr = load_named(name, [&] { return instrument_from_json(v, ws.tol); });
    require_workspace_dim(name, instr.dim(), ws.dim);
    ws.instruments.emplace(name, std::move(instr));
  }
  for (const auto& [name, v] : section(j, "schemes").items()) {
    auto m = load_named(name, [&] { return scheme_from_json(v, ws.tol); });
    require_workspace_dim(name, m.dim_system(), ws.dim);
    ws.schemes.emplace(name, std::move(m));
  }
  for (const auto& [name, v] : section(j, "vectors").items()) {
    CVector phi = load_named(name, [&] { return vector_from_json(v); });
    require_workspace_dim(name, phi.size(), ws.dim);
    ws.vectors.emplace(name, std::move(phi));
  }
  return ws;
}

Workspace load_workspace(const std::filesystem::path& path, const ToleranceOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw CoexistError(ErrorKind::ParseError, "cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw CoexistError(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return parse_workspace(j, overrides);
}

std::string command_echo(const Command& c) {
  std::string out = c.name;
  for (const std::string& a : c.args) out += " " + a;
  if (c.name == "coexist") {
    if (c.witness) out += " --witness " + *c.witness;
    out += " --seed " + std::to_string(c.seed) + " --max-iters " + std::to_string(c.max_iters);
  }
  if (c.compare_orders) out += " --compare-orders";
  return out;
}

VerdictReport run_command(const Workspace& ws, const Command& command) {
  const auto& table = handlers();
  auto it = table.find(command.name);
  if (it == table.end()) {
    throw CoexistError(ErrorKind::UnknownCommand, "unknown command '" + command.name + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  VerdictReport r = it->second(ws, command);
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

VerdictReport error_report(const std::string& command, const CoexistError& err) {
  VerdictReport r;
  r.command = command;
  r.verdict = "INPUT_ERROR";
  r.exit_code = kExitInputError;
  r.certificates["error"] = {{"kind", std::string(error_kind_name(err.kind()))}, {"message", err.message()}};
  r.summary.push_back(err.what());
  return r;
}

std::string render_json(const VerdictReport& r) {
  Json j = {{"command", r.command},
            {"verdict", r.verdict},
            {"exit_code", r.exit_code},
            {"certificates", r.certificates},
            {"residuals", r.residuals},
            {"summary", r.summary},
            {"timing_ms", r.timing_ms}};
  return j.dump(2) + "\n";
}

std::string render_text(const VerdictReport& r) {
  std::ostringstream os;
  os << r.command << "\n";
  os << "verdict: " << r.verdict << " (exit " << r.exit_code << ")\n";
  for (const std::string& s : r.summary) os << "  " << s << "\n";
  for (const auto& [key, value] : r.residuals.items()) os << "  " << key << " = " << value.dump() << "\n";
  return os.str();
}

OutcomeSet parse_subset(const std::string& text, std::size_t outcomes) {
  OutcomeSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw CoexistError(ErrorKind::ParseError, "bad outcome index '" + item + "'");
    }
    if (pos != item.size()) throw CoexistError(ErrorKind::ParseError, "bad outcome index '" + item + "'");
    if (v < 1 || static_cast<std::size_t>(v) > outcomes) {
      throw CoexistError(ErrorKind::IndexOutOfRange,
                         "outcome " + item + " outside 1.." + std::to_string(outcomes));
    }
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& kv : handlers()) out.push_back(kv.first);
    return out;
  }();
  return names;
}

}  // namespace coexist
