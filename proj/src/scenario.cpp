// Copyright 2026 The agreelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agreelab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <utility>

#include "agreelab/errors.hpp"
#include "json.hpp"

namespace agree {

using nlohmann::json;

std::string BackendName(Backend b) {
  switch (b) {
    case Backend::kTable: return "table";
    case Backend::kClassical: return "classical";
    case Backend::kQuantum: return "quantum";
    case Backend::kProcess: return "process";
  }
  return "?";
}

Backend ParseBackend(const std::string& s) {
  if (s == "table") return Backend::kTable;
  if (s == "classical") return Backend::kClassical;
  if (s == "quantum") return Backend::kQuantum;
  if (s == "process") return Backend::kProcess;
  throw Error(ErrorCode::kParseError, "unknown backend \"" + s + "\"");
}

namespace {

[[noreturn]] void Fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kParseError,
              "at " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

// Runs `f`, turning backend errors into a ValidationError located at `path`.
template <class F>
auto Validated(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError ||
        e.code() == ErrorCode::kValidationError) {
      throw;
    }
    throw Error(ErrorCode::kValidationError,
                "at " + path + ": " + std::string(e.what()));
  }
}

const json& Field(const json& obj, const std::string& key,
                  const std::string& path) {
  if (!obj.is_object()) Fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(path, "missing field \"" + key + "\"");
  return *it;
}

const json* OptionalField(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::size_t ParseSize(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) Fail(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double ParseReal(const json& v, const std::string& path) {
  if (!v.is_number()) Fail(path, "expected a number");
  return v.get<double>();
}

std::vector<std::size_t> ParseIndexList(const json& v,
                                        const std::string& path) {
  if (!v.is_array()) Fail(path, "expected a list of indices");
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    out.push_back(ParseSize(v[n], path + "/" + std::to_string(n)));
  }
  return out;
}

Complex ParseComplex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  Fail(path, "expected a complex number [re, im]");
}

ComplexMatrix ParseMatrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) Fail(path, "expected a list of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array() || v[0].empty()) Fail(path + "/0", "expected a row");
  const std::size_t cols = v[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!v[r].is_array() || v[r].size() != cols) {
      Fail(rp, "rows must all have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          ParseComplex(v[r][c], rp + "/" + std::to_string(c));
    }
  }
  return m;
}

ComplexVector ParseVector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) Fail(path, "expected a list of amplitudes");
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t n = 0; n < v.size(); ++n) {
    out(static_cast<Eigen::Index>(n)) =
        ParseComplex(v[n], path + "/" + std::to_string(n));
  }
  return out;
}

// A matrix, {"maximally_mixed": d} or {"pure": [amplitudes]}.
DensityMatrix ParseState(const json& v, const std::string& path) {
  if (v.is_object()) {
    if (const json* d = OptionalField(v, "maximally_mixed")) {
      const std::size_t dim = ParseSize(*d, path + "/maximally_mixed");
      if (dim == 0) Fail(path, "dimension must be positive");
      return DensityMatrix::MaximallyMixed(dim);
    }
    if (const json* psi = OptionalField(v, "pure")) {
      const ComplexVector vec = ParseVector(*psi, path + "/pure");
      if (vec.norm() == 0.0) Fail(path + "/pure", "zero vector");
      return DensityMatrix::Pure(vec);
    }
    Fail(path, "expected a matrix, {\"maximally_mixed\": d} or {\"pure\": v}");
  }
  const ComplexMatrix m = ParseMatrix(v, path);
  return Validated(path, [&] { return DensityMatrix(m); });
}

// A list of branches, each a list of Kraus matrices; or {"basis": matrix}
// (projective, one branch per column); or {"identity": d}.
Instrument ParseInstrument(const json& v, const std::string& path,
                           double tol) {
  Instrument instr = [&] {
    if (v.is_object()) {
      if (const json* b = OptionalField(v, "basis")) {
        const ComplexMatrix basis = ParseMatrix(*b, path + "/basis");
        return Validated(path, [&] { return Instrument::FromBasis(basis); });
      }
      if (const json* d = OptionalField(v, "identity")) {
        const std::size_t dim = ParseSize(*d, path + "/identity");
        if (dim == 0) Fail(path, "dimension must be positive");
        return Instrument::Identity(dim);
      }
      Fail(path, "expected branches, {\"basis\": M} or {\"identity\": d}");
    }
    if (!v.is_array() || v.empty()) Fail(path, "expected a list of branches");
    std::vector<KrausBranch> branches;
    for (std::size_t x = 0; x < v.size(); ++x) {
      const std::string bp = path + "/" + std::to_string(x);
      if (!v[x].is_array() || v[x].empty()) {
        Fail(bp, "expected a list of Kraus matrices");
      }
      KrausBranch b;
      for (std::size_t m = 0; m < v[x].size(); ++m) {
        b.push_back(ParseMatrix(v[x][m], bp + "/" + std::to_string(m)));
      }
      branches.push_back(std::move(b));
    }
    const auto dim_in = static_cast<std::size_t>(branches[0][0].cols());
    const auto dim_out = static_cast<std::size_t>(branches[0][0].rows());
    return Validated(path, [&] {
      return Instrument(dim_in, dim_out, std::move(branches));
    });
  }();
  Validated(path, [&] {
    RequireValid(instr, path, std::max(tol, 1e-9));
    return 0;
  });
  return instr;
}

struct LabInstruments {
  Instrument alice;
  Instrument bob;
  Instrument event;
};

LabInstruments ParseInstruments(const json& v, const std::string& path,
                                double tol) {
  return {ParseInstrument(Field(v, "alice", path), path + "/alice", tol),
          ParseInstrument(Field(v, "bob", path), path + "/bob", tol),
          ParseInstrument(Field(v, "event", path), path + "/event", tol)};
}

Lab ParseLab(const json& v, const std::string& path) {
  if (v == "alice") return Lab::kAlice;
  if (v == "bob") return Lab::kBob;
  if (v == "event") return Lab::kEvent;
  Fail(path, "lab must be \"alice\", \"bob\" or \"event\"");
}

std::vector<Lab> ParseLabOrder(const json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::vector<Lab> out;
    for (char c : s) {
      if (c == 'A') out.push_back(Lab::kAlice);
      else if (c == 'B') out.push_back(Lab::kBob);
      else if (c == 'E') out.push_back(Lab::kEvent);
      else Fail(path, "order letters must be A, B or E");
    }
    return out;
  }
  if (!v.is_array()) Fail(path, "expected an order such as \"ABE\"");
  std::vector<Lab> out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    out.push_back(ParseLab(v[n], path + "/" + std::to_string(n)));
  }
  return out;
}

LabDims ParseLabDims(const json& v, const std::string& path) {
  LabDims dims;
  for (Lab l : {Lab::kAlice, Lab::kBob, Lab::kEvent}) {
    const std::string name = LabName(l);
    const json& d = Field(v, name, path);
    const std::string lp = path + "/" + name;
    if (!d.is_array() || d.size() != 2) Fail(lp, "expected [in, out]");
    dims[l] = LabDim{ParseSize(d[0], lp + "/0"), ParseSize(d[1], lp + "/1")};
    if (dims[l].in == 0 || dims[l].out == 0) Fail(lp, "dimension 0");
  }
  return dims;
}

bool IsExactList(const json& v) {
  return v.is_array() && !v.empty() &&
         std::all_of(v.begin(), v.end(),
                     [](const json& x) { return x.is_string(); });
}

std::vector<Rational> ParseRationalList(const json& v,
                                        const std::string& path) {
  std::vector<Rational> out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const std::string p = path + "/" + std::to_string(n);
    try {
      out.push_back(ParseRational(v[n].get<std::string>()));
    } catch (const Error& e) {
      Fail(p, e.what());
    }
  }
  return out;
}

std::vector<double> ParseRealList(const json& v, const std::string& path) {
  if (!v.is_array()) Fail(path, "expected a list of numbers");
  if (IsExactList(v)) {
    std::vector<double> out;
    for (const Rational& r : ParseRationalList(v, path)) {
      out.push_back(ToDouble(r));
    }
    return out;
  }
  std::vector<double> out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    out.push_back(ParseReal(v[n], path + "/" + std::to_string(n)));
  }
  return out;
}

void ParseTable(const json& v, Scenario& s) {
  const std::string path = "/table";
  const std::vector<std::size_t> dims = ParseIndexList(Field(v, "dims", path),
                                                       path + "/dims");
  if (dims.size() != 3) Fail(path + "/dims", "expected three axis sizes");
  const std::vector<double> p = ParseRealList(Field(v, "p", path), path + "/p");
  s.table = Validated(path, [&] {
    return validate_joint(p, OutcomeSpace(dims[0], dims[1], dims[2]),
                          s.tolerance);
  });
  s.event = Validated("/event", [&] {
    return Event(dims[2], s.event.members());
  });
}

void ParseClassical(const json& v, Scenario& s) {
  const std::string path = "/classical";
  const json& prior = Field(v, "prior", path);
  if (!prior.is_array() || prior.empty()) {
    Fail(path + "/prior", "expected a nonempty list");
  }
  if (const json* n = OptionalField(v, "states")) {
    if (ParseSize(*n, path + "/states") != prior.size()) {
      Fail(path + "/states", "does not match the prior length");
    }
  }
  auto partition = [&](const char* key) {
    const std::string p = path + "/" + key;
    const auto cells = ParseIndexList(Field(v, key, path), p);
    return Validated(p, [&] { return Partition(cells); });
  };
  Partition alice = partition("alice");
  Partition bob = partition("bob");
  Partition meas = partition("measurement");
  const OutcomeSet cells = s.event.members();
  if (IsExactList(prior)) {
    std::vector<Rational> w = ParseRationalList(prior, path + "/prior");
    s.exact_classical = Validated(path, [&] {
      return ExactClassicalModel(w, alice, bob, meas, cells);
    });
  }
  std::vector<double> w = ParseRealList(prior, path + "/prior");
  s.classical = Validated(path, [&] {
    return ClassicalModel(w, alice, bob, meas, cells, s.tolerance);
  });
  s.event = Event(meas.num_cells(), cells);
}

void ParseQuantum(const json& v, Scenario& s, bool event_given) {
  const std::string path = "/quantum";
  if (const json* ex = OptionalField(v, "example")) {
    const std::string ep = path + "/example";
    BlockRotationParams params;
    params.theta = ParseReal(Field(*ex, "theta", ep), ep + "/theta");
    params.phi = ParseReal(Field(*ex, "phi", ep), ep + "/phi");
    params.q = ParseReal(Field(*ex, "q", ep), ep + "/q");
    params.r = ParseReal(Field(*ex, "r", ep), ep + "/r");
    const json* st = OptionalField(v, "state");
    const DensityMatrix rho = st ? ParseState(*st, path + "/state")
                                 : DensityMatrix::MaximallyMixed(4);
    s.quantum = Validated(ep, [&] { return block_rotation_example(params, rho); });
    s.block_rotation = params;
    if (event_given) {
      s.quantum = Validated("/event", [&] {
        return QuantumScenario(s.quantum->state(), s.quantum->alice(),
                               s.quantum->bob(), s.quantum->event_instrument(),
                               s.quantum->order(), Event(2, s.event.members()));
      });
    }
    s.event = s.quantum->event();
    return;
  }
  const DensityMatrix rho = ParseState(Field(v, "state", path), path + "/state");
  LabInstruments in = ParseInstruments(Field(v, "instruments", path),
                                       path + "/instruments", s.tolerance);
  Order order = Order::kAliceBobEvent;
  if (const json* o = OptionalField(v, "order")) {
    if (!o->is_string()) Fail(path + "/order", "expected \"ABE\" or \"AEB\"");
    try {
      order = ParseOrder(o->get<std::string>());
    } catch (const Error& e) {
      Fail(path + "/order", e.what());
    }
  }
  const Event ev = Validated("/event", [&] {
    return Event(in.event.num_outcomes(), s.event.members());
  });
  s.quantum = Validated(path, [&] {
    return QuantumScenario(rho, in.alice, in.bob, in.event, order, ev);
  });
  s.event = ev;
}

ProcessMatrix ParseEmbedding(const json& v, const std::string& path,
                             const LabDims& dims) {
  const DensityMatrix rho = ParseState(Field(v, "state", path), path + "/state");
  const std::vector<Lab> order =
      ParseLabOrder(Field(v, "order", path), path + "/order");
  return Validated(path, [&] { return embed_definite_order(rho, order, dims); });
}

void ParseProcess(const json& v, Scenario& s) {
  const std::string path = "/process";
  LabInstruments in = ParseInstruments(Field(v, "instruments", path),
                                       path + "/instruments", s.tolerance);
  const LabDims dims = OptionalField(v, "labs")
                           ? ParseLabDims(v["labs"], path + "/labs")
                           : LabDims::Of(in.alice, in.bob, in.event);
  std::optional<ProcessMatrix> w;
  if (const json* m = OptionalField(v, "W")) {
    const ComplexMatrix dense = ParseMatrix(*m, path + "/W");
    w = Validated(path + "/W", [&] { return ProcessMatrix(dims, dense); });
    const ProcessDiagnostics diag = validate_process(*w, 16, s.seed);
    if (!diag.passes) {
      throw Error(ErrorCode::kValidationError,
                  "at " + path + "/W: " + diag.Describe());
    }
  } else if (const json* e = OptionalField(v, "embed")) {
    w = ParseEmbedding(*e, path + "/embed", dims);
  } else if (const json* mix = OptionalField(v, "mixture")) {
    const std::string mp = path + "/mixture";
    if (!mix->is_array() || mix->empty()) Fail(mp, "expected a list");
    std::vector<ProcessMatrix> parts;
    std::vector<double> weights;
    for (std::size_t n = 0; n < mix->size(); ++n) {
      const std::string ip = mp + "/" + std::to_string(n);
      weights.push_back(ParseReal(Field((*mix)[n], "weight", ip), ip + "/weight"));
      parts.push_back(ParseEmbedding((*mix)[n], ip, dims));
    }
    w = Validated(mp, [&] { return mix_processes(parts, weights); });
  } else {
    Fail(path, "expected one of \"W\", \"embed\" or \"mixture\"");
  }
  const Event ev = Validated("/event", [&] {
    return Event(in.event.num_outcomes(), s.event.members());
  });
  if (!(LabDims::Of(in.alice, in.bob, in.event) == dims)) {
    throw Error(ErrorCode::kValidationError,
                "at " + path + "/instruments: instrument dimensions do not "
                "match the lab dimensions of W");
  }
  s.process = ProcessPayload{std::move(*w), in.alice, in.bob, in.event};
  s.event = ev;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t n = 0; n + 1 < byte; ++n) {
      if (text[n] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                            ", column " + std::to_string(col) +
                                            ": " + e.what());
  }
  if (!doc.is_object()) Fail("", "scenario must be a JSON object");

  Scenario s;
  s.id = "scenario";
  if (const json* id = OptionalField(doc, "id")) {
    if (!id->is_string()) Fail("/id", "expected a string");
    s.id = id->get<std::string>();
  }
  const json& backend = Field(doc, "backend", "");
  if (!backend.is_string()) Fail("/backend", "expected a string");
  try {
    s.backend = ParseBackend(backend.get<std::string>());
  } catch (const Error& e) {
    Fail("/backend", e.what());
  }
  if (const json* t = OptionalField(doc, "tolerance")) {
    s.tolerance = ParseReal(*t, "/tolerance");
    if (!(s.tolerance > 0.0)) Fail("/tolerance", "must be positive");
  }
  if (const json* seed = OptionalField(doc, "seed")) {
    if (!seed->is_number_unsigned()) Fail("/seed", "expected an unsigned integer");
    s.seed = seed->get<std::uint64_t>();
  }
  // Held with a provisional K size; each backend rebuilds it against the real
  // outcome count.
  OutcomeSet members;
  const json* event = OptionalField(doc, "event");
  if (event) {
    members = ParseIndexList(*event, "/event");
  } else if (!(s.backend == Backend::kQuantum && doc.contains("quantum") &&
               doc["quantum"].is_object() &&
               doc["quantum"].contains("example"))) {
    // Only the built-in example has a default event (k = 0).
    Fail("", "missing field \"event\"");
  }
  const std::size_t provisional =
      members.empty() ? 1 : *std::max_element(members.begin(), members.end()) + 1;
  s.event = Event(provisional, members);

  switch (s.backend) {
    case Backend::kTable: ParseTable(Field(doc, "table", ""), s); break;
    case Backend::kClassical:
      ParseClassical(Field(doc, "classical", ""), s);
      break;
    case Backend::kQuantum:
      ParseQuantum(Field(doc, "quantum", ""), s, event != nullptr);
      break;
    case Backend::kProcess: ParseProcess(Field(doc, "process", ""), s); break;
  }
  return s;
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

DensityMatrix parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return ParseState(doc, "");
}

Scenario WithTolerance(Scenario s, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kParameterOutOfRange, "tolerance must be positive");
  }
  s.tolerance = tol;
  if (s.table) {
    s.table = validate_joint(s.table->values(), s.table->space(), tol);
  }
  if (s.classical) {
    const ClassicalModel& m = *s.classical;
    s.classical = ClassicalModel(m.prior(), m.alice(), m.bob(),
                                 m.measurement(), m.event_cells(), tol);
  }
  return s;
}

JointDistribution ComputeJoint(const Scenario& s) {
  const double tol = s.tolerance;
  switch (s.backend) {
    case Backend::kTable: return *s.table;
    case Backend::kClassical: return embed_classical(*s.classical).joint;
    case Backend::kQuantum: return sequential_joint(*s.quantum, tol);
    case Backend::kProcess:
      return process_joint(s.process->w, s.process->alice, s.process->bob,
                           s.process->event, tol);
  }
  throw Error(ErrorCode::kParseError, "unknown backend");
}

CKReport ToDoubleReport(const BasicCKReport<Rational>& r) {
  CKReport out;
  out.q_alice = ToDouble(r.q_alice);
  out.q_bob = ToDouble(r.q_bob);
  out.a_star = r.a_star;
  out.b_star = r.b_star;
  out.steps = r.steps;
  out.ck_holds = r.ck_holds;
  out.agrees = r.agrees;
  out.mass_a_star = ToDouble(r.mass_a_star);
  out.mass_b_star = ToDouble(r.mass_b_star);
  out.witness = r.witness;
  return out;
}

namespace {

template <class T>
void FillEngineResults(RunReport& r, const BasicJoint<T>& p, const Event& e,
                       const T& tol) {
  const std::vector<T> pa = alice_marginal(p);
  const std::vector<T> pb = bob_marginal(p);
  r.q_alice.assign(p.size_i(), std::nullopt);
  r.q_bob.assign(p.size_j(), std::nullopt);
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    if (pa[i] > tol) r.q_alice[i] = ToDouble(posterior_alice(p, i, e));
  }
  for (std::size_t j = 0; j < p.size_j(); ++j) {
    if (pb[j] > tol) r.q_bob[j] = ToDouble(posterior_bob(p, j, e));
  }
  const auto reports = verify_agreement(p, e, tol);
  r.violations = CountViolations(reports);
  r.reports.clear();
  for (const auto& rep : reports) {
    if constexpr (std::is_same_v<T, Rational>) {
      r.reports.push_back(ToDoubleReport(rep));
    } else {
      r.reports.push_back(rep);
    }
  }
  r.singular_ok = singular_disagreement_check(p, e, tol);
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.scenario_id = s.id;
  r.backend = s.backend;
  r.event = s.event;

  if (s.backend == Backend::kClassical && s.exact_classical) {
    const EmbeddedModel<Rational> em = embed_classical(*s.exact_classical);
    r.exact = true;
    r.space = em.joint.space();
    for (const Rational& x : em.joint.values()) r.joint.push_back(ToDouble(x));
    FillEngineResults(r, em.joint, em.event, Rational(0));
  } else {
    const JointDistribution p = ComputeJoint(s);
    r.space = p.space();
    r.joint = p.values();
    FillEngineResults(r, p, s.event, s.tolerance);
  }
  r.duration_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return r;
}

}  // namespace agree
