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

#include "agreelab/fuzz.hpp"

#include <algorithm>
#include <exception>
#include <sstream>

#include "agreelab/agreement.hpp"
#include "agreelab/classical.hpp"
#include "agreelab/errors.hpp"
#include "agreelab/process.hpp"
#include "agreelab/quantum.hpp"
#include "agreelab/random.hpp"

namespace agree {

std::string FuzzBackendName(FuzzBackend b) {
  switch (b) {
    case FuzzBackend::kClassical: return "classical";
    case FuzzBackend::kQuantum: return "quantum";
    case FuzzBackend::kProcess: return "process";
    case FuzzBackend::kTable: return "table";
  }
  return "?";
}

FuzzBackend ParseFuzzBackend(const std::string& s) {
  if (s == "classical") return FuzzBackend::kClassical;
  if (s == "quantum") return FuzzBackend::kQuantum;
  if (s == "process") return FuzzBackend::kProcess;
  if (s == "table") return FuzzBackend::kTable;
  throw Error(ErrorCode::kParseError, "unknown backend \"" + s + "\"");
}

bool operator==(const FuzzSummary& a, const FuzzSummary& b) {
  auto same_failures = [&] {
    if (a.failures.size() != b.failures.size()) return false;
    for (std::size_t n = 0; n < a.failures.size(); ++n) {
      const FuzzFailure& x = a.failures[n];
      const FuzzFailure& y = b.failures[n];
      if (x.index != y.index || x.description != y.description ||
          x.reason != y.reason) {
        return false;
      }
    }
    return true;
  };
  return a.trials == b.trials && a.closures == b.closures &&
         a.violations == b.violations &&
         a.singular_witnesses == b.singular_witnesses &&
         a.step_bound_breaches == b.step_bound_breaches &&
         a.errors == b.errors && a.max_steps == b.max_steps &&
         a.closure_size_histogram == b.closure_size_histogram &&
         a.kind_counts == b.kind_counts &&
         same_failures();
}

namespace {

std::string EventText(const Event& e) {
  std::string s = "{";
  for (std::size_t n = 0; n < e.members().size(); ++n) {
    s += (n ? "," : "") + std::to_string(e.members()[n]);
  }
  return s + "}";
}

std::string LabLetter(Lab l) {
  switch (l) {
    case Lab::kAlice: return "A";
    case Lab::kBob: return "B";
    case Lab::kEvent: return "E";
  }
  return "?";
}

FuzzTrial ClassicalTrial(Rng& rng, const FuzzOptions& opts) {
  const ExactClassicalModel exact =
      RandomExactClassicalModel(rng, 2 * opts.max_dim);
  ClassicalModel m = ToDoubleModel(exact);
  EmbeddedModel<double> em = embed_classical(m);
  std::ostringstream d;
  d << "classical |Omega|=" << m.num_states() << " cells "
    << m.alice().num_cells() << "x" << m.bob().num_cells() << "x"
    << m.measurement().num_cells() << " event " << EventText(em.event);
  return {0, "classical", d.str(), std::move(em.joint), std::move(em.event)};
}

FuzzTrial QuantumTrial(Rng& rng, const FuzzOptions& opts) {
  std::size_t d[4];
  for (auto& x : d) x = UniformIndex(rng, 1, opts.max_dim);
  const Order order = std::bernoulli_distribution(0.5)(rng)
                          ? Order::kAliceBobEvent
                          : Order::kAliceEventBob;
  // The second and third instruments swap places between the two orders.
  Instrument alice = RandomInstrument(rng, d[0], d[1], 4);
  Instrument second = RandomInstrument(rng, d[1], d[2], 4);
  Instrument third = RandomInstrument(rng, d[2], d[3], 4);
  DensityMatrix rho = RandomDensityMatrix(rng, d[0], UniformIndex(rng, 1, d[0]));
  const bool abe = order == Order::kAliceBobEvent;
  const Instrument& bob = abe ? second : third;
  const Instrument& evi = abe ? third : second;
  Event e = RandomEvent(rng, evi.num_outcomes());
  QuantumScenario s(std::move(rho), alice, bob, evi, order, e);
  std::ostringstream desc;
  desc << "quantum order " << OrderName(order) << " dims " << d[0] << "-"
       << d[1] << "-" << d[2] << "-" << d[3] << " outcomes "
       << alice.num_outcomes() << "x" << bob.num_outcomes() << "x"
       << evi.num_outcomes() << " event " << EventText(e);
  return {0, "quantum " + OrderName(order), desc.str(),
          sequential_joint(s, opts.tol), std::move(e)};
}

FuzzTrial ProcessTrial(Rng& rng, const FuzzOptions& opts) {
  std::vector<Lab> labs{Lab::kAlice, Lab::kBob, Lab::kEvent};
  std::ostringstream desc;
  std::string kind;
  LabDims dims;
  std::vector<ProcessMatrix> ws;
  std::vector<double> weights;
  if (std::bernoulli_distribution(0.5)(rng)) {
    // Definite order with dimensions chained along a random permutation.
    std::shuffle(labs.begin(), labs.end(), rng);
    std::size_t d[4];
    for (auto& x : d) x = UniformIndex(rng, 1, opts.max_dim);
    for (std::size_t n = 0; n < 3; ++n) dims[labs[n]] = LabDim{d[n], d[n + 1]};
    DensityMatrix rho =
        RandomDensityMatrix(rng, d[0], UniformIndex(rng, 1, d[0]));
    ws.push_back(embed_definite_order(rho, labs, dims));
    weights.push_back(1.0);
    kind = "process definite";
    desc << "process order " << LabLetter(labs[0]) << LabLetter(labs[1])
         << LabLetter(labs[2]) << " dims " << d[0] << "-" << d[1] << "-"
         << d[2] << "-" << d[3];
  } else {
    // Mixture of definite orders; every lab maps d to d so all orders fit.
    const std::size_t d = UniformIndex(rng, 1, std::min<std::size_t>(opts.max_dim, 3));
    for (Lab l : labs) dims[l] = LabDim{d, d};
    const std::size_t terms = UniformIndex(rng, 2, 3);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    double total = 0;
    kind = "process mixture";
    desc << "process mixture d=" << d << " orders";
    for (std::size_t t = 0; t < terms; ++t) {
      std::shuffle(labs.begin(), labs.end(), rng);
      DensityMatrix rho = RandomDensityMatrix(rng, d, UniformIndex(rng, 1, d));
      ws.push_back(embed_definite_order(rho, labs, dims));
      weights.push_back(unit(rng));
      total += weights.back();
      desc << " " << LabLetter(labs[0]) << LabLetter(labs[1])
           << LabLetter(labs[2]);
    }
    for (double& w : weights) w /= total;
  }
  Instrument alice =
      RandomInstrument(rng, dims[Lab::kAlice].in, dims[Lab::kAlice].out, 4);
  Instrument bob =
      RandomInstrument(rng, dims[Lab::kBob].in, dims[Lab::kBob].out, 4);
  Instrument evi =
      RandomInstrument(rng, dims[Lab::kEvent].in, dims[Lab::kEvent].out, 4);
  Event e = RandomEvent(rng, evi.num_outcomes());
  const ProcessMatrix w = ws.size() == 1 ? ws[0] : mix_processes(ws, weights);
  desc << " outcomes " << alice.num_outcomes() << "x" << bob.num_outcomes()
       << "x" << evi.num_outcomes() << " event " << EventText(e);
  // Trials already run in parallel; use the serial kernel inside each.
  return {0, kind, desc.str(),
          process_joint_serial(w, alice, bob, evi, opts.tol), std::move(e)};
}

FuzzTrial TableTrial(Rng& rng, const FuzzOptions& opts) {
  JointDistribution p = RandomJointTable(rng, opts.max_dim);
  Event e = RandomEvent(rng, p.size_k());
  std::ostringstream desc;
  desc << "table " << p.size_i() << "x" << p.size_j() << "x" << p.size_k()
       << " event " << EventText(e);
  return {0, "table", desc.str(), std::move(p), std::move(e)};
}

std::string Reason(const TrialOutcome& t) {
  std::ostringstream r;
  if (!t.error.empty()) return "error: " + t.error;
  if (t.violations > 0) r << t.violations << " violation(s) ";
  if (!t.singular_ok) r << "singular disagreement ";
  if (t.max_steps > t.step_bound) {
    r << "steps " << t.max_steps << " > " << t.step_bound;
  }
  std::string s = r.str();
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

TrialOutcome RunOne(const FuzzOptions& opts, std::size_t index) {
  TrialOutcome out;
  out.index = index;
  out.description = "trial " + std::to_string(index);
  try {
    const FuzzTrial trial = GenerateTrial(opts, index);
    out.description = trial.description;
    out = EvaluateTrial(trial, opts.tol);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void Merge(FuzzSummary& s, const TrialOutcome& t) {
  ++s.trials;
  s.closures += t.closures;
  s.violations += t.violations;
  if (!t.singular_ok) ++s.singular_witnesses;
  if (t.max_steps > t.step_bound) ++s.step_bound_breaches;
  if (!t.error.empty()) ++s.errors;
  s.max_steps = std::max(s.max_steps, t.max_steps);
  for (std::size_t z : t.closure_sizes) ++s.closure_size_histogram[z];
  if (!t.kind.empty()) ++s.kind_counts[t.kind];
  if (t.Failed()) s.failures.push_back({t.index, t.description, Reason(t)});
}

}  // namespace

FuzzTrial GenerateTrial(const FuzzOptions& opts, std::size_t index) {
  if (opts.max_dim == 0) {
    throw Error(ErrorCode::kParameterOutOfRange, "max_dim must be positive");
  }
  Rng rng(MixSeed(opts.seed, index));
  FuzzTrial t = [&] {
    switch (opts.backend) {
      case FuzzBackend::kClassical: return ClassicalTrial(rng, opts);
      case FuzzBackend::kQuantum: return QuantumTrial(rng, opts);
      case FuzzBackend::kProcess: return ProcessTrial(rng, opts);
      case FuzzBackend::kTable: break;
    }
    return TableTrial(rng, opts);
  }();
  t.index = index;
  t.description = "trial " + std::to_string(index) + ": " + t.description;
  return t;
}

TrialOutcome EvaluateTrial(const FuzzTrial& trial, double tol) {
  TrialOutcome out;
  out.index = trial.index;
  out.kind = trial.kind;
  out.description = trial.description;
  const std::vector<CKReport> reports =
      verify_agreement(trial.joint, trial.event, tol);
  out.closures = reports.size();
  out.violations = CountViolations(reports);
  out.step_bound = trial.joint.size_i() + trial.joint.size_j();
  for (const CKReport& r : reports) {
    out.max_steps = std::max(out.max_steps, r.steps);
    out.closure_sizes.push_back(r.a_star.size() + r.b_star.size());
  }
  out.singular_ok = singular_disagreement_check(trial.joint, trial.event, tol);
  return out;
}

FuzzSummary fuzz_search(const FuzzOptions& opts) {
  std::vector<TrialOutcome> outcomes(opts.trials);
  const auto n = static_cast<std::ptrdiff_t>(opts.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    outcomes[static_cast<std::size_t>(t)] =
        RunOne(opts, static_cast<std::size_t>(t));
  }
  FuzzSummary s;
  for (const TrialOutcome& t : outcomes) Merge(s, t);
  return s;
}

FuzzSummary fuzz_search_serial(const FuzzOptions& opts) {
  FuzzSummary s;
  for (std::size_t t = 0; t < opts.trials; ++t) Merge(s, RunOne(opts, t));
  return s;
}

}  // namespace agree
