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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. All tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "agreelab/agreement.hpp"
#include "agreelab/classical.hpp"
#include "agreelab/fuzz.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/process.hpp"
#include "agreelab/quantum.hpp"
#include "agreelab/random.hpp"
#include "agreelab/scenario.hpp"
#include "oracles.hpp"

namespace {

using namespace agree;

constexpr double kPi = std::numbers::pi;

// Pinned tolerances and budgets.
constexpr double kClosedFormTol = 1e-9;
constexpr double kAgreeTol = 1e-9;
constexpr double kEmbedTol = 1e-10;
constexpr double kProtocolTol = 1e-9;
constexpr double kEngineTol = 1e-9;
constexpr double kGridSeconds = 10;
constexpr double kFuzzSeconds = 120;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", x);
  return buf;
}

std::string Fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

const std::vector<std::pair<double, double>> kQR = {
    {0.2, 0.1}, {0.1, 0.35}, {0.3, 0.25}, {0.45, 0.05}};

// 1. Closed-form posteriors across a grid of angles and weights.
Outcome BlockRotationGrid() {
  const auto start = std::chrono::steady_clock::now();
  const DensityMatrix mixed = DensityMatrix::MaximallyMixed(4);
  std::size_t tuples = 0;
  double worst = 0;
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) {
      for (auto [q, r] : kQR) {
        const BlockRotationParams params{a * kPi / 6, b * kPi / 6, q, r};
        const JointDistribution p =
            sequential_joint(block_rotation_example(params, mixed));
        const oracle::Posteriors4 want = oracle::BlockRotation(params.phi, q, r);
        const Event e(2, {0});
        for (std::size_t x = 0; x < 4; ++x) {
          worst = std::max(worst,
                           std::abs(posterior_alice(p, x, e) - want.alice[x]));
          worst = std::max(worst,
                           std::abs(posterior_bob(p, x, e) - want.bob[x]));
        }
        ++tuples;
      }
    }
  }
  // Bob's closed form for arbitrary full-rank states.
  Rng rng(101);
  std::size_t states = 0;
  for (; states < 10; ++states) {
    const DensityMatrix rho = RandomDensityMatrix(rng, 4, 4);
    const BlockRotationParams params{kPi / 4, kPi / 3, 0.2, 0.1};
    const JointDistribution p =
        sequential_joint(block_rotation_example(params, rho));
    const oracle::Posteriors4 want = oracle::BlockRotation(params.phi, 0.2, 0.1);
    for (std::size_t j = 0; j < 4; ++j) {
      worst = std::max(worst, std::abs(posterior_bob(p, j, Event(2, {0})) -
                                       want.bob[j]));
    }
  }
  const double secs = Seconds(start);
  return {tuples >= 100 && worst <= kClosedFormTol && secs < kGridSeconds,
          std::to_string(tuples) + " grid tuples + " + std::to_string(states) +
              " random states, max |diff| " + Sci(worst) + " (tol " +
              Sci(kClosedFormTol) + "), " + Fixed(secs) + " s (limit " +
              Fixed(kGridSeconds) + ")"};
}

// 2. Agreement inside the {a0, a1} block.
Outcome BlockAgreement() {
  const DensityMatrix mixed = DensityMatrix::MaximallyMixed(4);
  std::size_t pairs = 0, failures = 0;
  double worst = 0;
  auto check_pairs = [&](const JointDistribution& p, double q, bool want_q) {
    const Event e(2, {0});
    const std::vector<double> pa = alice_marginal(p);
    const std::vector<double> pb = bob_marginal(p);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        if (!(pa[i] > kEngineTol) || !(pb[j] > kEngineTol)) continue;
        if (!(p.Mass(Rect{ToMask({i}, 4), ToMask({j}, 4), std::nullopt}) >
              kEngineTol)) {
          continue;
        }
        ++pairs;
        const double qa = posterior_alice(p, i, e);
        const double qb = posterior_bob(p, j, e);
        double dev = std::abs(qa - qb);
        if (want_q) dev = std::max({dev, std::abs(qa - q), std::abs(qb - q)});
        worst = std::max(worst, dev);
        if (!is_common_knowledge(p, e, i, j, kEngineTol) || dev > kAgreeTol) {
          ++failures;
        }
      }
    }
  };
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) {
      for (auto [q, r] : kQR) {
        const BlockRotationParams params{a * kPi / 6, b * kPi / 6, q, r};
        check_pairs(sequential_joint(block_rotation_example(params, mixed)), q,
                    true);
      }
    }
  }
  Rng rng(202);
  std::size_t states = 0;
  for (; states < 100; ++states) {
    const DensityMatrix small =
        RandomDensityMatrix(rng, 2, 1 + states % 2);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m.topLeftCorner(2, 2) = small.matrix();
    const BlockRotationParams params{
        static_cast<double>(UniformIndex(rng, 0, 11)) * kPi / 6,
        static_cast<double>(UniformIndex(rng, 0, 11)) * kPi / 6,
        kQR[states % kQR.size()].first, kQR[states % kQR.size()].second};
    check_pairs(
        sequential_joint(block_rotation_example(params, DensityMatrix(m))), 0,
        false);
  }
  return {failures == 0 && pairs > 0,
          std::to_string(pairs) + " positive-mass pairs (incl. " +
              std::to_string(states) + " block-supported states), " +
              std::to_string(failures) + " not CK or disagreeing, max dev " +
              Sci(worst)};
}

// 3. Classical models against their embeddings and the meet oracle.
Outcome ClassicalEmbedding() {
  Rng rng(303);
  const std::size_t models = 600;
  std::size_t checks = 0, mismatches = 0;
  std::string first;
  auto note = [&](std::size_t n, const std::string& what) {
    ++mismatches;
    if (first.empty()) first = "model " + std::to_string(n) + ": " + what;
  };
  for (std::size_t n = 0; n < models; ++n) {
    const ExactClassicalModel m = RandomExactClassicalModel(rng, 8);
    const EmbeddedModel<Rational> em = embed_classical(m);
    const std::vector<BasicCKReport<Rational>> reports =
        verify_agreement(em.joint, em.event, Rational(0));
    for (const auto& r : reports) {
      if (r.IsViolation()) note(n, "embedded violation");
    }
    for (std::size_t w = 0; w < m.num_states(); ++w) {
      const std::size_t ca = m.alice().cell_of(w);
      const std::size_t cb = m.bob().cell_of(w);
      const Rational qa = classical_posterior(m, Agent::kAlice, ca);
      const Rational qb = classical_posterior(m, Agent::kBob, cb);
      if (qa != posterior_alice(em.joint, ca, em.event) ||
          qb != posterior_bob(em.joint, cb, em.event) ||
          qa != oracle::CellPosterior(m, Agent::kAlice, w) ||
          qb != oracle::CellPosterior(m, Agent::kBob, w)) {
        note(n, "posterior mismatch at state " + std::to_string(w));
      }
      const bool classical = classical_ck_at(m, w, qa, qb);
      const bool engine =
          is_common_knowledge(em.joint, em.event, ca, cb, Rational(0));
      const bool meet = oracle::MeetCommonKnowledge(m, w, qa, qb);
      if (classical != engine || classical != meet) {
        note(n, "CK verdicts differ at state " + std::to_string(w));
      }
      // The agreement verdict: CK forces equal posteriors.
      if (classical && qa != qb) note(n, "CK with unequal posteriors");
      ++checks;
    }
  }
  return {mismatches == 0,
          std::to_string(models) + " exact models, " + std::to_string(checks) +
              " state checks, " + std::to_string(mismatches) + " mismatches" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

struct FuzzRuns {
  FuzzSummary quantum, process, classical, table;
  double seconds = 0;
};

const FuzzRuns& Fuzz() {
  static const FuzzRuns runs = [] {
    FuzzRuns r;
    const auto start = std::chrono::steady_clock::now();
    FuzzOptions o;
    o.seed = 4040;
    o.backend = FuzzBackend::kQuantum;
    o.trials = 1000;
    r.quantum = fuzz_search(o);
    o.backend = FuzzBackend::kProcess;
    o.trials = 500;
    r.process = fuzz_search(o);
    r.seconds = Seconds(start);
    o.backend = FuzzBackend::kClassical;
    o.trials = 1000;
    r.classical = fuzz_search(o);
    o.backend = FuzzBackend::kTable;
    r.table = fuzz_search(o);
    return r;
  }();
  return runs;
}

std::size_t Kind(const FuzzSummary& s, const std::string& k) {
  auto it = s.kind_counts.find(k);
  return it == s.kind_counts.end() ? 0 : it->second;
}

std::string Counts(const char* name, const FuzzSummary& s) {
  return std::string(name) + " " + std::to_string(s.trials) + " trials/" +
         std::to_string(s.closures) + " closures, " +
         std::to_string(s.violations) + " violations, " +
         std::to_string(s.singular_witnesses) + " witnesses, " +
         std::to_string(s.errors) + " errors";
}

// 4. No violation or singular witness over random quantum and process trials.
Outcome FuzzClean() {
  const FuzzRuns& f = Fuzz();
  const std::size_t abe = Kind(f.quantum, "quantum ABE");
  const std::size_t aeb = Kind(f.quantum, "quantum AEB");
  const std::size_t definite = Kind(f.process, "process definite");
  const std::size_t mixture = Kind(f.process, "process mixture");
  auto clean = [](const FuzzSummary& s) {
    return s.violations == 0 && s.singular_witnesses == 0 && s.errors == 0;
  };
  std::string detail = Counts("quantum", f.quantum) + " (ABE " +
                       std::to_string(abe) + ", AEB " + std::to_string(aeb) +
                       "); " + Counts("process", f.process) + " (definite " +
                       std::to_string(definite) + ", mixture " +
                       std::to_string(mixture) + "); " + Fixed(f.seconds) +
                       " s (limit " + Fixed(kFuzzSeconds) + ")";
  if (!f.quantum.failures.empty()) {
    detail += "; first failure: " + f.quantum.failures.front().reason;
  } else if (!f.process.failures.empty()) {
    detail += "; first failure: " + f.process.failures.front().reason;
  }
  return {clean(f.quantum) && clean(f.process) && f.quantum.trials >= 1000 &&
              f.process.trials >= 500 && abe > 0 && aeb > 0 && definite > 0 &&
              mixture > 0 && f.seconds < kFuzzSeconds,
          detail};
}

// 5. Definite-order process matrices reproduce the sequential rule.
Outcome EmbeddingMatchesSequential() {
  Rng rng(505);
  const std::size_t scenarios = 240;
  double worst = 0;
  std::size_t entries = 0;
  for (std::size_t n = 0; n < scenarios; ++n) {
    const Order order =
        n % 2 ? Order::kAliceEventBob : Order::kAliceBobEvent;
    std::array<std::size_t, 4> d;
    for (auto& x : d) x = UniformIndex(rng, 1, 3);
    const DensityMatrix rho = RandomDensityMatrix(rng, d[0], UniformIndex(rng, 1, d[0]));
    const Instrument first = RandomInstrument(rng, d[0], d[1], 4);
    const Instrument second = RandomInstrument(rng, d[1], d[2], 4);
    const Instrument third = RandomInstrument(rng, d[2], d[3], 4);
    const Instrument& alice = first;
    const Instrument& bob = order == Order::kAliceBobEvent ? second : third;
    const Instrument& ev = order == Order::kAliceBobEvent ? third : second;
    const QuantumScenario s(rho, alice, bob, ev, order,
                            RandomEvent(rng, ev.num_outcomes()));
    const ProcessMatrix w = embed_definite_order(
        rho, LabSequence(order), LabDims::Of(alice, bob, ev));
    const std::vector<double> via_w = process_table(
        w, ChoiOperators(alice), ChoiOperators(bob), ChoiOperators(ev));
    const std::vector<double> direct = sequential_table(s);
    for (std::size_t x = 0; x < direct.size(); ++x) {
      worst = std::max(worst, std::abs(via_w[x] - direct[x]));
    }
    entries += direct.size();
  }
  return {worst <= kEmbedTol,
          std::to_string(scenarios) + " scenarios (both orders), " +
              std::to_string(entries) + " entries, max |diff| " + Sci(worst) +
              " (tol " + Sci(kEmbedTol) + ")"};
}

// 6. The iteration count never exceeds |I| + |J|.
Outcome StepBound() {
  const FuzzRuns& f = Fuzz();
  std::size_t breaches = 0, trials = 0, max_steps = 0;
  for (const FuzzSummary* s : {&f.quantum, &f.process, &f.classical, &f.table}) {
    breaches += s->step_bound_breaches;
    trials += s->trials;
    max_steps = std::max(max_steps, s->max_steps);
  }
  return {breaches == 0,
          std::to_string(trials) + " trials over all four generators, " +
              std::to_string(breaches) + " breaches, max steps " +
              std::to_string(max_steps)};
}

// 7. The announcement protocol converges to equal, rectangle-consistent values.
Outcome ProtocolConverges() {
  Rng rng(707);
  std::size_t runs = 0, failures = 0, max_rounds_used = 0;
  double worst = 0;
  std::string first;
  auto run = [&](const JointDistribution& p, const Event& e, std::size_t i,
                 std::size_t j) {
    ++runs;
    const std::size_t limit = p.size_i() * p.size_j();
    try {
      const ProtocolTranscript t = dynamic_protocol(p, e, i, j, limit, kEngineTol);
      const double rect =
          oracle::RectanglePosterior(p, t.alice_set, t.bob_set, e);
      const double dev = std::max({std::abs(t.final_alice - t.final_bob),
                                   std::abs(t.final_alice - rect),
                                   std::abs(t.final_bob - rect)});
      worst = std::max(worst, dev);
      max_rounds_used = std::max(max_rounds_used, t.rounds.size());
      if (dev > kProtocolTol) {
        ++failures;
        if (first.empty()) first = "run " + std::to_string(runs) + " disagrees";
      }
    } catch (const std::exception& ex) {
      ++failures;
      if (first.empty()) first = "run " + std::to_string(runs) + ": " + ex.what();
    }
  };
  {
    // Uniform four states, partitions {{0,1},{2,3}} and {{0,1,2},{3}},
    // event {0,3}.
    std::vector<Rational> prior(4, Rational(1, 4));
    const ExactClassicalModel m(prior, Partition({0, 0, 1, 1}),
                                Partition({0, 0, 0, 1}),
                                Partition({0, 1, 1, 0}), {0}, Rational(0));
    const EmbeddedModel<double> em = embed_classical(ToDoubleModel(m));
    run(em.joint, em.event, 0, 0);
  }
  while (runs < 240) {
    const JointDistribution p = RandomJointTable(rng, 4);
    const Event e = RandomEvent(rng, p.size_k());
    std::vector<std::pair<std::size_t, std::size_t>> support;
    for (std::size_t i = 0; i < p.size_i(); ++i) {
      for (std::size_t j = 0; j < p.size_j(); ++j) {
        if (p.Mass(Rect{ToMask({i}, p.size_i()), ToMask({j}, p.size_j()),
                        std::nullopt}) > kEngineTol) {
          support.emplace_back(i, j);
        }
      }
    }
    if (support.empty()) continue;
    const auto [i, j] = support[UniformIndex(rng, 0, support.size() - 1)];
    run(p, e, i, j);
  }
  return {failures == 0,
          std::to_string(runs) + " runs, " + std::to_string(failures) +
              " failures, max dev " + Sci(worst) + ", max rounds " +
              std::to_string(max_rounds_used) +
              (first.empty() ? "" : " (first: " + first + ")")};
}

// 8. Round trip through the effective state space.
Outcome EffectiveStateSpace() {
  std::size_t tables = 0, mismatches = 0, verdicts = 0;
  std::string first;
  auto check = [&](const std::string& name, const JointDistribution& p,
                   const Event& e) {
    ++tables;
    const ClassicalModel m = as_effective_state_space(p, e);
    const EmbeddedModel<double> back = embed_classical(m);
    if (back.joint.space().total() != p.space().total() ||
        back.joint.values() != p.values() || !(back.event == e)) {
      ++mismatches;
      if (first.empty()) first = name + ": table changed";
      return;
    }
    const std::vector<double> pa = alice_marginal(p);
    const std::vector<double> pb = bob_marginal(p);
    for (std::size_t i = 0; i < p.size_i(); ++i) {
      if (!(pa[i] > p.tolerance())) continue;
      for (std::size_t j = 0; j < p.size_j(); ++j) {
        if (!(pb[j] > p.tolerance())) continue;
        const bool engine = is_common_knowledge(p, e, i, j, p.tolerance());
        const double qa = posterior_alice(p, i, e);
        const double qb = posterior_bob(p, j, e);
        for (std::size_t k = 0; k < p.size_k(); ++k) {
          ++verdicts;
          if (classical_ck_at(m, p.space().flat(i, j, k), qa, qb) != engine) {
            ++mismatches;
            if (first.empty()) {
              first = name + ": CK verdict differs at (" + std::to_string(i) +
                      "," + std::to_string(j) + "," + std::to_string(k) + ")";
            }
          }
        }
      }
    }
  };
  std::size_t fixtures = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(AGREELAB_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const Scenario s = LoadScenarioFile(entry.path().string());
    check(entry.path().filename().string(), ComputeJoint(s), s.event);
    ++fixtures;
  }
  Rng rng(808);
  for (int n = 0; n < 240; ++n) {
    const JointDistribution p = RandomJointTable(rng, 4);
    check("random table " + std::to_string(n), p,
          RandomEvent(rng, p.size_k()));
  }
  return {mismatches == 0 && fixtures > 0,
          std::to_string(tables) + " tables (" + std::to_string(fixtures) +
              " fixtures), " + std::to_string(verdicts) + " CK verdicts, " +
              std::to_string(mismatches) + " mismatches" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria =
      {{"block-rotation closed forms", BlockRotationGrid},
       {"agreement in the degenerate block", BlockAgreement},
       {"classical embedding is exact", ClassicalEmbedding},
       {"no violations under random search", FuzzClean},
       {"definite-order process matches sequential", EmbeddingMatchesSequential},
       {"closure steps bounded by |I|+|J|", StepBound},
       {"announcement protocol converges", ProtocolConverges},
       {"effective state space round trip", EffectiveStateSpace}};
  int failed = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s: %s\n", n + 1, o.pass ? "PASS" : "FAIL",
                criteria[n].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
