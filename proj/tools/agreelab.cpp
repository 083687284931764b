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

// Command-line front end: scenario workflows, the randomized search and the
// four-level example.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "agreelab/agreement.hpp"
#include "agreelab/errors.hpp"
#include "agreelab/fuzz.hpp"
#include "agreelab/quantum.hpp"
#include "agreelab/scenario.hpp"

namespace {

using namespace agree;

struct Globals {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string format = "table";
};

// Distinguishes failures while loading input from failures while running.
struct LoadError : Error {
  explicit LoadError(const Error& e) : Error(e) {}
};

Scenario Load(const std::string& path, const Globals& g) {
  try {
    Scenario s = LoadScenarioFile(path);
    return g.tol ? WithTolerance(std::move(s), *g.tol) : s;
  } catch (const Error& e) {
    throw LoadError(e);
  }
}

std::string ListText(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t n = 0; n < v.size(); ++n) {
    s += (n ? "," : "") + FormatNumber(v[n]);
  }
  return s + "]";
}

std::string OptionalText(const std::optional<double>& x, bool records) {
  return x ? FormatNumber(*x) : (records ? "null" : "-");
}

int CmdJoint(const Globals& g, const std::string& path) {
  const Scenario s = Load(path, g);
  const JointDistribution p = ComputeJoint(s);
  if (ParseFormat(g.format) == ReportFormat::kRecords) {
    std::cout << "{\"record\":\"joint\",\"scenario\":\"" << s.id
              << "\",\"dims\":[" << p.size_i() << "," << p.size_j() << ","
              << p.size_k() << "],\"p\":" << ListText(p.values()) << "}\n";
    return kExitOk;
  }
  std::cout << "scenario " << s.id << "  backend " << BackendName(s.backend)
            << "  outcomes " << p.size_i() << "x" << p.size_j() << "x"
            << p.size_k() << "\n"
            << "i  j  k  p(i,j,k)\n";
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    for (std::size_t j = 0; j < p.size_j(); ++j) {
      for (std::size_t k = 0; k < p.size_k(); ++k) {
        std::cout << std::left << std::setw(3) << i << std::setw(3) << j
                  << std::setw(3) << k << FormatNumber(p(i, j, k)) << "\n";
      }
    }
  }
  return kExitOk;
}

int CmdPosteriors(const Globals& g, const std::string& path) {
  const Scenario s = Load(path, g);
  const RunReport r = run_scenario(s);
  const bool records = ParseFormat(g.format) == ReportFormat::kRecords;
  auto emit = [&](const char* agent, const std::vector<std::optional<double>>& q) {
    for (std::size_t x = 0; x < q.size(); ++x) {
      if (records) {
        std::cout << "{\"record\":\"posterior\",\"scenario\":\"" << s.id
                  << "\",\"agent\":\"" << agent << "\",\"outcome\":" << x
                  << ",\"q\":" << OptionalText(q[x], true) << "}\n";
      } else {
        std::cout << std::left << std::setw(7) << agent << std::setw(9) << x
                  << OptionalText(q[x], false) << "\n";
      }
    }
  };
  if (!records) std::cout << "agent  outcome  posterior\n";
  emit("alice", r.q_alice);
  emit("bob", r.q_bob);
  return kExitOk;
}

struct CkArgs {
  std::string path;
  std::optional<double> qa, qb;
  std::optional<std::size_t> i, j;
};

int CmdCk(const Globals& g, const CkArgs& a) {
  const bool by_value = a.qa && a.qb;
  const bool by_outcome = a.i && a.j;
  if (by_value == by_outcome) {
    std::cerr << "ck: give either --qa and --qb, or --i and --j\n";
    return kExitUsage;
  }
  const Scenario s = Load(a.path, g);
  const JointDistribution p = ComputeJoint(s);
  const double tol = s.tolerance;
  double qa = 0, qb = 0;
  if (by_value) {
    qa = *a.qa;
    qb = *a.qb;
  } else {
    if (*a.i >= p.size_i() || *a.j >= p.size_j()) {
      throw Error(ErrorCode::kDimensionMismatch, "outcome index out of range");
    }
    qa = posterior_alice(p, *a.i, s.event);
    qb = posterior_bob(p, *a.j, s.event);
  }
  const CKReport r = ck_closure(p, s.event, qa, qb, tol);
  if (ParseFormat(g.format) == ReportFormat::kRecords) {
    std::cout << ClosureRecord(s.id, r) << "\n";
  } else {
    EmitClosureTable({r}, std::cout);
    if (by_outcome) {
      const bool in_closure =
          std::binary_search(r.a_star.begin(), r.a_star.end(), *a.i) &&
          std::binary_search(r.b_star.begin(), r.b_star.end(), *a.j);
      std::cout << "pair (" << *a.i << "," << *a.j << ") "
                << (in_closure && r.ck_holds ? "is" : "is not")
                << " in the common-knowledge closure\n";
    }
  }
  return r.IsViolation() ? kExitViolation : kExitOk;
}

int CmdVerify(const Globals& g, const std::vector<std::string>& paths,
              bool echo_joint) {
  const ReportFormat f = ParseFormat(g.format);
  int code = kExitOk;
  for (const std::string& path : paths) {
    const RunReport r = run_scenario(Load(path, g));
    emit_report(r, f, std::cout, echo_joint);
    if (r.violations > 0 || !r.singular_ok) code = kExitViolation;
  }
  return code;
}

struct SearchArgs {
  std::string backend = "quantum";
  std::size_t trials = 100;
  std::size_t max_dim = 4;
  bool serial = false;
};

int CmdSearch(const Globals& g, const SearchArgs& a) {
  FuzzOptions o;
  o.backend = ParseFuzzBackend(a.backend);
  o.trials = a.trials;
  o.max_dim = a.max_dim;
  o.seed = g.seed;
  o.tol = g.tol.value_or(1e-9);
  const auto start = std::chrono::steady_clock::now();
  const FuzzSummary s = a.serial ? fuzz_search_serial(o) : fuzz_search(o);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  if (ParseFormat(g.format) == ReportFormat::kRecords) {
    std::cout << "{\"record\":\"search\",\"backend\":\""
              << FuzzBackendName(o.backend) << "\",\"seed\":" << o.seed
              << ",\"trials\":" << s.trials << ",\"closures\":" << s.closures
              << ",\"violations\":" << s.violations
              << ",\"singular_witnesses\":" << s.singular_witnesses
              << ",\"step_bound_breaches\":" << s.step_bound_breaches
              << ",\"errors\":" << s.errors << ",\"max_steps\":" << s.max_steps
              << ",\"closure_sizes\":{";
    bool first = true;
    for (const auto& [size, count] : s.closure_size_histogram) {
      std::cout << (first ? "" : ",") << "\"" << size << "\":" << count;
      first = false;
    }
    std::cout << "}}\n";
    for (const FuzzFailure& f : s.failures) {
      std::cout << "{\"record\":\"failure\",\"trial\":" << f.index
                << ",\"description\":\"" << f.description
                << "\",\"reason\":\"" << f.reason << "\"}\n";
    }
  } else {
    std::cout << "backend " << FuzzBackendName(o.backend) << "  seed "
              << o.seed << "  trials " << s.trials << "  max-dim "
              << o.max_dim << "\n"
              << "closures examined   " << s.closures << "\n"
              << "violations          " << s.violations << "\n"
              << "singular witnesses  " << s.singular_witnesses << "\n"
              << "step-bound breaches " << s.step_bound_breaches << "\n"
              << "errors              " << s.errors << "\n"
              << "max closure steps   " << s.max_steps << "\n"
              << "closure size |A*|+|B*|  count\n";
    for (const auto& [size, count] : s.closure_size_histogram) {
      std::cout << "  " << std::left << std::setw(22) << size << count << "\n";
    }
    for (const FuzzFailure& f : s.failures) {
      std::cout << "FAILED " << f.description << ": " << f.reason << "\n";
    }
    std::cout << "duration " << FormatNumber(ms) << " ms\n";
  }
  if (s.violations > 0 || s.singular_witnesses > 0 ||
      s.step_bound_breaches > 0) {
    return kExitViolation;
  }
  return s.errors > 0 ? kExitRuntimeError : kExitOk;
}

struct ExampleArgs {
  double theta = std::numbers::pi / 4;
  double phi = std::numbers::pi / 3;
  double q = 0.2;
  double r = 0.1;
  std::string rho = "mixed";
};

DensityMatrix ExampleState(const std::string& choice) {
  if (choice == "mixed") return DensityMatrix::MaximallyMixed(4);
  if (choice == "block") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = 0.5;
    return DensityMatrix(m);
  }
  std::ifstream in(choice);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + choice);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

int CmdExample(const Globals& g, const ExampleArgs& a) {
  const BlockRotationParams params{a.theta, a.phi, a.q, a.r};
  DensityMatrix rho = DensityMatrix::MaximallyMixed(4);
  QuantumScenario qs = [&] {
    try {
      rho = ExampleState(a.rho);
      if (rho.dim() != 4) {
        throw Error(ErrorCode::kValidationError, "state must be 4x4");
      }
      return block_rotation_example(params, rho);
    } catch (const Error& e) {
      throw LoadError(e.code() == ErrorCode::kParseError
                          ? e
                          : Error(ErrorCode::kValidationError, e.what()));
    }
  }();
  const double tol = g.tol.value_or(1e-9);
  const JointDistribution p = sequential_joint(qs, tol);
  const ClosedFormPosteriors cf = block_rotation_closed_form(params);
  // The printed form of Alice's posteriors assumes the maximally mixed state.
  const bool alice_form_applies =
      (rho.matrix() - DensityMatrix::MaximallyMixed(4).matrix()).norm() <= tol;
  const std::vector<double> pa = alice_marginal(p);
  const std::vector<double> pb = bob_marginal(p);
  const bool records = ParseFormat(g.format) == ReportFormat::kRecords;
  double worst = 0;
  if (!records) {
    std::cout << "agent  outcome  computed        closed form     |diff|\n";
  }
  auto row = [&](const char* agent, std::size_t x, double mass, double computed,
                 double expected, bool applies) {
    const bool defined = mass > tol;
    const double diff = std::abs(computed - expected);
    if (defined && applies) worst = std::max(worst, diff);
    if (records) {
      std::cout << "{\"record\":\"example\",\"agent\":\"" << agent
                << "\",\"outcome\":" << x << ",\"computed\":"
                << (defined ? FormatNumber(computed) : "null")
                << ",\"closed_form\":" << FormatNumber(expected)
                << ",\"applies\":" << (defined && applies ? "true" : "false")
                << "}\n";
    } else {
      std::cout << std::left << std::setw(7) << agent << std::setw(9) << x
                << std::setw(16) << (defined ? FormatNumber(computed) : "-")
                << std::setw(16) << FormatNumber(expected)
                << (defined && applies ? FormatNumber(diff) : "n/a") << "\n";
    }
  };
  for (std::size_t i = 0; i < 4; ++i) {
    row("alice", i, pa[i], pa[i] > tol ? posterior_alice(p, i, qs.event()) : 0,
        cf.alice[i], alice_form_applies);
  }
  for (std::size_t j = 0; j < 4; ++j) {
    row("bob", j, pb[j], pb[j] > tol ? posterior_bob(p, j, qs.event()) : 0,
        cf.bob[j], true);
  }
  const auto reports = verify_agreement(p, qs.event(), tol);
  const std::size_t violations = CountViolations(reports);
  const bool singular_ok = singular_disagreement_check(p, qs.event(), tol);
  if (records) {
    for (const CKReport& r : reports) {
      std::cout << ClosureRecord("paper-example", r) << "\n";
    }
    std::cout << "{\"record\":\"example_summary\",\"max_diff\":"
              << FormatNumber(worst) << ",\"violations\":" << violations
              << ",\"singular_ok\":" << (singular_ok ? "true" : "false")
              << "}\n";
  } else {
    std::cout << "max |diff| " << FormatNumber(worst) << "\n";
    EmitClosureTable(reports, std::cout);
    std::cout << "violations " << violations << "  singular disagreement "
              << (singular_ok ? "none" : "FOUND") << "\n";
  }
  if (violations > 0 || !singular_ok || worst > tol) return kExitViolation;
  return kExitOk;
}

int ExitFor(const Error& e, bool loading) {
  switch (e.code()) {
    case ErrorCode::kParseError: return kExitParseError;
    case ErrorCode::kValidationError: return kExitValidationError;
    default: return loading ? kExitValidationError : kExitRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agreelab: agreement and common knowledge across probability "
               "backends"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "numerical tolerance (overrides scenario)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "base seed for randomized search");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"table", "records"}));

  std::string path;
  std::vector<std::string> paths;

  auto* joint = app.add_subcommand("joint", "print the joint table p(i,j,k)");
  joint->add_option("scenario", path, "scenario file")->required();

  auto* post = app.add_subcommand("posteriors", "print q_A(i) and q_B(j)");
  post->add_option("scenario", path, "scenario file")->required();

  CkArgs ck;
  auto* ckc = app.add_subcommand("ck", "common-knowledge closure");
  ckc->add_option("scenario", ck.path, "scenario file")->required();
  ckc->add_option("--qa", ck.qa, "Alice's posterior value");
  ckc->add_option("--qb", ck.qb, "Bob's posterior value");
  ckc->add_option("--i", ck.i, "Alice's outcome");
  ckc->add_option("--j", ck.j, "Bob's outcome");

  bool echo_joint = false;
  auto* verify = app.add_subcommand("verify", "run every closure check");
  verify->add_option("scenarios", paths, "scenario files")->required();
  verify->add_flag("--echo-joint", echo_joint, "include the joint table");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "randomized violation search");
  search->add_option("--backend", sa.backend, "instance generator")
      ->check(CLI::IsMember({"classical", "quantum", "process", "table"}));
  search->add_option("--trials", sa.trials, "number of trials")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  search->add_option("--max-dim", sa.max_dim, "dimension bound")
      ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  search->add_flag("--serial", sa.serial, "single-threaded reference run");

  ExampleArgs ex;
  auto* example = app.add_subcommand(
      "paper-example", "four-level example against its closed-form posteriors");
  example->add_option("--theta", ex.theta, "rotation of the {a0,a1} block");
  example->add_option("--phi", ex.phi, "rotation of the {a2,a3} block");
  example->add_option("--q", ex.q, "0 < q < 1/2");
  example->add_option("--r", ex.r, "0 < r < 1 - 2q");
  example->add_option("--rho", ex.rho,
                      "\"mixed\", \"block\" or a JSON state file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*joint) return CmdJoint(g, path);
    if (*post) return CmdPosteriors(g, path);
    if (*ckc) return CmdCk(g, ck);
    if (*verify) return CmdVerify(g, paths, echo_joint);
    if (*search) return CmdSearch(g, sa);
    if (*example) return CmdExample(g, ex);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFor(e, true);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFor(e, false);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitUsage;
}
