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

#ifndef AGREELAB_SCENARIO_HPP_
#define AGREELAB_SCENARIO_HPP_

// Scenario files and run reports.
//
// A scenario is a JSON document with a mandatory "backend" discriminator:
//
//   {"id": "...", "backend": "table" | "classical" | "quantum" | "process",
//    "event": [k, ...], "tolerance": 1e-9, "seed": 0, <backend payload>}
//
// Complex numbers are [re, im] pairs and matrices are lists of rows. See
// README.md for the payload of each backend.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agreelab/agreement.hpp"
#include "agreelab/classical.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/process.hpp"
#include "agreelab/quantum.hpp"

namespace agree {

enum class Backend { kTable, kClassical, kQuantum, kProcess };

std::string BackendName(Backend b);
Backend ParseBackend(const std::string& s);

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParseError = 2,
  kExitValidationError = 3,
  kExitViolation = 4,
  kExitRuntimeError = 5,
};

struct ProcessPayload {
  ProcessMatrix w;
  Instrument alice;
  Instrument bob;
  Instrument event;
};

struct Scenario {
  std::string id;
  Backend backend = Backend::kTable;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  Event event;

  // Exactly one payload is set, matching `backend`. A classical prior written
  // as strings ("1/3") is kept exact and the engine runs in rationals.
  std::optional<JointDistribution> table;
  std::optional<ClassicalModel> classical;
  std::optional<ExactClassicalModel> exact_classical;
  std::optional<QuantumScenario> quantum;
  std::optional<BlockRotationParams> block_rotation;  // when built from params
  std::optional<ProcessPayload> process;
};

// Throws Error(kParseError) for malformed text or structure (with line and
// column, or the JSON path of the offending field) and Error(kValidationError)
// when a payload fails its backend's checks.
Scenario parse_scenario(const std::string& text);
Scenario LoadScenarioFile(const std::string& path);

// A density matrix in the scenario "state" syntax (matrix, maximally_mixed or
// pure). Throws kParseError or kValidationError like parse_scenario.
DensityMatrix parse_state(const std::string& text);

// Replaces the scenario tolerance, re-validating payloads that depend on it.
Scenario WithTolerance(Scenario s, double tol);

JointDistribution ComputeJoint(const Scenario& s);

struct RunReport {
  std::string scenario_id;
  Backend backend = Backend::kTable;
  bool exact = false;
  OutcomeSpace space;
  Event event;
  std::vector<double> joint;  // echo of the computed table, row-major
  // Posterior per outcome; std::nullopt where the outcome has no mass.
  std::vector<std::optional<double>> q_alice;
  std::vector<std::optional<double>> q_bob;
  std::vector<CKReport> reports;
  std::size_t violations = 0;
  bool singular_ok = true;
  double duration_ms = 0;
};

RunReport run_scenario(const Scenario& s);

// Turns a closure computed in rationals into the double report.
CKReport ToDoubleReport(const BasicCKReport<Rational>& r);

enum class ReportFormat { kTable, kRecords };
ReportFormat ParseFormat(const std::string& s);

// Formats a number with 12 significant digits.
std::string FormatNumber(double x);

// Table format: aligned human-readable output, including the run duration.
// Records format: one JSON object per line; first a "run" record, then one
// "ck" record per closure, fields in a fixed order. The records omit the wall
// clock so identical inputs give byte-identical output.
void emit_report(const RunReport& r, ReportFormat format, std::ostream& out,
                 bool echo_joint = false);

// Closure table only (header line plus one row per report).
void EmitClosureTable(const std::vector<CKReport>& reports, std::ostream& out);
// One "ck" record.
std::string ClosureRecord(const std::string& scenario_id, const CKReport& r);

// Parses the records emitted by emit_report back into a report (duration and
// closure-independent echo fields are restored where present).
RunReport ParseRecords(const std::string& text);

}  // namespace agree

#endif  // AGREELAB_SCENARIO_HPP_
