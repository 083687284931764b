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

#include <filesystem>
#include <sstream>

#include "agreelab/errors.hpp"
#include "doctest.h"

using namespace agree;

namespace {

const std::string kUniform = R"({
  "id": "u", "backend": "table", "event": [0],
  "table": {"dims": [2, 2, 2], "p": [0.125, 0.125, 0.125, 0.125,
                                     0.125, 0.125, 0.125, 0.125]}
})";

std::pair<ErrorCode, std::string> Failure(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  FAIL("expected parse_scenario to fail");
  return {ErrorCode::kParseError, ""};
}

bool Contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

std::string Records(const RunReport& r, bool echo = false) {
  std::ostringstream os;
  emit_report(r, ReportFormat::kRecords, os, echo);
  return os.str();
}

}  // namespace

TEST_CASE("parse_scenario accepts each backend") {
  const Scenario s = parse_scenario(kUniform);
  CHECK(s.id == "u");
  CHECK(s.backend == Backend::kTable);
  REQUIRE(s.table.has_value());
  CHECK(s.event.members() == OutcomeSet{0});

  for (const auto& entry :
       std::filesystem::directory_iterator(AGREELAB_SCENARIO_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(LoadScenarioFile(entry.path().string()));
  }
}

TEST_CASE("parse errors carry a location") {
  auto [code, msg] = Failure("{\n  \"backend\": \"table\",\n  oops\n}");
  CHECK(code == ErrorCode::kParseError);
  CHECK(Contains(msg, "line 3"));

  std::tie(code, msg) = Failure(R"({"backend": "table", "event": [0]})");
  CHECK(code == ErrorCode::kParseError);
  CHECK(Contains(msg, "table"));

  std::tie(code, msg) = Failure(R"({"backend": "cloud", "event": [0]})");
  CHECK(code == ErrorCode::kParseError);
  CHECK(Contains(msg, "/backend"));

  std::tie(code, msg) = Failure(R"({"backend": "table", "event": [0],
      "table": {"dims": [2, 1, 1], "p": [0.5, "x"]}})");
  CHECK(code == ErrorCode::kParseError);
  CHECK(Contains(msg, "/table/p/1"));

  std::tie(code, msg) = Failure(R"({"backend": "table",
      "table": {"dims": [1, 1, 1], "p": [1]}})");
  CHECK(Contains(msg, "event"));
}

TEST_CASE("validation errors carry backend diagnostics") {
  auto [code, msg] = Failure(R"({"backend": "table", "event": [0],
      "table": {"dims": [2, 1, 1], "p": [0.5, 0.4]}})");
  CHECK(code == ErrorCode::kValidationError);
  CHECK(Contains(msg, "NotNormalized"));

  // Kraus operators scaled by 1.1: not trace preserving.
  std::tie(code, msg) = Failure(R"({"backend": "quantum", "event": [0],
    "quantum": {"state": {"maximally_mixed": 2},
      "instruments": {
        "alice": [[[[[1.1, 0], [0, 0]], [[0, 0], [1.1, 0]]]]],
        "bob": {"identity": 2},
        "event": {"identity": 2}}}})");
  CHECK(code == ErrorCode::kValidationError);
  CHECK(Contains(msg, "trace-preservation deviation"));
  CHECK(Contains(msg, "/quantum/instruments/alice"));

  std::tie(code, msg) = Failure(R"({"backend": "quantum",
    "quantum": {"example": {"theta": 0, "phi": 0, "q": 0.6, "r": 0.1}}})");
  CHECK(code == ErrorCode::kValidationError);
  CHECK(Contains(msg, "ParameterOutOfRange"));

  std::tie(code, msg) = Failure(R"({"backend": "table", "event": [3],
      "table": {"dims": [1, 1, 2], "p": [0.5, 0.5]}})");
  CHECK(code == ErrorCode::kValidationError);

  // A W that is not positive.
  std::tie(code, msg) = Failure(R"({"backend": "process", "event": [0],
    "process": {
      "instruments": {"alice": {"identity": 1}, "bob": {"identity": 1},
                      "event": [[[[[1, 0], [0, 0]]]], [[[[0, 0], [1, 0]]]]]},
      "labs": {"alice": [1, 1], "bob": [1, 1], "event": [2, 1]},
      "W": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}})");
  CHECK(code == ErrorCode::kValidationError);
  CHECK(Contains(msg, "min eigenvalue"));
}

TEST_CASE("run_scenario") {
  SUBCASE("exact four-state model") {
    const RunReport r = run_scenario(
        LoadScenarioFile(std::string(AGREELAB_SCENARIO_DIR) + "/four_state_exact.json"));
    CHECK(r.exact);
    REQUIRE(r.q_alice.size() == 2);
    CHECK(*r.q_alice[0] == 0.5);
    CHECK(*r.q_alice[1] == 0.5);
    CHECK(*r.q_bob[0] == doctest::Approx(1.0 / 3));
    CHECK(*r.q_bob[1] == 1.0);
    CHECK(r.violations == 0);
    CHECK(r.singular_ok);
  }
  SUBCASE("block-rotation example") {
    const RunReport r = run_scenario(
        LoadScenarioFile(std::string(AGREELAB_SCENARIO_DIR) + "/block_rotation.json"));
    const double qb[] = {0.2, 0.2, 0.1, 0.5};
    for (std::size_t j = 0; j < 4; ++j) CHECK(*r.q_bob[j] == doctest::Approx(qb[j]));
    CHECK(r.violations == 0);
  }
  SUBCASE("trivial table") {
    const RunReport r = run_scenario(parse_scenario(R"({"backend": "table",
        "event": [0], "table": {"dims": [1, 1, 1], "p": [1]}})"));
    REQUIRE(r.reports.size() == 1);
    CHECK(r.reports[0].agrees);
    CHECK(r.reports[0].ck_holds);
  }
  SUBCASE("every fixture") {
    for (const auto& entry :
         std::filesystem::directory_iterator(AGREELAB_SCENARIO_DIR)) {
      const RunReport r = run_scenario(LoadScenarioFile(entry.path().string()));
      CAPTURE(entry.path().string());
      CHECK(r.violations == 0);
      CHECK(r.singular_ok);
    }
  }
}

TEST_CASE("WithTolerance") {
  const Scenario s = WithTolerance(parse_scenario(kUniform), 1e-6);
  CHECK(s.tolerance == 1e-6);
  CHECK(s.table->tolerance() == 1e-6);
  CHECK_THROWS_AS(WithTolerance(s, 0.0), Error);
}

TEST_CASE("report emission") {
  SUBCASE("no closures: header only") {
    std::ostringstream os;
    EmitClosureTable({}, os);
    const std::string out = os.str();
    CHECK(std::count(out.begin(), out.end(), '\n') == 1);
    CHECK(Contains(out, "qA"));
  }
  SUBCASE("one closure: every field") {
    CKReport r;
    r.q_alice = r.q_bob = 0.2;
    r.a_star = {0, 1};
    r.b_star = {1};
    r.steps = 2;
    r.ck_holds = r.agrees = true;
    r.mass_a_star = 0.5;
    r.mass_b_star = 0.25;
    r.witness = std::make_pair(std::size_t{1}, std::size_t{1});
    CHECK(ClosureRecord("x", r) ==
          R"({"record":"ck","scenario":"x","q_alice":0.2,"q_bob":0.2,)"
          R"("a_star":[0,1],"b_star":[1],"mass_a_star":0.5,"mass_b_star":0.25,)"
          R"("steps":2,"ck_holds":true,"agrees":true,"witness":[1,1]})");
  }
  SUBCASE("twelve significant digits") {
    CHECK(FormatNumber(1.0 / 3) == "0.333333333333");
    CHECK(FormatNumber(-0.0) == "0");
    CHECK(FormatNumber(1e-13) == "1e-13");
  }
  SUBCASE("format names") {
    CHECK(ParseFormat("records") == ReportFormat::kRecords);
    CHECK_THROWS_AS(ParseFormat("xml"), Error);
  }
}

TEST_CASE("records round trip and determinism") {
  for (const auto& entry :
       std::filesystem::directory_iterator(AGREELAB_SCENARIO_DIR)) {
    CAPTURE(entry.path().string());
    const Scenario s = LoadScenarioFile(entry.path().string());
    const RunReport r = run_scenario(s);
    const std::string text = Records(r, true);
    CHECK(text == Records(run_scenario(s), true));

    const RunReport back = ParseRecords(text);
    CHECK(back.scenario_id == r.scenario_id);
    CHECK(back.backend == r.backend);
    CHECK(back.exact == r.exact);
    CHECK(back.space.total() == r.space.total());
    CHECK(back.event == r.event);
    CHECK(back.violations == r.violations);
    CHECK(back.singular_ok == r.singular_ok);
    REQUIRE(back.joint.size() == r.joint.size());
    for (std::size_t n = 0; n < r.joint.size(); ++n) {
      CHECK(back.joint[n] == doctest::Approx(r.joint[n]).epsilon(1e-11));
    }
    REQUIRE(back.q_alice.size() == r.q_alice.size());
    for (std::size_t n = 0; n < r.q_alice.size(); ++n) {
      CHECK(back.q_alice[n].has_value() == r.q_alice[n].has_value());
    }
    REQUIRE(back.reports.size() == r.reports.size());
    for (std::size_t n = 0; n < r.reports.size(); ++n) {
      const CKReport& a = r.reports[n];
      const CKReport& b = back.reports[n];
      CHECK(b.q_alice == doctest::Approx(a.q_alice).epsilon(1e-11));
      CHECK(b.q_bob == doctest::Approx(a.q_bob).epsilon(1e-11));
      CHECK(b.a_star == a.a_star);
      CHECK(b.b_star == a.b_star);
      CHECK(b.steps == a.steps);
      CHECK(b.ck_holds == a.ck_holds);
      CHECK(b.agrees == a.agrees);
      CHECK(b.witness == a.witness);
      CHECK(b.mass_a_star == doctest::Approx(a.mass_a_star).epsilon(1e-11));
    }
    // Re-emitting the parsed report reproduces the text.
    CHECK(Records(back, true) == text);
  }
  CHECK_THROWS_AS(ParseRecords("{\"record\":\"ck\"}"), Error);
  CHECK_THROWS_AS(ParseRecords(""), Error);
}
