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

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "agreelab/errors.hpp"
#include "agreelab/scenario.hpp"
#include "json.hpp"

namespace agree {

using nlohmann::json;

ReportFormat ParseFormat(const std::string& s) {
  if (s == "table") return ReportFormat::kTable;
  if (s == "records") return ReportFormat::kRecords;
  throw Error(ErrorCode::kParseError,
              "format must be \"table\" or \"records\", got \"" + s + "\"");
}

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "null";
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

std::string Quote(const std::string& s) { return json(s).dump(); }

std::string IndexList(const OutcomeSet& s) {
  std::string out = "[";
  for (std::size_t n = 0; n < s.size(); ++n) {
    out += (n ? "," : "") + std::to_string(s[n]);
  }
  return out + "]";
}

std::string OptionalList(const std::vector<std::optional<double>>& v) {
  std::string out = "[";
  for (std::size_t n = 0; n < v.size(); ++n) {
    out += (n ? "," : "");
    out += v[n] ? FormatNumber(*v[n]) : "null";
  }
  return out + "]";
}

std::string NumberList(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t n = 0; n < v.size(); ++n) {
    out += (n ? "," : "") + FormatNumber(v[n]);
  }
  return out + "]";
}

std::string SetText(const OutcomeSet& s) {
  std::string out = "{";
  for (std::size_t n = 0; n < s.size(); ++n) {
    out += (n ? "," : "") + std::to_string(s[n]);
  }
  return out + "}";
}

std::string PosteriorText(const std::vector<std::optional<double>>& v) {
  std::string out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    out += (n ? "  " : "");
    out += v[n] ? FormatNumber(*v[n]) : "-";
  }
  return out;
}

}  // namespace

std::string ClosureRecord(const std::string& scenario_id, const CKReport& r) {
  std::ostringstream os;
  os << "{\"record\":\"ck\",\"scenario\":" << Quote(scenario_id)
     << ",\"q_alice\":" << FormatNumber(r.q_alice)
     << ",\"q_bob\":" << FormatNumber(r.q_bob)
     << ",\"a_star\":" << IndexList(r.a_star)
     << ",\"b_star\":" << IndexList(r.b_star)
     << ",\"mass_a_star\":" << FormatNumber(r.mass_a_star)
     << ",\"mass_b_star\":" << FormatNumber(r.mass_b_star)
     << ",\"steps\":" << r.steps
     << ",\"ck_holds\":" << (r.ck_holds ? "true" : "false")
     << ",\"agrees\":" << (r.agrees ? "true" : "false") << ",\"witness\":";
  if (r.witness) {
    os << "[" << r.witness->first << "," << r.witness->second << "]";
  } else {
    os << "null";
  }
  os << "}";
  return os.str();
}

void EmitClosureTable(const std::vector<CKReport>& reports, std::ostream& out) {
  out << std::left << std::setw(16) << "qA" << std::setw(16) << "qB"
      << std::setw(14) << "A*" << std::setw(14) << "B*" << std::setw(16)
      << "mass(A*)" << std::setw(16) << "mass(B*)" << std::setw(7) << "steps"
      << std::setw(5) << "ck" << "agrees\n";
  for (const CKReport& r : reports) {
    out << std::left << std::setw(16) << FormatNumber(r.q_alice)
        << std::setw(16) << FormatNumber(r.q_bob) << std::setw(14)
        << SetText(r.a_star) << std::setw(14) << SetText(r.b_star)
        << std::setw(16) << FormatNumber(r.mass_a_star) << std::setw(16)
        << FormatNumber(r.mass_b_star) << std::setw(7) << r.steps
        << std::setw(5) << (r.ck_holds ? "yes" : "no")
        << (r.agrees ? "yes" : "no") << "\n";
  }
}

void emit_report(const RunReport& r, ReportFormat format, std::ostream& out,
                 bool echo_joint) {
  if (format == ReportFormat::kRecords) {
    out << "{\"record\":\"run\",\"scenario\":" << Quote(r.scenario_id)
        << ",\"backend\":" << Quote(BackendName(r.backend))
        << ",\"exact\":" << (r.exact ? "true" : "false") << ",\"dims\":["
        << r.space.size_i() << "," << r.space.size_j() << ","
        << r.space.size_k() << "],\"event\":" << IndexList(r.event.members())
        << ",\"q_alice\":" << OptionalList(r.q_alice)
        << ",\"q_bob\":" << OptionalList(r.q_bob)
        << ",\"closures\":" << r.reports.size()
        << ",\"violations\":" << r.violations
        << ",\"singular_ok\":" << (r.singular_ok ? "true" : "false");
    if (echo_joint) out << ",\"joint\":" << NumberList(r.joint);
    out << "}\n";
    for (const CKReport& c : r.reports) {
      out << ClosureRecord(r.scenario_id, c) << "\n";
    }
    return;
  }

  out << "scenario " << r.scenario_id << "  backend " << BackendName(r.backend)
      << (r.exact ? " (exact)" : "") << "  outcomes " << r.space.size_i()
      << "x" << r.space.size_j() << "x" << r.space.size_k() << "  event "
      << SetText(r.event.members()) << "\n";
  if (echo_joint) {
    out << "p(i,j,k):\n";
    for (std::size_t i = 0; i < r.space.size_i(); ++i) {
      for (std::size_t j = 0; j < r.space.size_j(); ++j) {
        for (std::size_t k = 0; k < r.space.size_k(); ++k) {
          out << "  " << i << " " << j << " " << k << "  "
              << FormatNumber(r.joint[r.space.flat(i, j, k)]) << "\n";
        }
      }
    }
  }
  out << "q_A(i): " << PosteriorText(r.q_alice) << "\n";
  out << "q_B(j): " << PosteriorText(r.q_bob) << "\n";
  EmitClosureTable(r.reports, out);
  out << "violations " << r.violations << "  singular disagreement "
      << (r.singular_ok ? "none" : "FOUND") << "  duration "
      << FormatNumber(r.duration_ms) << " ms\n";
}

namespace {

std::vector<std::size_t> Indices(const json& v) {
  return v.get<std::vector<std::size_t>>();
}

double Number(const json& v) { return v.is_null() ? NAN : v.get<double>(); }

}  // namespace

RunReport ParseRecords(const std::string& text) {
  RunReport r;
  std::istringstream in(text);
  std::string line;
  bool saw_run = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
      const std::string kind = rec.at("record").get<std::string>();
      if (kind == "run") {
        saw_run = true;
        r.scenario_id = rec.at("scenario").get<std::string>();
        r.backend = ParseBackend(rec.at("backend").get<std::string>());
        r.exact = rec.at("exact").get<bool>();
        const auto dims = Indices(rec.at("dims"));
        r.space = OutcomeSpace(dims.at(0), dims.at(1), dims.at(2));
        r.event = Event(dims.at(2), Indices(rec.at("event")));
        r.q_alice.clear();
        for (const json& x : rec.at("q_alice")) {
          r.q_alice.push_back(x.is_null() ? std::nullopt
                                          : std::optional<double>(x.get<double>()));
        }
        r.q_bob.clear();
        for (const json& x : rec.at("q_bob")) {
          r.q_bob.push_back(x.is_null() ? std::nullopt
                                        : std::optional<double>(x.get<double>()));
        }
        r.violations = rec.at("violations").get<std::size_t>();
        r.singular_ok = rec.at("singular_ok").get<bool>();
        if (rec.contains("joint")) {
          r.joint = rec.at("joint").get<std::vector<double>>();
        }
      } else if (kind == "ck") {
        CKReport c;
        c.q_alice = Number(rec.at("q_alice"));
        c.q_bob = Number(rec.at("q_bob"));
        c.a_star = Indices(rec.at("a_star"));
        c.b_star = Indices(rec.at("b_star"));
        c.mass_a_star = Number(rec.at("mass_a_star"));
        c.mass_b_star = Number(rec.at("mass_b_star"));
        c.steps = rec.at("steps").get<std::size_t>();
        c.ck_holds = rec.at("ck_holds").get<bool>();
        c.agrees = rec.at("agrees").get<bool>();
        if (!rec.at("witness").is_null()) {
          const auto w = Indices(rec.at("witness"));
          c.witness = std::make_pair(w.at(0), w.at(1));
        }
        r.reports.push_back(std::move(c));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  "record line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_run) throw Error(ErrorCode::kParseError, "no run record");
  return r;
}

}  // namespace agree
