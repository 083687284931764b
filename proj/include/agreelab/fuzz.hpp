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

#ifndef AGREELAB_FUZZ_HPP_
#define AGREELAB_FUZZ_HPP_

// Randomized search for agreement violations. Trial t of a run with seed s is
// a pure function of (s, t), so a failing trial can be replayed on its own.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agreelab/probability.hpp"

namespace agree {

enum class FuzzBackend { kClassical, kQuantum, kProcess, kTable };

std::string FuzzBackendName(FuzzBackend b);
FuzzBackend ParseFuzzBackend(const std::string& s);

struct FuzzOptions {
  FuzzBackend backend = FuzzBackend::kQuantum;
  std::size_t trials = 100;
  std::size_t max_dim = 4;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

struct FuzzTrial {
  std::size_t index = 0;
  std::string kind;  // generator branch, e.g. "quantum AEB", "process mixture"
  std::string description;
  JointDistribution joint;
  Event event;
};

FuzzTrial GenerateTrial(const FuzzOptions& opts, std::size_t index);

struct TrialOutcome {
  std::size_t index = 0;
  std::string kind;
  std::string description;
  std::size_t closures = 0;
  std::size_t violations = 0;
  bool singular_ok = true;
  std::size_t max_steps = 0;
  std::size_t step_bound = 0;  // |I| + |J|
  std::vector<std::size_t> closure_sizes;  // |A*| + |B*| per closure
  std::string error;  // nonempty when generation or evaluation threw

  bool Failed() const {
    return violations > 0 || !singular_ok || max_steps > step_bound ||
           !error.empty();
  }
};

TrialOutcome EvaluateTrial(const FuzzTrial& trial, double tol);

struct FuzzFailure {
  std::size_t index = 0;
  std::string description;
  std::string reason;
};

struct FuzzSummary {
  std::size_t trials = 0;
  std::size_t closures = 0;
  std::size_t violations = 0;
  std::size_t singular_witnesses = 0;
  std::size_t step_bound_breaches = 0;
  std::size_t errors = 0;
  std::size_t max_steps = 0;
  std::map<std::size_t, std::size_t> closure_size_histogram;
  std::map<std::string, std::size_t> kind_counts;
  std::vector<FuzzFailure> failures;  // in trial order

  bool Clean() const { return failures.empty(); }
  friend bool operator==(const FuzzSummary&, const FuzzSummary&);
};

// Trials run in parallel; outcomes are merged in trial order, so the summary
// is identical to fuzz_search_serial for the same options.
FuzzSummary fuzz_search(const FuzzOptions& opts);
FuzzSummary fuzz_search_serial(const FuzzOptions& opts);

}  // namespace agree

#endif  // AGREELAB_FUZZ_HPP_
