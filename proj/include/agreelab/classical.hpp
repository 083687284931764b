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

#ifndef AGREELAB_CLASSICAL_HPP_
#define AGREELAB_CLASSICAL_HPP_

// Finite ontic state spaces with partitional information. Each agent's
// measurement is a partition of the state space; the third measurement is a
// partition too, and the event of interest is a union of its cells.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "agreelab/errors.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/scalar.hpp"

namespace agree {

enum class Agent { kAlice, kBob };

// Partition of {0, ..., n-1} given as one cell index per state. Cells are
// numbered 0..num_cells-1 and none of them is empty.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::size_t> cell_of)
      : cell_of_(std::move(cell_of)) {
    if (cell_of_.empty()) {
      throw Error(ErrorCode::kInvalidModel, "partition over an empty set");
    }
    num_cells_ = *std::max_element(cell_of_.begin(), cell_of_.end()) + 1;
    std::vector<char> used(num_cells_, 0);
    for (std::size_t c : cell_of_) used[c] = 1;
    for (std::size_t c = 0; c < num_cells_; ++c) {
      if (!used[c]) {
        throw Error(ErrorCode::kInvalidModel,
                    "partition cell " + std::to_string(c) + " is empty");
      }
    }
  }

  // Every state in its own cell.
  static Partition Discrete(std::size_t n) { return Partition(FullSet(n)); }
  // A single cell holding every state.
  static Partition Trivial(std::size_t n) {
    return Partition(std::vector<std::size_t>(n, 0));
  }

  std::size_t num_states() const { return cell_of_.size(); }
  std::size_t num_cells() const { return num_cells_; }
  std::size_t cell_of(std::size_t omega) const { return cell_of_[omega]; }
  const std::vector<std::size_t>& assignment() const { return cell_of_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> cell_of_;
  std::size_t num_cells_ = 0;
};

template <class T>
class BasicClassicalModel {
 public:
  BasicClassicalModel(std::vector<T> prior, Partition alice, Partition bob,
                      Partition measurement, OutcomeSet event_cells,
                      T tol = DefaultTolerance<T>())
      : prior_(std::move(prior)),
        alice_(std::move(alice)),
        bob_(std::move(bob)),
        measurement_(std::move(measurement)),
        tol_(tol) {
    const std::size_t n = prior_.size();
    if (n == 0) throw Error(ErrorCode::kInvalidModel, "no states");
    if (alice_.num_states() != n || bob_.num_states() != n ||
        measurement_.num_states() != n) {
      throw Error(ErrorCode::kInvalidModel,
                  "partitions must assign a cell to each of the " +
                      std::to_string(n) + " states");
    }
    T sum(0);
    for (const T& w : prior_) {
      if (w < T(0)) throw Error(ErrorCode::kInvalidModel, "negative prior");
      sum += w;
    }
    if (Abs(sum - T(1)) > tol_) {
      throw Error(ErrorCode::kInvalidModel,
                  "prior sums to " + std::to_string(ToDouble(sum)));
    }
    std::sort(event_cells.begin(), event_cells.end());
    event_cells.erase(std::unique(event_cells.begin(), event_cells.end()),
                      event_cells.end());
    for (std::size_t c : event_cells) {
      if (c >= measurement_.num_cells()) {
        throw Error(ErrorCode::kInvalidModel,
                    "event cell " + std::to_string(c) + " does not exist");
      }
    }
    event_cells_ = std::move(event_cells);
  }

  std::size_t num_states() const { return prior_.size(); }
  const std::vector<T>& prior() const { return prior_; }
  const Partition& alice() const { return alice_; }
  const Partition& bob() const { return bob_; }
  const Partition& partition(Agent a) const {
    return a == Agent::kAlice ? alice_ : bob_;
  }
  const Partition& measurement() const { return measurement_; }
  const OutcomeSet& event_cells() const { return event_cells_; }
  const T& tolerance() const { return tol_; }

  bool InEvent(std::size_t omega) const {
    return std::binary_search(event_cells_.begin(), event_cells_.end(),
                              measurement_.cell_of(omega));
  }

  T CellMass(Agent a, std::size_t cell) const {
    T m(0);
    const Partition& part = partition(a);
    for (std::size_t w = 0; w < num_states(); ++w) {
      if (part.cell_of(w) == cell) m += prior_[w];
    }
    return m;
  }

 private:
  std::vector<T> prior_;
  Partition alice_;
  Partition bob_;
  Partition measurement_;
  OutcomeSet event_cells_;
  T tol_;
};

using ClassicalModel = BasicClassicalModel<double>;
using ExactClassicalModel = BasicClassicalModel<Rational>;

// p(E ∩ cell) / p(cell) for one agent's partition cell.
template <class T>
T classical_posterior(const BasicClassicalModel<T>& m, Agent agent,
                      std::size_t cell) {
  const Partition& part = m.partition(agent);
  if (cell >= part.num_cells()) {
    throw Error(ErrorCode::kInvalidState, "no such partition cell");
  }
  T joint(0);
  T mass(0);
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    if (part.cell_of(w) != cell) continue;
    mass += m.prior()[w];
    if (m.InEvent(w)) joint += m.prior()[w];
  }
  if (!(mass > m.tolerance())) {
    throw Error(ErrorCode::kZeroMassCell,
                "cell " + std::to_string(cell) + " has no prior mass");
  }
  return joint / mass;
}

namespace internal {

// States of `part`-cells whose posterior equals q. Cells without mass carry
// no posterior and contribute no states.
template <class T>
std::vector<char> LevelSet(const BasicClassicalModel<T>& m, Agent agent,
                           const T& q) {
  const Partition& part = m.partition(agent);
  std::vector<char> cell_in(part.num_cells(), 0);
  for (std::size_t c = 0; c < part.num_cells(); ++c) {
    if (!(m.CellMass(agent, c) > m.tolerance())) continue;
    cell_in[c] = Abs(classical_posterior(m, agent, c) - q) <= m.tolerance();
  }
  std::vector<char> out(m.num_states());
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    out[w] = cell_in[part.cell_of(w)];
  }
  return out;
}

// {w in from : Π(w) ∩ supp(p) ⊆ within}. Null states are ignored, so the
// inclusion is the almost-sure one; with a full-support prior it is plain
// set inclusion.
template <class T>
std::vector<char> KnowsStep(const BasicClassicalModel<T>& m, Agent agent,
                            const std::vector<char>& from,
                            const std::vector<char>& within) {
  const Partition& part = m.partition(agent);
  std::vector<char> cell_ok(part.num_cells(), 1);
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    if (m.prior()[w] > m.tolerance() && !within[w]) {
      cell_ok[part.cell_of(w)] = 0;
    }
  }
  std::vector<char> out(m.num_states());
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    out[w] = from[w] && cell_ok[part.cell_of(w)];
  }
  return out;
}

}  // namespace internal

// Common knowledge of the posteriors (qA, qB) at state omega: omega lies in
// every A_n and B_n of the iterated knowledge sets. The sets shrink
// monotonically, so the loop stops within |Ω| steps.
template <class T>
bool classical_ck_at(const BasicClassicalModel<T>& m, std::size_t omega,
                     const T& q_alice, const T& q_bob) {
  if (omega >= m.num_states()) {
    throw Error(ErrorCode::kInvalidState,
                "state " + std::to_string(omega) + " out of range");
  }
  for (Agent a : {Agent::kAlice, Agent::kBob}) {
    if (!(m.CellMass(a, m.partition(a).cell_of(omega)) > m.tolerance())) {
      throw Error(ErrorCode::kZeroMassCell,
                  "posterior undefined at state " + std::to_string(omega));
    }
  }
  std::vector<char> a = internal::LevelSet(m, Agent::kAlice, q_alice);
  std::vector<char> b = internal::LevelSet(m, Agent::kBob, q_bob);
  while (true) {
    if (!a[omega] || !b[omega]) return false;
    std::vector<char> a_next = internal::KnowsStep(m, Agent::kAlice, a, b);
    std::vector<char> b_next = internal::KnowsStep(m, Agent::kBob, b, a);
    if (a_next == a && b_next == b) return true;
    a = std::move(a_next);
    b = std::move(b_next);
  }
}

template <class T>
struct EmbeddedModel {
  BasicJoint<T> joint;
  Event event;
};

// p(i, j, k) = sum of the prior over Π_i^A ∩ Π_j^B ∩ Π_k^E.
template <class T>
EmbeddedModel<T> embed_classical(const BasicClassicalModel<T>& m) {
  const OutcomeSpace space(m.alice().num_cells(), m.bob().num_cells(),
                           m.measurement().num_cells());
  std::vector<T> table(space.total(), T(0));
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    table[space.flat(m.alice().cell_of(w), m.bob().cell_of(w),
                     m.measurement().cell_of(w))] += m.prior()[w];
  }
  return {validate_joint(std::move(table), space, m.tolerance()),
          Event(space.size_k(), m.event_cells())};
}

}  // namespace agree

#endif  // AGREELAB_CLASSICAL_HPP_
