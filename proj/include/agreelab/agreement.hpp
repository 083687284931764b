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

#ifndef AGREELAB_AGREEMENT_HPP_
#define AGREELAB_AGREEMENT_HPP_

// Common knowledge of posteriors over a joint outcome distribution.
//
// Starting from the level sets A_0 = {i : p(E|i) = qA}, B_0 = {j : p(E|j) =
// qB}, each step keeps the outcomes whose holder is certain the other agent's
// outcome lies in the other current set:
//
//   A_{n+1} = {i in A_n : p(B_n | i) = 1},  B_{n+1} = {j in B_n : p(A_n | j) = 1}
//
// The posteriors are common knowledge at (i, j) when (i, j) lies in every
// A_n x B_n. Outcome sets are finite and the iteration is monotone, so the
// fixed point (A*, B*) is reached after at most |I| + |J| strict shrinks.
//
// Everything here is templated on the scalar: double with a tolerance, or
// Rational with tolerance zero for exact cross-checks.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "agreelab/classical.hpp"
#include "agreelab/errors.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/scalar.hpp"

namespace agree {

struct CKState {
  OutcomeSet a;
  OutcomeSet b;
  std::size_t n = 0;

  friend bool operator==(const CKState&, const CKState&) = default;
};

template <class T>
struct BasicCKReport {
  T q_alice{};
  T q_bob{};
  OutcomeSet a_star;
  OutcomeSet b_star;
  std::size_t steps = 0;
  bool ck_holds = false;
  bool agrees = false;
  T mass_a_star{};
  T mass_b_star{};
  // First positive-mass pair of A* x B* in (i, j) order, when one exists.
  std::optional<std::pair<std::size_t, std::size_t>> witness;

  bool IsViolation() const { return ck_holds && !agrees; }
};

using CKReport = BasicCKReport<double>;

template <class T>
Rect AliceRect(const BasicJoint<T>& p, const OutcomeSet& a) {
  return Rect{ToMask(a, p.size_i()), std::nullopt, std::nullopt};
}

template <class T>
Rect BobRect(const BasicJoint<T>& p, const OutcomeSet& b) {
  return Rect{std::nullopt, ToMask(b, p.size_j()), std::nullopt};
}

// Level sets of the posteriors. Outcomes without mass have no posterior and
// are never included.
template <class T>
std::pair<OutcomeSet, OutcomeSet> initial_sets(const BasicJoint<T>& p,
                                               const Event& e,
                                               const T& q_alice,
                                               const T& q_bob, const T& tol) {
  CheckEvent(p, e);
  const std::vector<T> pa = alice_marginal(p);
  const std::vector<T> pb = bob_marginal(p);
  OutcomeSet a0, b0;
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    if (pa[i] > tol && Abs(posterior_alice(p, i, e) - q_alice) <= tol) {
      a0.push_back(i);
    }
  }
  for (std::size_t j = 0; j < p.size_j(); ++j) {
    if (pb[j] > tol && Abs(posterior_bob(p, j, e) - q_bob) <= tol) {
      b0.push_back(j);
    }
  }
  return {std::move(a0), std::move(b0)};
}

// One knowledge step. "Certain" means conditional probability >= 1 - tol.
template <class T>
CKState ck_step(const BasicJoint<T>& p, const CKState& s, const T& tol) {
  CKState next;
  next.n = s.n + 1;
  const Rect in_b = BobRect(p, s.b);
  const Rect in_a = AliceRect(p, s.a);
  for (std::size_t i : s.a) {
    if (conditional_on(p, in_b, AliceRect(p, {i})) >= T(1) - tol) {
      next.a.push_back(i);
    }
  }
  for (std::size_t j : s.b) {
    if (conditional_on(p, in_a, BobRect(p, {j})) >= T(1) - tol) {
      next.b.push_back(j);
    }
  }
  return next;
}

template <class T>
BasicCKReport<T> ck_closure(const BasicJoint<T>& p, const Event& e,
                            const T& q_alice, const T& q_bob, const T& tol) {
  auto [a0, b0] = initial_sets(p, e, q_alice, q_bob, tol);
  CKState s{std::move(a0), std::move(b0), 0};
  while (true) {
    CKState next = ck_step(p, s, tol);
    if (next.a == s.a && next.b == s.b) break;
    s = std::move(next);
  }

  BasicCKReport<T> r;
  r.q_alice = q_alice;
  r.q_bob = q_bob;
  r.steps = s.n;
  r.mass_a_star = s.a.empty() ? T(0) : p.Mass(AliceRect(p, s.a));
  r.mass_b_star = s.b.empty() ? T(0) : p.Mass(BobRect(p, s.b));
  r.ck_holds = !s.a.empty() && !s.b.empty() && r.mass_a_star > tol &&
               r.mass_b_star > tol;
  r.agrees = Abs(q_alice - q_bob) <= tol;
  for (std::size_t i : s.a) {
    if (r.witness) break;
    for (std::size_t j : s.b) {
      if (p.Mass(Rect{ToMask({i}, p.size_i()), ToMask({j}, p.size_j()),
                      std::nullopt}) > tol) {
        r.witness = std::make_pair(i, j);
        break;
      }
    }
  }
  r.a_star = std::move(s.a);
  r.b_star = std::move(s.b);
  return r;
}

template <class T>
bool is_common_knowledge(const BasicJoint<T>& p, const Event& e,
                         std::size_t i, std::size_t j, const T& tol) {
  const T qa = posterior_alice(p, i, e);
  const T qb = posterior_bob(p, j, e);
  const BasicCKReport<T> r = ck_closure(p, e, qa, qb, tol);
  return std::binary_search(r.a_star.begin(), r.a_star.end(), i) &&
         std::binary_search(r.b_star.begin(), r.b_star.end(), j);
}

namespace internal {

// Distinct posterior values, clustered: sorted values closer than tol to the
// first member of a cluster collapse onto it.
template <class T>
std::vector<T> ClusterValues(std::vector<T> values, const T& tol) {
  std::sort(values.begin(), values.end());
  std::vector<T> reps;
  for (const T& v : values) {
    if (reps.empty() || v - reps.back() > tol) reps.push_back(v);
  }
  return reps;
}

template <class T>
std::vector<T> AttainedAlicePosteriors(const BasicJoint<T>& p, const Event& e,
                                       const T& tol) {
  const std::vector<T> pa = alice_marginal(p);
  std::vector<T> vals;
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    if (pa[i] > tol) vals.push_back(posterior_alice(p, i, e));
  }
  return ClusterValues(std::move(vals), tol);
}

template <class T>
std::vector<T> AttainedBobPosteriors(const BasicJoint<T>& p, const Event& e,
                                     const T& tol) {
  const std::vector<T> pb = bob_marginal(p);
  std::vector<T> vals;
  for (std::size_t j = 0; j < p.size_j(); ++j) {
    if (pb[j] > tol) vals.push_back(posterior_bob(p, j, e));
  }
  return ClusterValues(std::move(vals), tol);
}

}  // namespace internal

// Runs the closure for every pair of attained (clustered) posteriors. A report
// with ck_holds && !agrees would contradict the agreement theorem.
template <class T>
std::vector<BasicCKReport<T>> verify_agreement(const BasicJoint<T>& p,
                                               const Event& e, const T& tol) {
  CheckEvent(p, e);
  const std::vector<T> qas = internal::AttainedAlicePosteriors(p, e, tol);
  const std::vector<T> qbs = internal::AttainedBobPosteriors(p, e, tol);
  std::vector<BasicCKReport<T>> reports;
  reports.reserve(qas.size() * qbs.size());
  for (const T& qa : qas) {
    for (const T& qb : qbs) reports.push_back(ck_closure(p, e, qa, qb, tol));
  }
  return reports;
}

template <class T>
std::size_t CountViolations(const std::vector<BasicCKReport<T>>& reports) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(),
                    [](const auto& r) { return r.IsViolation(); }));
}

// True when no positive-mass pair in a common-knowledge closure has Alice
// certain of E and Bob certain of its complement. Bob's posterior 0 at j
// forces p(i, j, E) = 0 for every i, so this holds for any genuine joint
// distribution.
template <class T>
bool singular_disagreement_check(const BasicJoint<T>& p, const Event& e,
                                 const T& tol) {
  CheckEvent(p, e);
  const std::vector<T> qas = internal::AttainedAlicePosteriors(p, e, tol);
  const std::vector<T> qbs = internal::AttainedBobPosteriors(p, e, tol);
  const bool alice_certain =
      std::any_of(qas.begin(), qas.end(),
                  [&](const T& q) { return Abs(q - T(1)) <= tol; });
  const bool bob_excludes = std::any_of(
      qbs.begin(), qbs.end(), [&](const T& q) { return Abs(q) <= tol; });
  if (!alice_certain || !bob_excludes) return true;
  const BasicCKReport<T> r = ck_closure(p, e, T(1), T(0), tol);
  return !r.witness.has_value();
}

template <class T>
struct BasicProtocolRound {
  T alice_announces{};
  OutcomeSet alice_consistent;  // Alice outcomes consistent with her announcement
  T bob_announces{};
  OutcomeSet bob_consistent;
};

template <class T>
struct BasicProtocolTranscript {
  std::vector<BasicProtocolRound<T>> rounds;
  T final_alice{};
  T final_bob{};
  // Terminal public consistency rectangle I' x J'.
  OutcomeSet alice_set;
  OutcomeSet bob_set;
};

using ProtocolTranscript = BasicProtocolTranscript<double>;

// Alternating public announcements. Publicly it is known that the outcome
// pair lies in I' x J' (initially I x J). Alice announces p(E | i, J'); every
// i' in I' whose announcement would differ is ruled out. Bob then announces
// p(E | I', j) and J' is refined the same way. The protocol stops after a
// round that rules nothing out; at that point every outcome in I' (resp. J')
// announces the same value, so both equal p(E | I' x J').
template <class T>
BasicProtocolTranscript<T> dynamic_protocol(const BasicJoint<T>& p,
                                            const Event& e, std::size_t i,
                                            std::size_t j,
                                            std::size_t max_rounds,
                                            const T& tol) {
  CheckEvent(p, e);
  if (i >= p.size_i() || j >= p.size_j()) {
    throw Error(ErrorCode::kDimensionMismatch, "outcome index out of range");
  }
  const Rect pair{ToMask({i}, p.size_i()), ToMask({j}, p.size_j()),
                  std::nullopt};
  if (!(p.Mass(pair) > tol)) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "observed outcome pair has no prior mass");
  }
  const Rect in_e{std::nullopt, std::nullopt, e.mask()};
  auto posterior = [&](const Mask& is, const Mask& js) {
    return conditional_on(p, in_e, Rect{is, js, std::nullopt});
  };
  auto mass = [&](const Mask& is, const Mask& js) {
    return p.Mass(Rect{is, js, std::nullopt});
  };
  auto to_set = [](const Mask& m) {
    OutcomeSet s;
    for (std::size_t x = 0; x < m.size(); ++x) {
      if (m[x]) s.push_back(x);
    }
    return s;
  };

  Mask is(p.size_i(), 1);
  Mask js(p.size_j(), 1);
  BasicProtocolTranscript<T> out;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    BasicProtocolRound<T> rec;
    bool changed = false;

    rec.alice_announces = posterior(ToMask({i}, p.size_i()), js);
    for (std::size_t x = 0; x < p.size_i(); ++x) {
      if (!is[x]) continue;
      const Mask single = ToMask({x}, p.size_i());
      const bool keep =
          mass(single, js) > tol &&
          Abs(posterior(single, js) - rec.alice_announces) <= tol;
      if (!keep) {
        is[x] = 0;
        changed = true;
      }
    }
    rec.alice_consistent = to_set(is);

    rec.bob_announces = posterior(is, ToMask({j}, p.size_j()));
    for (std::size_t y = 0; y < p.size_j(); ++y) {
      if (!js[y]) continue;
      const Mask single = ToMask({y}, p.size_j());
      const bool keep = mass(is, single) > tol &&
                        Abs(posterior(is, single) - rec.bob_announces) <= tol;
      if (!keep) {
        js[y] = 0;
        changed = true;
      }
    }
    rec.bob_consistent = to_set(js);
    out.rounds.push_back(std::move(rec));

    if (!changed) {
      out.final_alice = out.rounds.back().alice_announces;
      out.final_bob = out.rounds.back().bob_announces;
      out.alice_set = to_set(is);
      out.bob_set = to_set(js);
      return out;
    }
  }
  throw Error(ErrorCode::kNoConvergence,
              "announcements still changing after " +
                  std::to_string(max_rounds) + " rounds");
}

// Treats the outcome triples themselves as states of the world: state
// (i, j, k) has prior p(i, j, k), Alice's cell is {i} x J x K, Bob's
// I x {j} x K, and the event is I x J x E.
template <class T>
BasicClassicalModel<T> as_effective_state_space(const BasicJoint<T>& p,
                                                const Event& e) {
  CheckEvent(p, e);
  const std::size_t n = p.space().total();
  std::vector<std::size_t> alice(n), bob(n), meas(n);
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    for (std::size_t j = 0; j < p.size_j(); ++j) {
      for (std::size_t k = 0; k < p.size_k(); ++k) {
        const std::size_t w = p.space().flat(i, j, k);
        alice[w] = i;
        bob[w] = j;
        meas[w] = k;
      }
    }
  }
  return BasicClassicalModel<T>(p.values(), Partition(std::move(alice)),
                                Partition(std::move(bob)),
                                Partition(std::move(meas)), e.members(),
                                p.tolerance());
}

}  // namespace agree

#endif  // AGREELAB_AGREEMENT_HPP_
