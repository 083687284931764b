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

#ifndef AGREELAB_PROBABILITY_HPP_
#define AGREELAB_PROBABILITY_HPP_

// Finite joint distributions over outcome triples (i, j, k): Alice's outcome
// i, Bob's outcome j and the outcome k of the measurement that defines the
// event of interest. Tables are dense and row-major in (i, j, k).

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "agreelab/errors.hpp"
#include "agreelab/scalar.hpp"

namespace agree {

enum class Axis { kAlice = 0, kBob = 1, kEvent = 2 };

class OutcomeSpace {
 public:
  OutcomeSpace() : OutcomeSpace(1, 1, 1) {}
  OutcomeSpace(std::size_t size_i, std::size_t size_j, std::size_t size_k,
               std::array<std::vector<std::string>, 3> labels = {})
      : sizes_{size_i, size_j, size_k}, labels_(std::move(labels)) {
    for (int a = 0; a < 3; ++a) {
      if (sizes_[a] == 0) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "outcome axis " + std::to_string(a) + " has size 0");
      }
      const auto& l = labels_[a];
      if (l.empty()) continue;
      if (l.size() != sizes_[a]) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "label count does not match axis size");
      }
      if (std::set<std::string>(l.begin(), l.end()).size() != l.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "duplicate axis labels");
      }
    }
  }

  std::size_t size_i() const { return sizes_[0]; }
  std::size_t size_j() const { return sizes_[1]; }
  std::size_t size_k() const { return sizes_[2]; }
  std::size_t size(Axis a) const { return sizes_[static_cast<int>(a)]; }
  std::size_t total() const { return sizes_[0] * sizes_[1] * sizes_[2]; }
  const std::vector<std::string>& labels(Axis a) const {
    return labels_[static_cast<int>(a)];
  }

  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * sizes_[1] + j) * sizes_[2] + k;
  }

  friend bool operator==(const OutcomeSpace& a, const OutcomeSpace& b) {
    return a.sizes_ == b.sizes_;
  }

 private:
  std::array<std::size_t, 3> sizes_;
  std::array<std::vector<std::string>, 3> labels_;
};

// Sorted, duplicate-free set of outcome indices on one axis.
using OutcomeSet = std::vector<std::size_t>;

// Membership mask over one axis. std::nullopt in a Rect means "whole axis".
using Mask = std::vector<char>;

inline Mask ToMask(const OutcomeSet& set, std::size_t n) {
  Mask m(n, 0);
  for (std::size_t x : set) {
    if (x >= n) {
      throw Error(ErrorCode::kDimensionMismatch, "index out of range");
    }
    m[x] = 1;
  }
  return m;
}

inline OutcomeSet FullSet(std::size_t n) {
  OutcomeSet s(n);
  for (std::size_t x = 0; x < n; ++x) s[x] = x;
  return s;
}

// Event of interest: a subset of the K axis.
class Event {
 public:
  Event() = default;
  Event(std::size_t size_k, OutcomeSet members) : size_k_(size_k) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (std::size_t k : members) {
      if (k >= size_k) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "event member " + std::to_string(k) + " outside K");
      }
    }
    members_ = std::move(members);
  }

  std::size_t size_k() const { return size_k_; }
  const OutcomeSet& members() const { return members_; }
  Mask mask() const { return ToMask(members_, size_k_); }
  bool contains(std::size_t k) const {
    return std::binary_search(members_.begin(), members_.end(), k);
  }

  friend bool operator==(const Event&, const Event&) = default;

 private:
  std::size_t size_k_ = 1;
  OutcomeSet members_;
};

// Product set I' x J' x K' of outcome triples.
struct Rect {
  std::optional<Mask> i;
  std::optional<Mask> j;
  std::optional<Mask> k;
};

template <class T>
class BasicJoint {
 public:
  BasicJoint() : space_(), p_{T(1)}, tol_(DefaultTolerance<T>()) {}

  const OutcomeSpace& space() const { return space_; }
  std::size_t size_i() const { return space_.size_i(); }
  std::size_t size_j() const { return space_.size_j(); }
  std::size_t size_k() const { return space_.size_k(); }
  const T& tolerance() const { return tol_; }
  const std::vector<T>& values() const { return p_; }

  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return p_[space_.flat(i, j, k)];
  }

  // Mass of a rectangle of outcome triples.
  T Mass(const Rect& r) const {
    T sum(0);
    for (std::size_t i = 0; i < size_i(); ++i) {
      if (r.i && !(*r.i)[i]) continue;
      for (std::size_t j = 0; j < size_j(); ++j) {
        if (r.j && !(*r.j)[j]) continue;
        const std::size_t base = space_.flat(i, j, 0);
        for (std::size_t k = 0; k < size_k(); ++k) {
          if (r.k && !(*r.k)[k]) continue;
          sum += p_[base + k];
        }
      }
    }
    return sum;
  }

  friend bool operator==(const BasicJoint& a, const BasicJoint& b) {
    return a.space_ == b.space_ && a.p_ == b.p_;
  }

  // Entries in [-tol, 0) are clamped to zero; anything more negative, or a
  // total mass outside [1 - tol, 1 + tol], is rejected.
  static BasicJoint Validate(std::vector<T> raw, const OutcomeSpace& space,
                             T tol) {
    if (raw.size() != space.total()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "table has " + std::to_string(raw.size()) +
                      " entries, outcome space needs " +
                      std::to_string(space.total()));
    }
    T sum(0);
    for (std::size_t n = 0; n < raw.size(); ++n) {
      if (raw[n] < -tol) {
        throw Error(ErrorCode::kNegativeMass,
                    "entry " + std::to_string(n) + " = " +
                        std::to_string(ToDouble(raw[n])));
      }
      if (raw[n] < T(0)) raw[n] = T(0);
      sum += raw[n];
    }
    if (Abs(sum - T(1)) > tol) {
      throw Error(ErrorCode::kNotNormalized,
                  "total mass " + std::to_string(ToDouble(sum)));
    }
    return BasicJoint(space, std::move(raw), tol);
  }

 private:
  BasicJoint(OutcomeSpace space, std::vector<T> p, T tol)
      : space_(std::move(space)), p_(std::move(p)), tol_(tol) {}

  OutcomeSpace space_;
  std::vector<T> p_;
  T tol_;
};

using JointDistribution = BasicJoint<double>;
using ExactJoint = BasicJoint<Rational>;

template <class T>
BasicJoint<T> validate_joint(std::vector<T> raw, const OutcomeSpace& space,
                             T tol = DefaultTolerance<T>()) {
  return BasicJoint<T>::Validate(std::move(raw), space, tol);
}

template <class T>
struct MarginalTable {
  std::vector<Axis> axes;          // retained axes, in (I, J, K) order
  std::vector<std::size_t> dims;   // sizes of the retained axes
  std::vector<T> values;           // row-major over the retained axes
};

template <class T>
MarginalTable<T> marginal(const BasicJoint<T>& p, std::vector<Axis> axes) {
  if (axes.empty()) {
    throw Error(ErrorCode::kEmptyAxes, "marginal needs at least one axis");
  }
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  std::array<bool, 3> keep{false, false, false};
  for (Axis a : axes) keep[static_cast<int>(a)] = true;

  MarginalTable<T> out;
  out.axes = axes;
  std::size_t total = 1;
  for (Axis a : axes) {
    out.dims.push_back(p.space().size(a));
    total *= p.space().size(a);
  }
  out.values.assign(total, T(0));
  for (std::size_t i = 0; i < p.size_i(); ++i) {
    for (std::size_t j = 0; j < p.size_j(); ++j) {
      for (std::size_t k = 0; k < p.size_k(); ++k) {
        const std::array<std::size_t, 3> idx{i, j, k};
        std::size_t flat = 0;
        for (int a = 0; a < 3; ++a) {
          if (keep[a]) flat = flat * p.space().size(static_cast<Axis>(a)) + idx[a];
        }
        out.values[flat] += p(i, j, k);
      }
    }
  }
  return out;
}

// p(target | given). Both rectangles are intersected when they constrain the
// same axis.
template <class T>
T conditional_on(const BasicJoint<T>& p, const Rect& target,
                 const Rect& given) {
  const T denom = p.Mass(given);
  if (!(denom > p.tolerance())) {
    throw Error(ErrorCode::kZeroProbabilityConditioning,
                "conditioning set has mass " +
                    std::to_string(ToDouble(denom)));
  }
  auto meet = [](const std::optional<Mask>& a,
                 const std::optional<Mask>& b) -> std::optional<Mask> {
    if (!a) return b;
    if (!b) return a;
    Mask m(a->size());
    for (std::size_t x = 0; x < m.size(); ++x) m[x] = (*a)[x] && (*b)[x];
    return m;
  };
  const Rect both{meet(target.i, given.i), meet(target.j, given.j),
                  meet(target.k, given.k)};
  return p.Mass(both) / denom;
}

// A subset of one outcome axis, lifted to M by leaving the other axes full.
struct AxisSubset {
  Axis axis;
  OutcomeSet indices;
};

template <class T>
Rect Lift(const BasicJoint<T>& p, const AxisSubset& s) {
  Rect r;
  Mask m = ToMask(s.indices, p.space().size(s.axis));
  switch (s.axis) {
    case Axis::kAlice: r.i = std::move(m); break;
    case Axis::kBob: r.j = std::move(m); break;
    case Axis::kEvent: r.k = std::move(m); break;
  }
  return r;
}

template <class T>
T conditional_prob(const BasicJoint<T>& p, const AxisSubset& target,
                   const AxisSubset& given) {
  return conditional_on(p, Lift(p, target), Lift(p, given));
}

template <class T>
void CheckEvent(const BasicJoint<T>& p, const Event& e) {
  if (e.size_k() != p.size_k()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "event is defined over a K axis of different size");
  }
}

// p(E | i) = sum_{k in E} p(i, k) / p(i).
template <class T>
T posterior_alice(const BasicJoint<T>& p, std::size_t i, const Event& e) {
  CheckEvent(p, e);
  if (i >= p.size_i()) {
    throw Error(ErrorCode::kDimensionMismatch, "Alice index out of range");
  }
  return conditional_on(p, Rect{std::nullopt, std::nullopt, e.mask()},
                        Rect{ToMask({i}, p.size_i()), std::nullopt,
                             std::nullopt});
}

template <class T>
T posterior_bob(const BasicJoint<T>& p, std::size_t j, const Event& e) {
  CheckEvent(p, e);
  if (j >= p.size_j()) {
    throw Error(ErrorCode::kDimensionMismatch, "Bob index out of range");
  }
  return conditional_on(p, Rect{std::nullopt, std::nullopt, e.mask()},
                        Rect{std::nullopt, ToMask({j}, p.size_j()),
                             std::nullopt});
}

template <class T>
std::vector<T> alice_marginal(const BasicJoint<T>& p) {
  return marginal(p, {Axis::kAlice}).values;
}

template <class T>
std::vector<T> bob_marginal(const BasicJoint<T>& p) {
  return marginal(p, {Axis::kBob}).values;
}

template <class T>
T event_probability(const BasicJoint<T>& p, const Event& e) {
  CheckEvent(p, e);
  return p.Mass(Rect{std::nullopt, std::nullopt, e.mask()});
}

}  // namespace agree

#endif  // AGREELAB_PROBABILITY_HPP_
