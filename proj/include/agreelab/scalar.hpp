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

#ifndef AGREELAB_SCALAR_HPP_
#define AGREELAB_SCALAR_HPP_

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace agree {

// Exact probabilities for the classical backend. All probability code is
// templated on the scalar; with Rational the tolerance is zero and every
// comparison is exact.
using Rational = boost::rational<std::int64_t>;

inline double ToDouble(double x) { return x; }
inline double ToDouble(const Rational& x) {
  return boost::rational_cast<double>(x);
}

inline double Abs(double x) { return std::abs(x); }
inline Rational Abs(const Rational& x) { return boost::abs(x); }

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double DefaultTolerance() { return 1e-9; }
};

template <>
struct ScalarTraits<Rational> {
  static Rational DefaultTolerance() { return Rational(0); }
};

template <class T>
T DefaultTolerance() {
  return ScalarTraits<T>::DefaultTolerance();
}

// Parses "a/b", an integer, or a plain decimal such as "0.125", exactly.
Rational ParseRational(const std::string& text);

std::string ToString(const Rational& x);

}  // namespace agree

#endif  // AGREELAB_SCALAR_HPP_
