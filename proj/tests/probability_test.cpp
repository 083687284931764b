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

#include "agreelab/probability.hpp"

#include <vector>

#include "agreelab/errors.hpp"
#include "agreelab/quantum.hpp"
#include "doctest.h"

using namespace agree;

namespace {

JointDistribution Uniform222() {
  return validate_joint(std::vector<double>(8, 0.125), OutcomeSpace(2, 2, 2));
}

JointDistribution PointMass() {
  std::vector<double> t(8, 0.0);
  t[0] = 1.0;
  return validate_joint(t, OutcomeSpace(2, 2, 2));
}

// Four equally likely states; see classical_test.cpp for the model.
JointDistribution FourState() {
  const OutcomeSpace s(2, 2, 2);
  std::vector<double> t(8, 0.0);
  t[s.flat(0, 0, 0)] = t[s.flat(0, 0, 1)] = 0.25;
  t[s.flat(1, 0, 1)] = t[s.flat(1, 1, 0)] = 0.25;
  return validate_joint(t, s);
}

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kParseError;
}

}  // namespace

TEST_CASE("outcome space rejects empty axes and bad labels") {
  CHECK(CodeOf([] { OutcomeSpace(0, 1, 1); }) == ErrorCode::kDimensionMismatch);
  CHECK(CodeOf([] { OutcomeSpace(2, 1, 1, {{{"x", "x"}, {}, {}}}); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(CodeOf([] { OutcomeSpace(2, 1, 1, {{{"x"}, {}, {}}}); }) ==
        ErrorCode::kDimensionMismatch);
  const OutcomeSpace s(2, 3, 4);
  CHECK(s.total() == 24);
  CHECK(s.flat(1, 2, 3) == 23);
}

TEST_CASE("validate_joint") {
  SUBCASE("uniform table accepted") { CHECK(Uniform222()(1, 1, 1) == 0.125); }
  SUBCASE("tiny negative entry clamped") {
    std::vector<double> t(8, 0.125);
    t[3] = -1e-15;
    t[4] = 0.25 + 1e-15;
    const JointDistribution p = validate_joint(t, OutcomeSpace(2, 2, 2));
    CHECK(p.values()[3] == 0.0);
  }
  SUBCASE("mass deficit") {
    std::vector<double> t(8, 0.9 / 8);
    CHECK(CodeOf([&] { validate_joint(t, OutcomeSpace(2, 2, 2), 1e-9); }) ==
          ErrorCode::kNotNormalized);
  }
  SUBCASE("negative entry") {
    std::vector<double> t(8, 0.125);
    t[0] = -0.1;
    t[1] = 0.35;
    CHECK(CodeOf([&] { validate_joint(t, OutcomeSpace(2, 2, 2)); }) ==
          ErrorCode::kNegativeMass);
  }
  SUBCASE("wrong size") {
    CHECK(CodeOf([] {
            validate_joint(std::vector<double>(7, 1.0 / 7), OutcomeSpace(2, 2, 2));
          }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("exact rationals") {
    std::vector<Rational> t(3, Rational(1, 3));
    const ExactJoint p = validate_joint(t, OutcomeSpace(3, 1, 1));
    CHECK(p(2, 0, 0) == Rational(1, 3));
    t[0] = Rational(1, 2);
    CHECK(CodeOf([&] { validate_joint(t, OutcomeSpace(3, 1, 1)); }) ==
          ErrorCode::kNotNormalized);
  }
}

TEST_CASE("marginal") {
  const auto m = marginal(Uniform222(), {Axis::kAlice});
  REQUIRE(m.values.size() == 2);
  CHECK(m.values[0] == doctest::Approx(0.5));
  CHECK(m.values[1] == doctest::Approx(0.5));

  const auto jk = marginal(PointMass(), {Axis::kEvent, Axis::kBob});
  REQUIRE(jk.values.size() == 4);
  CHECK(jk.dims == std::vector<std::size_t>{2, 2});
  CHECK(jk.values[0] == 1.0);
  CHECK(jk.values[1] + jk.values[2] + jk.values[3] == 0.0);

  CHECK(CodeOf([] { marginal(Uniform222(), {}); }) == ErrorCode::kEmptyAxes);
}

TEST_CASE("marginal of a measured pure state") {
  // Alice measures the computational basis of |a0><a0|.
  ComplexVector a0 = ComplexVector::Zero(4);
  a0(0) = 1;
  const QuantumScenario s(DensityMatrix::Pure(a0),
                          Instrument::FromBasis(ComplexMatrix::Identity(4, 4)),
                          Instrument::Identity(4), Instrument::Identity(4),
                          Order::kAliceBobEvent, Event(1, {0}));
  const auto m = marginal(sequential_joint(s), {Axis::kAlice});
  CHECK(m.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.values[1] == doctest::Approx(0.0));
  CHECK(m.values[2] == doctest::Approx(0.0));
  CHECK(m.values[3] == doctest::Approx(0.0));
}

TEST_CASE("posteriors") {
  const Event e0(2, {0});
  CHECK(posterior_alice(Uniform222(), 1, e0) == doctest::Approx(0.5));
  CHECK(posterior_bob(Uniform222(), 0, e0) == doctest::Approx(0.5));
  CHECK(posterior_alice(PointMass(), 0, e0) == 1.0);
  CHECK(posterior_bob(PointMass(), 0, e0) == 1.0);
  CHECK(posterior_alice(FourState(), 0, e0) == doctest::Approx(0.5));
  CHECK(posterior_bob(FourState(), 1, e0) == doctest::Approx(1.0));
  CHECK(CodeOf([&] { posterior_alice(PointMass(), 1, e0); }) ==
        ErrorCode::kZeroProbabilityConditioning);
  CHECK(CodeOf([&] { posterior_alice(PointMass(), 0, Event(3, {0})); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("conditional_prob") {
  const AxisSubset i0{Axis::kAlice, {0}}, i1{Axis::kAlice, {1}};
  const AxisSubset j0{Axis::kBob, {0}};
  CHECK(conditional_prob(Uniform222(), i0, j0) == doctest::Approx(0.5));
  CHECK(conditional_prob(PointMass(), j0, i0) == 1.0);
  CHECK(conditional_prob(FourState(), j0, i1) == doctest::Approx(0.5));
  CHECK(CodeOf([&] { conditional_prob(PointMass(), j0, i1); }) ==
        ErrorCode::kZeroProbabilityConditioning);
}

TEST_CASE("full and empty events") {
  const JointDistribution p = FourState();
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(posterior_alice(p, i, Event(2, {0, 1})) == doctest::Approx(1.0));
    CHECK(posterior_alice(p, i, Event(2, {})) == 0.0);
  }
  CHECK(event_probability(p, Event(2, {})) == 0.0);
  CHECK(Event(2, {1, 1, 0}).members() == OutcomeSet{0, 1});
}
