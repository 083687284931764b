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

#include "agreelab/classical.hpp"

#include "agreelab/agreement.hpp"
#include "agreelab/errors.hpp"
#include "agreelab/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace agree;

namespace {

// Omega = {w0..w3} uniform; Alice {{w0,w1},{w2,w3}}; Bob {{w0,w1,w2},{w3}};
// E = {w0,w3} is cell 0 of the event measurement.
ExactClassicalModel FourState() {
  return ExactClassicalModel(std::vector<Rational>(4, Rational(1, 4)),
                             Partition({0, 0, 1, 1}), Partition({0, 0, 0, 1}),
                             Partition({0, 1, 1, 0}), {0});
}

}  // namespace

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition({0, 2}), Error);
  CHECK_THROWS_AS(Partition(std::vector<std::size_t>{}), Error);
  CHECK(Partition::Discrete(3).num_cells() == 3);
  CHECK(Partition::Trivial(3).num_cells() == 1);
}

TEST_CASE("model validation") {
  const std::vector<double> prior{0.5, 0.5};
  CHECK_THROWS_AS(ClassicalModel(prior, Partition::Trivial(3),
                                 Partition::Trivial(2), Partition::Trivial(2),
                                 {0}),
                  Error);
  CHECK_THROWS_AS(ClassicalModel({0.5, 0.6}, Partition::Trivial(2),
                                 Partition::Trivial(2), Partition::Trivial(2),
                                 {0}),
                  Error);
  CHECK_THROWS_AS(ClassicalModel(prior, Partition::Trivial(2),
                                 Partition::Trivial(2), Partition::Trivial(2),
                                 {1}),
                  Error);
}

TEST_CASE("classical_posterior") {
  const ExactClassicalModel m = FourState();
  CHECK(classical_posterior(m, Agent::kAlice, 0) == Rational(1, 2));
  CHECK(classical_posterior(m, Agent::kBob, 1) == Rational(1));
  CHECK(classical_posterior(m, Agent::kBob, 0) == Rational(1, 3));

  const ExactClassicalModel all(std::vector<Rational>(4, Rational(1, 4)),
                                Partition({0, 0, 1, 1}), Partition({0, 1, 1, 1}),
                                Partition::Trivial(4), {0});
  CHECK(classical_posterior(all, Agent::kAlice, 1) == Rational(1));

  const ClassicalModel null_cell({1.0, 0.0}, Partition({0, 1}),
                                 Partition::Trivial(2), Partition::Trivial(2),
                                 {0});
  CHECK_THROWS_AS(classical_posterior(null_cell, Agent::kAlice, 1), Error);
}

TEST_CASE("classical_ck_at") {
  const ExactClassicalModel m = FourState();
  CHECK_FALSE(classical_ck_at(m, 0, Rational(1, 2), Rational(1, 3)));
  // Unattained value: empty base set.
  CHECK_FALSE(classical_ck_at(m, 0, Rational(1, 5), Rational(1, 3)));
  CHECK_THROWS_AS(classical_ck_at(m, 7, Rational(1, 2), Rational(1, 3)),
                  Error);

  const ExactClassicalModel trivial(
      std::vector<Rational>{Rational(1, 6), Rational(1, 3), Rational(1, 2)},
      Partition::Trivial(3), Partition::Trivial(3), Partition({0, 1, 1}), {1});
  for (std::size_t w = 0; w < 3; ++w) {
    CHECK(classical_ck_at(trivial, w, Rational(5, 6), Rational(5, 6)));
  }
}

TEST_CASE("embed_classical") {
  const EmbeddedModel<Rational> em = embed_classical(FourState());
  const OutcomeSpace& s = em.joint.space();
  REQUIRE(s.total() == 8);
  std::vector<Rational> expected(8, Rational(0));
  expected[s.flat(0, 0, 0)] = expected[s.flat(0, 0, 1)] = Rational(1, 4);
  expected[s.flat(1, 0, 1)] = expected[s.flat(1, 1, 0)] = Rational(1, 4);
  CHECK(em.joint.values() == expected);
  CHECK(em.event.members() == OutcomeSet{0});

  const ClassicalModel point({0.0, 1.0, 0.0}, Partition({0, 1, 1}),
                             Partition({0, 0, 1}), Partition({1, 0, 0}), {0});
  const auto pe = embed_classical(point);
  CHECK(pe.joint(1, 0, 0) == 1.0);

  const ClassicalModel triv({0.25, 0.75}, Partition::Trivial(2),
                            Partition::Trivial(2), Partition::Trivial(2), {0});
  const auto te = embed_classical(triv);
  CHECK(te.joint.space().total() == 1);
  CHECK(te.joint(0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("classical machinery against the meet oracle") {
  Rng rng(20261018);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactClassicalModel m = RandomExactClassicalModel(rng, 8);
    for (std::size_t w = 0; w < m.num_states(); ++w) {
      const Rational qa = oracle::CellPosterior(m, Agent::kAlice, w);
      const Rational qb = oracle::CellPosterior(m, Agent::kBob, w);
      CHECK(classical_posterior(m, Agent::kAlice, m.alice().cell_of(w)) == qa);
      CHECK(classical_ck_at(m, w, qa, qb) ==
            oracle::MeetCommonKnowledge(m, w, qa, qb));
      // Classical agreement.
      if (classical_ck_at(m, w, qa, qb)) CHECK(qa == qb);
    }
  }
}
