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

#include "agreelab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace agree {

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t UniformIndex(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ComplexMatrix GinibreMatrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

ComplexMatrix HaarUnitary(Rng& rng, std::size_t dim) {
  const ComplexMatrix g = GinibreMatrix(rng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Multiply column c by phase(R_cc) so the distribution is exactly Haar.
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0) q.col(c) *= d / mag;
  }
  return q;
}

DensityMatrix RandomDensityMatrix(Rng& rng, std::size_t dim, std::size_t rank) {
  const ComplexMatrix g = GinibreMatrix(rng, dim, std::max<std::size_t>(rank, 1));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Exact hermiticity; the product is only hermitian up to rounding.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

Instrument RandomProjectiveInstrument(Rng& rng, std::size_t dim,
                                      std::size_t outcomes) {
  outcomes = std::clamp<std::size_t>(outcomes, 1, dim);
  const ComplexMatrix u = HaarUnitary(rng, dim);
  // Basis vector v goes to group[v]; the first `outcomes` vectors seed the
  // groups so none is empty.
  std::vector<std::size_t> group(dim);
  for (std::size_t v = 0; v < dim; ++v) {
    group[v] = v < outcomes ? v : UniformIndex(rng, 0, outcomes - 1);
  }
  std::shuffle(group.begin(), group.end(), rng);
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> projectors(outcomes, ComplexMatrix::Zero(d, d));
  for (std::size_t v = 0; v < dim; ++v) {
    projectors[group[v]] += Projector(u.col(static_cast<Eigen::Index>(v)));
  }
  return Instrument::Projective(projectors);
}

Instrument RandomKrausInstrument(Rng& rng, std::size_t dim_in,
                                 std::size_t dim_out, std::size_t outcomes,
                                 std::size_t kraus_per_branch) {
  outcomes = std::max<std::size_t>(outcomes, 1);
  kraus_per_branch = std::max<std::size_t>(kraus_per_branch, 1);
  // S has rank at most (number of operators) * dim_out; it must be invertible.
  const std::size_t per_op = std::max<std::size_t>(dim_out, 1) * outcomes;
  kraus_per_branch =
      std::max(kraus_per_branch, (dim_in + per_op - 1) / per_op);
  std::vector<KrausBranch> raw(outcomes);
  const auto din = static_cast<Eigen::Index>(dim_in);
  ComplexMatrix s = ComplexMatrix::Zero(din, din);
  for (KrausBranch& b : raw) {
    for (std::size_t m = 0; m < kraus_per_branch; ++m) {
      b.push_back(GinibreMatrix(rng, dim_out, dim_in));
      s += b.back().adjoint() * b.back();
    }
  }
  // S is positive definite with probability one; K_m = G_m S^{-1/2}.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(s);
  const ComplexMatrix inv_sqrt =
      eig.eigenvectors() *
      eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().adjoint();
  for (KrausBranch& b : raw) {
    for (ComplexMatrix& k : b) k = (k * inv_sqrt).eval();
  }
  return Instrument(dim_in, dim_out, std::move(raw));
}

Instrument RandomInstrument(Rng& rng, std::size_t dim_in, std::size_t dim_out,
                            std::size_t max_outcomes) {
  const bool projective =
      dim_in == dim_out && std::bernoulli_distribution(0.5)(rng);
  if (projective) {
    return RandomProjectiveInstrument(
        rng, dim_in, UniformIndex(rng, 1, std::min(dim_in, max_outcomes)));
  }
  return RandomKrausInstrument(rng, dim_in, dim_out,
                               UniformIndex(rng, 1, max_outcomes),
                               UniformIndex(rng, 1, 2));
}

Event RandomEvent(Rng& rng, std::size_t size_k) {
  OutcomeSet members;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < size_k; ++k) {
    if (coin(rng)) members.push_back(k);
  }
  return Event(size_k, std::move(members));
}

namespace {

// Random assignment of n states to between 1 and n nonempty cells.
Partition RandomPartition(Rng& rng, std::size_t n) {
  const std::size_t cells = UniformIndex(rng, 1, n);
  std::vector<std::size_t> cell_of(n);
  for (std::size_t w = 0; w < n; ++w) {
    cell_of[w] = w < cells ? w : UniformIndex(rng, 0, cells - 1);
  }
  std::shuffle(cell_of.begin(), cell_of.end(), rng);
  return Partition(std::move(cell_of));
}

}  // namespace

ExactClassicalModel RandomExactClassicalModel(Rng& rng, std::size_t max_states,
                                              std::int64_t max_weight) {
  const std::size_t n = UniformIndex(rng, 1, max_states);
  std::vector<std::int64_t> w(n);
  std::int64_t total = 0;
  for (auto& x : w) {
    x = std::uniform_int_distribution<std::int64_t>(1, max_weight)(rng);
    total += x;
  }
  std::vector<Rational> prior;
  prior.reserve(n);
  for (auto x : w) prior.emplace_back(x, total);
  Partition meas = RandomPartition(rng, n);
  OutcomeSet cells;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t c = 0; c < meas.num_cells(); ++c) {
    if (coin(rng)) cells.push_back(c);
  }
  Partition alice = RandomPartition(rng, n);
  Partition bob = RandomPartition(rng, n);
  return ExactClassicalModel(std::move(prior), std::move(alice),
                             std::move(bob), std::move(meas),
                             std::move(cells));
}

ClassicalModel ToDoubleModel(const ExactClassicalModel& m) {
  std::vector<double> prior;
  prior.reserve(m.num_states());
  for (const Rational& x : m.prior()) prior.push_back(ToDouble(x));
  return ClassicalModel(std::move(prior), m.alice(), m.bob(), m.measurement(),
                        m.event_cells());
}

JointDistribution RandomJointTable(Rng& rng, std::size_t max_dim,
                                   double zero_fraction) {
  const OutcomeSpace space(UniformIndex(rng, 1, max_dim),
                           UniformIndex(rng, 1, max_dim),
                           UniformIndex(rng, 1, max_dim));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(space.total());
  double sum = 0;
  do {
    sum = 0;
    for (double& x : t) {
      x = unit(rng) < zero_fraction ? 0.0 : unit(rng);
      sum += x;
    }
  } while (sum <= 0.0);
  for (double& x : t) x /= sum;
  return validate_joint(std::move(t), space);
}

}  // namespace agree
