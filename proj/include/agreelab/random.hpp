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

#ifndef AGREELAB_RANDOM_HPP_
#define AGREELAB_RANDOM_HPP_

// Seeded generators for random instances of every backend.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "agreelab/classical.hpp"
#include "agreelab/linalg.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/quantum.hpp"

namespace agree {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; derives independent per-trial seeds from a base seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index);

std::size_t UniformIndex(Rng& rng, std::size_t lo, std::size_t hi);  // [lo, hi]

// Ginibre matrix with i.i.d. standard complex normal entries.
ComplexMatrix GinibreMatrix(Rng& rng, std::size_t rows, std::size_t cols);

// Haar-distributed unitary (QR of a Ginibre matrix with phases fixed).
ComplexMatrix HaarUnitary(Rng& rng, std::size_t dim);

// G G^dagger / tr, with G a dim x rank Ginibre matrix.
DensityMatrix RandomDensityMatrix(Rng& rng, std::size_t dim, std::size_t rank);

// Projective measurement in a Haar-random basis, the basis vectors grouped
// into `outcomes` nonempty blocks (outcomes <= dim).
Instrument RandomProjectiveInstrument(Rng& rng, std::size_t dim,
                                      std::size_t outcomes);

// Random Kraus instrument: Ginibre operators G_m rescaled by S^{-1/2} with
// S = sum_m G_m^dagger G_m, so the total map is trace preserving. The Kraus
// count per branch is raised when needed to keep S invertible.
Instrument RandomKrausInstrument(Rng& rng, std::size_t dim_in,
                                 std::size_t dim_out, std::size_t outcomes,
                                 std::size_t kraus_per_branch);

// Either of the above, chosen at random (projective only when dims agree).
Instrument RandomInstrument(Rng& rng, std::size_t dim_in, std::size_t dim_out,
                            std::size_t max_outcomes);

// Random event over K: each outcome included with probability 1/2.
Event RandomEvent(Rng& rng, std::size_t size_k);

// Random model with integer prior weights in [1, max_weight], normalized
// exactly.
ExactClassicalModel RandomExactClassicalModel(Rng& rng, std::size_t max_states,
                                              std::int64_t max_weight = 12);

ClassicalModel ToDoubleModel(const ExactClassicalModel& m);

// Random table with roughly `zero_fraction` of its entries set to zero.
JointDistribution RandomJointTable(Rng& rng, std::size_t max_dim,
                                   double zero_fraction = 0.3);

}  // namespace agree

#endif  // AGREELAB_RANDOM_HPP_
