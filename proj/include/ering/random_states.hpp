// Copyright 2026 The ering Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "ering/qstate.hpp"

namespace ering {

using Rng = std::mt19937_64;

/// Independent generator for stream `index` of a master seed.
Rng derive_rng(std::uint64_t master_seed, std::uint64_t index);

/// Haar-random pure state.
PureState random_pure_state(Rng& rng);

/// Seeded test distribution over two-qubit states: a Gaussian Hermitian
/// perturbation of I/4 (eigenvalues clipped at zero, renormalized) mixed
/// with a random pure state of uniformly drawn weight. Covers separable and
/// entangled states of every rank.
DensityMatrix random_density_matrix(Rng& rng);

}  // namespace ering
