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

#include "ering/random_states.hpp"

#include <array>

namespace ering {

Rng derive_rng(std::uint64_t master_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
    return Rng(seq);
}

PureState random_pure_state(Rng& rng) {
    std::normal_distribution<double> normal;
    Vector4c v;
    for (int i = 0; i < 4; ++i)
        v(i) = cplx(normal(rng), normal(rng));
    return PureState(v.normalized());
}

DensityMatrix random_density_matrix(Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    Matrix4c g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g(i, j) = cplx(normal(rng), normal(rng));
    const Matrix4c h = 0.5 * (g + g.adjoint());
    const double scale = 0.5 * uniform(rng) / h.norm();
    const DensityMatrix noisy = DensityMatrix::repair(Matrix4c::Identity() / 4.0 + scale * h);

    const double w = uniform(rng);
    const DensityMatrix pure = DensityMatrix::from_pure(random_pure_state(rng));
    return mix({{1.0 - w, noisy}, {w, pure}});
}

}  // namespace ering
