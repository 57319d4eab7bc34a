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

/**
 * @file entanglement.hpp
 * @brief Entanglement and mixedness measures for two-qubit states, the
 * analytic tangle versus linear-entropy frontiers of the Werner and MEMS
 * families, and their nonlocality regions.
 */

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "ering/qstate.hpp"

namespace ering {

enum class StateFamily { Werner, Mems };

std::string_view to_string(StateFamily family);
/// Accepts "werner" and "mems" (case-insensitive). Throws DomainError otherwise.
StateFamily parse_family(std::string_view name);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4).
double concurrence(const DensityMatrix& rho);

/// Tangle T = C^2.
double tangle(const DensityMatrix& rho);

/// (4/3)(1 - Tr rho^2).
double linear_entropy(const DensityMatrix& rho);

struct PptResult {
    bool separable;
    double negativity;      // 2 max(0, -min eigenvalue of the partial transpose)
    double min_eigenvalue;  // of the partial transpose
};

/// Peres-Horodecki test, exact for two qubits. Separable iff the partial
/// transpose has no eigenvalue below -1e-10.
PptResult is_separable_ppt(const DensityMatrix& rho);

/// Analytic tangle of the family member with linear entropy s_l.
/// Werner: (1/4)(1 - 3 sqrt(1 - s_l))^2 up to 8/9, zero beyond.
/// MEMS: (1/4)(1 + sqrt(1 - 3 s_l / 2))^2 up to 16/27, then 4/3 - 3 s_l / 2
/// up to 8/9, zero beyond. Throws DomainError for s_l outside [0, 1].
double tangle_curve(StateFamily family, double s_l);

/// Linear entropy at which a MEMS stops violating the CHSH inequality
/// (p = 1/sqrt(2)), approximately 0.552.
double mems_chsh_boundary_entropy();

struct EntropyPoint {
    double linear_entropy;
    double tangle;
};

EntropyPoint entropy_point(const DensityMatrix& rho);

enum class NonlocalRegion {
    ViolatesLocalRealism,
    NonseparableNoChshViolation,
    SeparableLocal,
};

std::string_view to_string(NonlocalRegion region);

struct NonlocalityClass {
    StateFamily family;
    NonlocalRegion region;
    /// Linear-entropy interval of the region, [lo, hi) except where the
    /// region includes the upper end of the family (hi_inclusive).
    double s_l_lo;
    double s_l_hi;
    bool hi_inclusive;
};

/// Region of the Werner or MEMS state with singlet weight p.
/// Violation requires p > 1/sqrt(2) strictly; Werner states with p <= 1/3 are
/// separable. The MEMS family is only split into the two nonseparable regions.
NonlocalityClass classify(StateFamily family, double p);

/// One row of the S_L,T,family,p CSV series.
struct EntropySample {
    double s_l;
    double t;
    StateFamily family;
    double p;
};

/// Writes the header `S_L,T,family,p` followed by one row per sample.
void write_entropy_csv(std::ostream& os, std::span<const EntropySample> samples);

}  // namespace ering
