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
 * @file bell.hpp
 * @brief CHSH correlation functions and Bell parameters.
 *
 * Analyzer directions are points (Theta, Phi) on the Bloch sphere; a linear
 * polarizer at angle theta corresponds to Theta = 2 theta, Phi = 0. Counts
 * tables and angle plans are always in polarizer degrees.
 */

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ering/qstate.hpp"

namespace ering {

/// Analyzer direction on the Bloch sphere, normalized to Theta in [0, pi] and
/// Phi in (-pi, pi]. Normalization preserves the unit vector.
class BlochSetting {
public:
    BlochSetting() = default;
    BlochSetting(double theta, double phi);

    /// Linear polarizer at `angle` radians.
    static BlochSetting polarizer(double angle);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

    /// Equivalent polarization angle Theta / 2.
    double polarization_angle() const noexcept { return theta_ / 2.0; }

    Eigen::Vector3d direction() const;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// [[cos T, e^{-iP} sin T], [e^{iP} sin T, -cos T]]: Hermitian, traceless, squares to I.
Matrix2c observable(const BlochSetting& s);

/// Tr(rho (O1 x O2)).
double correlation(const DensityMatrix& rho, const BlochSetting& s1, const BlochSetting& s2);

/// Unprimed and primed analyzer directions for sites 1 and 2.
struct ChshSettings {
    BlochSetting a1, a1p, a2, a2p;
};

/// S = P(a1,a2) - P(a1,a2') + P(a1',a2) + P(a1',a2').
/// Throws std::logic_error if |S| exceeds 2 sqrt(2) by more than 1e-9.
double chsh(const DensityMatrix& rho, const ChshSettings& settings);

struct ChshOptimum {
    double s;      // signed value at `settings`
    double abs_s;  // |s|
    ChshSettings settings;
};

/// Stationary point of S for states with diagonal (A, B, B, D) and -p/2
/// coupling |HV> and |VH>: all Theta = +-pi/2, giving |S| = 2 sqrt(2) p
/// whatever A, B and D are. Requires p in [0, 1] and p/2 <= b <= 1/2.
ChshOptimum chsh_optimal_family(double p, double b);

/// 3x3 correlation matrix t_ij = Tr(rho sigma_i x sigma_j).
Eigen::Matrix3d correlation_tensor(const DensityMatrix& rho);

/// Maximum |S| over all settings, 2 sqrt(t1^2 + t2^2) with t1, t2 the two
/// largest singular values of the correlation tensor.
double chsh_max_horodecki(const DensityMatrix& rho);

struct ChshOptimizeOptions {
    int starts = 32;
    std::uint64_t seed = 0x5eed;
};

/// Numerical maximization of S over the eight analyzer angles: multi-start
/// BFGS, each start seeded from its own stream of `seed`. Throws
/// ConvergenceError if no start converges.
ChshOptimum chsh_optimize(const DensityMatrix& rho, const ChshOptimizeOptions& options = {});

/// Polarizer angles, in degrees, of a CHSH experiment.
struct ChshAnglePlan {
    double theta1;
    double theta1p;
    double theta2;
    double theta2p;

    /// Bloch-sphere settings measured by this plan.
    ChshSettings bloch_settings() const;

    /// The 16 joint settings (base pairs with all orthogonal combinations).
    std::vector<std::pair<double, double>> joint_settings() const;
};

/// {theta1 = 0, theta1' = 45; theta2 = 22.5, theta2' = 67.5}.
inline constexpr ChshAnglePlan kStandardChshPlan{0.0, 45.0, 22.5, 67.5};

/// Coincidence counts keyed by joint polarizer angles in degrees. Angles are
/// compared modulo 180 degrees at micro-degree resolution.
class CountsTable {
public:
    struct Entry {
        double theta1_deg;
        double theta2_deg;
        double counts;
    };

    /// Inserts or overwrites. Throws DomainError on negative or non-finite counts.
    void set(double theta1_deg, double theta2_deg, double counts);
    std::optional<double> find(double theta1_deg, double theta2_deg) const;
    /// Throws DomainError when the entry is missing.
    double at(double theta1_deg, double theta2_deg) const;

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Integration time per joint setting, seconds.
    double duration = 0.0;

private:
    std::optional<std::size_t> index_of(double theta1_deg, double theta2_deg) const;
    std::vector<Entry> entries_;
};

/// CSV `theta1_deg,theta2_deg,counts`. An optional leading `# duration_s=<x>`
/// line carries the integration time.
void write_counts_csv(std::ostream& os, const CountsTable& table);
CountsTable read_counts_csv(std::istream& is);

struct BellEstimate {
    double s;
    double abs_s;
    double sigma;  // first-order Poisson propagation

    /// (|S| - 2) / sigma.
    double violation_sigmas() const { return (abs_s - 2.0) / sigma; }
};

/// S from coincidence counts with each P built from the four orthogonal
/// combinations. Throws DomainError on missing entries or an empty P.
BellEstimate chsh_from_counts(const CountsTable& counts, const ChshAnglePlan& plan);

}  // namespace ering
