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
 * @file tomography.hpp
 * @brief Two-qubit polarization tomography: simulated projective counts,
 * linear inversion and maximum-likelihood reconstruction.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ering/qstate.hpp"

namespace ering {

/// Single-photon projector. Bloch convention: H = +z, D = +x, L = +y;
/// `E(Theta, Phi)` is cos(Theta/2)|H> + e^{i Phi} sin(Theta/2)|V>.
class ProjectorSpec {
public:
    enum class Kind { H, V, D, A, L, R, Elliptical };

    ProjectorSpec(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)
    static ProjectorSpec elliptical(double theta, double phi);
    /// Linear polarizer at `deg` degrees, E(2 theta, 0).
    static ProjectorSpec linear(double deg);

    Kind kind() const noexcept { return kind_; }
    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

    Vector2c ket() const;
    Matrix2c matrix() const;

    /// "H", "V", "D", "A", "L", "R" or "E(<Theta>,<Phi>)" in radians.
    std::string label() const;
    /// Inverse of label(); throws FormatError on anything else.
    static ProjectorSpec parse(std::string_view label);

private:
    Kind kind_;
    double theta_ = 0.0;
    double phi_ = 0.0;
};

struct TomoSetting {
    ProjectorSpec p1;
    ProjectorSpec p2;

    Matrix4c matrix() const;
};

/// The 16 settings HH, HV, VV, VH, RH, RV, DV, DH, DR, DD, RD, HD, VD, VL, HL, RL.
const std::vector<TomoSetting>& standard_settings();

/// Real design matrix B(k, 4i + j) = Tr(M_k sigma_i x sigma_j), sigma_0 = I.
Eigen::MatrixXd design_matrix(const std::vector<TomoSetting>& settings);

/// 2-norm condition number of the design matrix (infinite when rank-deficient).
double design_condition_number(const std::vector<TomoSetting>& settings);

struct TomoData {
    std::vector<TomoSetting> settings;
    std::vector<double> counts;

    double total_counts() const;
    /// Throws DomainError on mismatched sizes or negative / non-finite counts.
    void validate() const;
};

/// Poisson counts with mean N Tr(rho M_k) per setting.
TomoData simulate_tomography(const DensityMatrix& rho, double counts_per_setting,
                             std::uint64_t seed,
                             const std::vector<TomoSetting>& settings = standard_settings());

/// Noiseless expected counts N Tr(rho M_k).
TomoData expected_tomography(const DensityMatrix& rho, double counts_per_setting,
                             const std::vector<TomoSetting>& settings = standard_settings());

struct LinearEstimate {
    Matrix4c matrix;  // Hermitian, unit trace, possibly not PSD
    double min_eigenvalue;
    bool physical() const { return min_eigenvalue >= -1e-12; }
};

/// Least-squares inversion of the design matrix, normalized to unit trace.
/// Throws DomainError for a rank-deficient design or zero total signal.
LinearEstimate linear_reconstruct(const TomoData& data);

struct MlOptions {
    int perturbed_starts = 2;
    double perturbation = 0.05;
    std::uint64_t seed = 0x70;
    int max_iterations = 3000;
};

struct MlResult {
    DensityMatrix rho;
    double flux;            // fitted counts per unit probability
    double log_likelihood;  // full Poisson log-likelihood at (rho, flux)
    int starts_converged;
};

/// Poisson maximum likelihood over rho = T^dag T / Tr(T^dag T), T upper
/// triangular with real diagonal, flux profiled out. Starts from the PSD
/// projection of the linear estimate (I/4 when that is unavailable) plus
/// seeded perturbations, then refits with near-zero eigenvalues removed and
/// keeps the likelier result. Throws ConvergenceError if no start converges.
MlResult ml_reconstruct(const TomoData& data, const MlOptions& options = {});

/// Poisson log-likelihood of `data` under `rho`, flux at its maximizing value.
double poisson_log_likelihood(const TomoData& data, const DensityMatrix& rho);

/// Maximizing flux N / sum_k Tr(rho M_k).
double fitted_flux(const TomoData& data, const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace ering
