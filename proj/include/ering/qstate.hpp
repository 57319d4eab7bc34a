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
 * @file qstate.hpp
 * @brief Two-qubit polarization states: Bell states, tunable pure states,
 * Werner states, maximally entangled mixed states (MEMS) and mixtures.
 *
 * Every matrix is expressed in the basis |HH>, |HV>, |VH>, |VV>.
 */

#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "ering/linalg.hpp"

namespace ering {

/// Normalized pure two-qubit state.
class PureState {
public:
    static constexpr double kNormTol = 1e-12;

    /// Throws DomainError unless the squared norm is 1 within kNormTol.
    explicit PureState(const Vector4c& amplitudes);

    const Vector4c& amplitudes() const noexcept { return amp_; }
    cplx operator[](int i) const { return amp_(i); }

private:
    Vector4c amp_;
};

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
///
/// Construction validates the three invariants and throws DomainError on
/// violation. Values are immutable once built.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kPsdTol = -1e-10;

    explicit DensityMatrix(const Matrix4c& m);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed();

    /// Repair path: Hermitian part, negative eigenvalues clipped to zero,
    /// trace renormalized. Throws DomainError if nothing positive remains.
    static DensityMatrix repair(const Matrix4c& m);

    const Matrix4c& matrix() const noexcept { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }

    /// Tr(rho^2).
    double purity() const;

    /// Eigenvalues, descending.
    Eigen::Vector4d eigenvalues() const { return hermitian_eigenvalues(m_); }

private:
    struct Unchecked {};
    DensityMatrix(const Matrix4c& m, Unchecked) : m_(m) {}

    Matrix4c m_;
};

enum class BellKind { Phi, Psi };

/// 2^{-1/2}(|HH> + e^{i phase}|VV>) for Phi, 2^{-1/2}(|HV> + e^{i phase}|VH>) for Psi.
PureState bell_state(BellKind kind, double phase);

/// |Psi->, the singlet.
PureState singlet_state();
DensityMatrix singlet();

/// Amplitude ratio |alpha/beta| produced by the pump waveplate at angle
/// theta_p (radians, [0, pi/4]): cos^2(2 theta_p).
double entanglement_degree(double theta_p);

/// alpha|HH> + beta|VV> with |alpha/beta| = entanglement_degree(theta_p),
/// alpha, beta real and nonnegative.
PureState nonmax_state(double theta_p);

/// Werner family parameter, carried either as singlet weight p or as
/// fidelity to the singlet F = (3p + 1)/4.
struct WernerParams {
    double p;

    static WernerParams from_fidelity(double F);
    double fidelity() const { return (3.0 * p + 1.0) / 4.0; }
};

/// p |Psi-><Psi-| + (1 - p)/4 I.  p in [0, 1].
DensityMatrix werner(double p);

/// Werner state written through its singlet fidelity, F in [1/4, 1].
DensityMatrix werner_from_fidelity(double F);

/// Diagonal weight g(p) of the MEMS family: p/2 for p >= 2/3, else 1/3.
double mems_g(double p);

/// diag(1 - 2g, g, g, 0) with -p/2 coupling |HV> and |VH>.  p in [0, 1].
DensityMatrix mems(double p);

/// (1 - F)/3 I + (4F - 1)/3 |Psi><Psi| with |Psi> = sqrt(a)|HH> + sqrt(1 - a)|VV>.
/// F in [1/4, 1], a in [1/2, 1].
DensityMatrix tune_entanglement(double F, double a);

/// Upper end of the interval a in [1/2, a_max) on which tune_entanglement(F, a)
/// stays entangled, clamped to 1. For F <= 1/2 the interval is empty and 1/2
/// is returned. Throws DomainError for F outside [1/4, 1].
double tuning_entanglement_bound(double F);

struct WeightedState {
    double weight;
    DensityMatrix state;
};

/// Convex combination. Weights must be nonnegative and sum to 1 within 1e-9.
DensityMatrix mix(std::span<const WeightedState> components);
DensityMatrix mix(std::initializer_list<WeightedState> components);

}  // namespace ering
