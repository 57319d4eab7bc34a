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

#include "ering/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ering/errors.hpp"

namespace ering {

namespace {

void require_range(double value, double lo, double hi, const char* name) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream os;
        os << name << " = " << value << " outside [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
    }
}

}  // namespace

PureState::PureState(const Vector4c& amplitudes) : amp_(amplitudes) {
    const double n2 = amp_.squaredNorm();
    if (!(std::abs(n2 - 1.0) <= kNormTol)) {
        std::ostringstream os;
        os << "pure state squared norm " << n2 << " is not 1";
        throw DomainError(os.str());
    }
}

DensityMatrix::DensityMatrix(const Matrix4c& m) {
    if (!m.allFinite())
        throw DomainError("density matrix has non-finite entries");
    const double herm = hermiticity_defect(m);
    if (herm > kHermitianTol) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (defect " << herm << ")";
        throw DomainError(os.str());
    }
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream os;
        os << "density matrix trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag()
           << "i is not 1";
        throw DomainError(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
    const double min_eig = hermitian_eigenvalues(m_)(3);
    if (min_eig < kPsdTol) {
        std::ostringstream os;
        os << "density matrix is not positive semidefinite (min eigenvalue " << min_eig << ")";
        throw DomainError(os.str());
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(outer(psi.amplitudes()), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(Matrix4c::Identity() / 4.0, Unchecked{});
}

DensityMatrix DensityMatrix::repair(const Matrix4c& m) {
    if (!m.allFinite())
        throw DomainError("cannot repair a matrix with non-finite entries");
    HermitianEigen eig = hermitian_eigen(0.5 * (m + m.adjoint()));
    Eigen::Vector4d clipped = eig.values.cwiseMax(0.0);
    const double total = clipped.sum();
    if (!(total > 0.0))
        throw DomainError("cannot repair a matrix with no positive eigenvalue");
    clipped /= total;
    Matrix4c out = eig.vectors * clipped.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    out = 0.5 * (out + out.adjoint());
    return DensityMatrix(out, Unchecked{});
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return m_.cwiseAbs2().sum();
}

PureState bell_state(BellKind kind, double phase) {
    const double s = 1.0 / std::numbers::sqrt2;
    const cplx e = std::polar(1.0, phase);
    Vector4c v = Vector4c::Zero();
    if (kind == BellKind::Phi) {
        v(HH) = s;
        v(VV) = s * e;
    } else {
        v(HV) = s;
        v(VH) = s * e;
    }
    return PureState(v);
}

PureState singlet_state() {
    const double s = 1.0 / std::numbers::sqrt2;
    Vector4c v = Vector4c::Zero();
    v(HV) = s;
    v(VH) = -s;
    return PureState(v);
}

DensityMatrix singlet() { return DensityMatrix::from_pure(singlet_state()); }

double entanglement_degree(double theta_p) {
    require_range(theta_p, 0.0, std::numbers::pi / 4.0, "theta_p");
    const double c = std::cos(2.0 * theta_p);
    return c * c;
}

PureState nonmax_state(double theta_p) {
    const double gamma = entanglement_degree(theta_p);
    const double norm = std::sqrt(1.0 + gamma * gamma);
    Vector4c v = Vector4c::Zero();
    v(HH) = gamma / norm;
    v(VV) = 1.0 / norm;
    return PureState(v);
}

WernerParams WernerParams::from_fidelity(double F) {
    require_range(F, 0.25, 1.0, "F");
    return WernerParams{(4.0 * F - 1.0) / 3.0};
}

DensityMatrix werner(double p) {
    require_range(p, 0.0, 1.0, "p");
    const double a = (1.0 - p) / 4.0;
    const double b = (1.0 + p) / 4.0;
    Matrix4c m = Matrix4c::Zero();
    m(HH, HH) = a;
    m(VV, VV) = a;
    m(HV, HV) = b;
    m(VH, VH) = b;
    m(HV, VH) = -p / 2.0;
    m(VH, HV) = -p / 2.0;
    return DensityMatrix(m);
}

DensityMatrix werner_from_fidelity(double F) {
    require_range(F, 0.25, 1.0, "F");
    // (1 - F)/3 I + (4F - 1)/3 |Psi-><Psi-| is werner(p) with p = (4F - 1)/3.
    return werner(WernerParams::from_fidelity(F).p);
}

double mems_g(double p) {
    require_range(p, 0.0, 1.0, "p");
    return p >= 2.0 / 3.0 ? p / 2.0 : 1.0 / 3.0;
}

DensityMatrix mems(double p) {
    const double g = mems_g(p);
    Matrix4c m = Matrix4c::Zero();
    m(HH, HH) = 1.0 - 2.0 * g;
    m(HV, HV) = g;
    m(VH, VH) = g;
    m(HV, VH) = -p / 2.0;
    m(VH, HV) = -p / 2.0;
    return DensityMatrix(m);
}

DensityMatrix tune_entanglement(double F, double a) {
    require_range(F, 0.25, 1.0, "F");
    require_range(a, 0.5, 1.0, "a");
    Vector4c psi = Vector4c::Zero();
    psi(HH) = std::sqrt(a);
    psi(VV) = std::sqrt(1.0 - a);
    const Matrix4c m = (1.0 - F) / 3.0 * Matrix4c::Identity() + (4.0 * F - 1.0) / 3.0 * outer(psi);
    return DensityMatrix(m);
}

double tuning_entanglement_bound(double F) {
    require_range(F, 0.25, 1.0, "F");
    if (F <= 0.5)
        return 0.5;
    const double a_max = 0.5 * (1.0 + std::sqrt(3.0 * (4.0 * F * F - 1.0)) / (4.0 * F - 1.0));
    return std::min(a_max, 1.0);
}

DensityMatrix mix(std::span<const WeightedState> components) {
    if (components.empty())
        throw DomainError("mix of an empty component list");
    double total = 0.0;
    Matrix4c m = Matrix4c::Zero();
    for (const auto& c : components) {
        if (!(c.weight >= 0.0))
            throw DomainError("mixture weights must be nonnegative");
        total += c.weight;
        m += c.weight * c.state.matrix();
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "mixture weights sum to " << total << ", not 1";
        throw DomainError(os.str());
    }
    return DensityMatrix(m / total);
}

DensityMatrix mix(std::initializer_list<WeightedState> components) {
    return mix(std::span<const WeightedState>(components.begin(), components.size()));
}

}  // namespace ering
