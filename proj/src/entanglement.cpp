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

#include "ering/entanglement.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ering/csv.hpp"
#include "ering/errors.hpp"

namespace ering {

std::string_view to_string(StateFamily family) {
    return family == StateFamily::Werner ? "werner" : "mems";
}

StateFamily parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "werner")
        return StateFamily::Werner;
    if (lower == "mems")
        return StateFamily::Mems;
    throw DomainError("unknown state family '" + std::string(name) + "'");
}

double concurrence(const DensityMatrix& rho) {
    // Wootters: with rho = W W^dagger, the l_i are the singular values of the
    // symmetric matrix tau = W^T (sy x sy) W. Working with singular values of
    // tau avoids square roots of round-off-sized eigenvalues of rho rho~.
    const HermitianEigen eig = hermitian_eigen(rho.matrix());
    const double cutoff = kZeroEigenvalueRelTol * eig.values(0);
    int rank = 0;
    while (rank < 4 && eig.values(rank) > cutoff)
        ++rank;

    Eigen::MatrixXcd w(4, rank);
    for (int k = 0; k < rank; ++k)
        w.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);

    const Matrix4c flip = kron(pauli(2), pauli(2));
    const Eigen::MatrixXcd tau = w.transpose() * flip * w;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(tau).singularValues();

    double c = rank > 0 ? sv(0) : 0.0;
    for (int k = 1; k < rank; ++k)
        c -= sv(k);
    return std::clamp(c, 0.0, 1.0);
}

double tangle(const DensityMatrix& rho) {
    const double c = concurrence(rho);
    return c * c;
}

double linear_entropy(const DensityMatrix& rho) {
    return std::clamp(4.0 / 3.0 * (1.0 - rho.purity()), 0.0, 1.0);
}

PptResult is_separable_ppt(const DensityMatrix& rho) {
    const double min_eig = hermitian_eigenvalues(partial_transpose_second(rho.matrix()))(3);
    return PptResult{min_eig >= -1e-10, 2.0 * std::max(0.0, -min_eig), min_eig};
}

double tangle_curve(StateFamily family, double s_l) {
    if (!(s_l >= 0.0 && s_l <= 1.0)) {
        std::ostringstream os;
        os << "linear entropy " << s_l << " outside [0, 1]";
        throw DomainError(os.str());
    }
    if (s_l > 8.0 / 9.0)
        return 0.0;
    if (family == StateFamily::Werner) {
        const double r = 1.0 - 3.0 * std::sqrt(1.0 - s_l);
        return 0.25 * r * r;
    }
    if (s_l <= 16.0 / 27.0) {
        const double r = 1.0 + std::sqrt(1.0 - 1.5 * s_l);
        return 0.25 * r * r;
    }
    return 4.0 / 3.0 - 1.5 * s_l;
}

double mems_chsh_boundary_entropy() {
    // S_L of mems(p) on the g = p/2 branch is (8/3) p (1 - p).
    const double p = 1.0 / std::numbers::sqrt2;
    return 8.0 / 3.0 * p * (1.0 - p);
}

EntropyPoint entropy_point(const DensityMatrix& rho) {
    return EntropyPoint{linear_entropy(rho), tangle(rho)};
}

std::string_view to_string(NonlocalRegion region) {
    switch (region) {
    case NonlocalRegion::ViolatesLocalRealism: return "violates_local_realism";
    case NonlocalRegion::NonseparableNoChshViolation: return "nonseparable_no_CHSH_violation";
    case NonlocalRegion::SeparableLocal: return "separable_local";
    }
    return "unknown";
}

NonlocalityClass classify(StateFamily family, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "p = " << p << " outside [0, 1]";
        throw DomainError(os.str());
    }
    const double threshold = 1.0 / std::numbers::sqrt2;
    if (family == StateFamily::Werner) {
        if (p > threshold)
            return {family, NonlocalRegion::ViolatesLocalRealism, 0.0, 0.5, false};
        if (p > 1.0 / 3.0)
            return {family, NonlocalRegion::NonseparableNoChshViolation, 0.5, 8.0 / 9.0, false};
        return {family, NonlocalRegion::SeparableLocal, 8.0 / 9.0, 1.0, true};
    }
    const double boundary = mems_chsh_boundary_entropy();
    if (p > threshold)
        return {family, NonlocalRegion::ViolatesLocalRealism, 0.0, boundary, false};
    return {family, NonlocalRegion::NonseparableNoChshViolation, boundary, 8.0 / 9.0, true};
}

void write_entropy_csv(std::ostream& os, std::span<const EntropySample> samples) {
    os << "S_L,T,family,p\n";
    for (const auto& s : samples)
        os << csv_number(s.s_l) << ',' << csv_number(s.t) << ',' << to_string(s.family) << ','
           << csv_number(s.p) << '\n';
}

}  // namespace ering
