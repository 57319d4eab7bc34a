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

#include "ering/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ering {

Matrix2c pauli(int k) {
    const cplx i{0.0, 1.0};
    Matrix2c m;
    switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli index must be 0..3");
    }
    return m;
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Vector4c kron(const Vector2c& a, const Vector2c& b) {
    Vector4c out;
    out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return out;
}

Matrix4c outer(const Vector4c& v) { return v * v.adjoint(); }

HermitianEigen hermitian_eigen(const Matrix4c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m);
    // Eigen returns ascending order; reverse so that index 0 is the largest.
    HermitianEigen out;
    for (int k = 0; k < 4; ++k) {
        out.values(k) = solver.eigenvalues()(3 - k);
        out.vectors.col(k) = solver.eigenvectors().col(3 - k);
    }
    return out;
}

Eigen::Vector4d hermitian_eigenvalues(const Matrix4c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
}

Matrix4c psd_sqrt(const Matrix4c& m) {
    const HermitianEigen eig = hermitian_eigen(m);
    const double cutoff = kZeroEigenvalueRelTol * std::max(eig.values(0), 0.0);
    Eigen::Vector4d roots;
    for (int k = 0; k < 4; ++k)
        roots(k) = eig.values(k) > cutoff ? std::sqrt(eig.values(k)) : 0.0;
    return eig.vectors * roots.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

Matrix4c partial_transpose_second(const Matrix4c& m) {
    Matrix4c out;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2)
                    out(2 * i1 + i2, 2 * j1 + j2) = m(2 * i1 + j2, 2 * j1 + i2);
    return out;
}

double hermiticity_defect(const Matrix4c& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace ering
