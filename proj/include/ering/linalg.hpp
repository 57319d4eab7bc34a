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
 * @file linalg.hpp
 * @brief Small dense complex linear algebra shared by every module.
 *
 * All two-qubit operators are 4x4 and use the global basis order
 * |HH>, |HV>, |VH>, |VV> (qubit 1 is the most significant index).
 */

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ering {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

/// Row/column index of each basis ket.
enum BasisIndex : int { HH = 0, HV = 1, VH = 2, VV = 3 };

/// Pauli matrix: 0 -> identity, 1 -> sigma_x, 2 -> sigma_y, 3 -> sigma_z.
Matrix2c pauli(int k);

/// A (x) B for single-qubit operators, qubit 1 first.
Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

/// Tensor product of single-qubit kets.
Vector4c kron(const Vector2c& a, const Vector2c& b);

/// |v><v| (no normalization).
Matrix4c outer(const Vector4c& v);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted descending.
/// Only the lower triangle is read.
struct HermitianEigen {
    Eigen::Vector4d values;
    Matrix4c vectors;  // column k belongs to values(k)
};
HermitianEigen hermitian_eigen(const Matrix4c& m);

/// Eigenvalues of a Hermitian matrix, sorted descending.
Eigen::Vector4d hermitian_eigenvalues(const Matrix4c& m);

/// Eigenvalues below this fraction of the largest are treated as exact zeros
/// when taking square roots of positive semidefinite matrices.
inline constexpr double kZeroEigenvalueRelTol = 1e-14;

/// Principal square root of a positive semidefinite matrix. Negative and
/// relatively negligible eigenvalues are mapped to zero.
Matrix4c psd_sqrt(const Matrix4c& m);

/// Partial transpose with respect to qubit 2.
Matrix4c partial_transpose_second(const Matrix4c& m);

/// Largest absolute deviation from Hermiticity, max |m - m^dagger|.
double hermiticity_defect(const Matrix4c& m);

}  // namespace ering
