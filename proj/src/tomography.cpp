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

#include "ering/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ering/csv.hpp"
#include "ering/errors.hpp"
#include "ering/optimize.hpp"
#include "ering/random_states.hpp"

namespace ering {

namespace {

using K = ProjectorSpec::Kind;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Packs upper-triangular T: 4 real diagonal entries, then (re, im) of the
// six strictly upper entries in row-major order.
Matrix4c unpack(std::span<const double> x) {
    Matrix4c t = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i)
        t(i, i) = x[i];
    int k = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j, k += 2)
            t(i, j) = cplx(x[k], x[k + 1]);
    return t;
}

std::vector<double> pack(const Matrix4c& t) {
    std::vector<double> x(16);
    for (int i = 0; i < 4; ++i)
        x[i] = t(i, i).real();
    int k = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j, k += 2) {
            x[k] = t(i, j).real();
            x[k + 1] = t(i, j).imag();
        }
    return x;
}

// Upper-triangular T with T^dag T = rho and a real nonnegative diagonal.
Matrix4c triangular_factor(const DensityMatrix& rho) {
    const HermitianEigen eig = hermitian_eigen(rho.matrix());
    const Eigen::Vector4d roots = eig.values.cwiseMax(0.0).cwiseSqrt();
    const Matrix4c a = roots.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    Eigen::HouseholderQR<Matrix4c> qr(a);
    Matrix4c r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 4; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0)
            r.row(i) *= std::conj(r(i, i)) / mag;
    }
    return r;
}

}  // namespace

ProjectorSpec ProjectorSpec::elliptical(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw DomainError("projector angles must be finite");
    ProjectorSpec p(K::Elliptical);
    p.theta_ = theta;
    p.phi_ = phi;
    return p;
}

ProjectorSpec ProjectorSpec::linear(double deg) {
    return elliptical(2.0 * deg * std::numbers::pi / 180.0, 0.0);
}

Vector2c ProjectorSpec::ket() const {
    const cplx i(0.0, 1.0);
    switch (kind_) {
        case K::H: return Vector2c(1.0, 0.0);
        case K::V: return Vector2c(0.0, 1.0);
        case K::D: return Vector2c(kInvSqrt2, kInvSqrt2);
        case K::A: return Vector2c(kInvSqrt2, -kInvSqrt2);
        case K::L: return Vector2c(kInvSqrt2, i * kInvSqrt2);
        case K::R: return Vector2c(kInvSqrt2, -i * kInvSqrt2);
        case K::Elliptical: break;
    }
    return Vector2c(std::cos(theta_ / 2.0), std::polar(std::sin(theta_ / 2.0), phi_));
}

Matrix2c ProjectorSpec::matrix() const {
    const Vector2c v = ket();
    return v * v.adjoint();
}

std::string ProjectorSpec::label() const {
    switch (kind_) {
        case K::H: return "H";
        case K::V: return "V";
        case K::D: return "D";
        case K::A: return "A";
        case K::L: return "L";
        case K::R: return "R";
        case K::Elliptical: break;
    }
    return "E(" + csv_number(theta_) + "," + csv_number(phi_) + ")";
}

ProjectorSpec ProjectorSpec::parse(std::string_view label) {
    static constexpr std::pair<std::string_view, K> kNamed[] = {
        {"H", K::H}, {"V", K::V}, {"D", K::D}, {"A", K::A}, {"L", K::L}, {"R", K::R}};
    for (const auto& [name, kind] : kNamed)
        if (label == name)
            return ProjectorSpec(kind);
    if (label.size() > 3 && label.substr(0, 2) == "E(" && label.back() == ')') {
        const std::string_view inner = label.substr(2, label.size() - 3);
        const auto comma = inner.find(',');
        if (comma != std::string_view::npos) {
            const auto theta = parse_number(inner.substr(0, comma));
            const auto phi = parse_number(inner.substr(comma + 1));
            if (theta && phi)
                return elliptical(*theta, *phi);
        }
    }
    throw FormatError("bad projector label '" + std::string(label) + "'");
}

Matrix4c TomoSetting::matrix() const { return kron(p1.matrix(), p2.matrix()); }

const std::vector<TomoSetting>& standard_settings() {
    static const std::vector<TomoSetting> settings{
        {K::H, K::H}, {K::H, K::V}, {K::V, K::V}, {K::V, K::H}, {K::R, K::H}, {K::R, K::V},
        {K::D, K::V}, {K::D, K::H}, {K::D, K::R}, {K::D, K::D}, {K::R, K::D}, {K::H, K::D},
        {K::V, K::D}, {K::V, K::L}, {K::H, K::L}, {K::R, K::L}};
    return settings;
}

Eigen::MatrixXd design_matrix(const std::vector<TomoSetting>& settings) {
    Eigen::MatrixXd b(static_cast<Eigen::Index>(settings.size()), 16);
    for (std::size_t k = 0; k < settings.size(); ++k) {
        const Matrix4c m = settings[k].matrix();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                b(static_cast<Eigen::Index>(k), 4 * i + j) =
                    (m * kron(pauli(i), pauli(j))).trace().real();
    }
    return b;
}

double design_condition_number(const std::vector<TomoSetting>& settings) {
    const Eigen::VectorXd sv = design_matrix(settings).jacobiSvd().singularValues();
    if (sv.size() < 16 || sv(sv.size() - 1) <= 1e-12 * sv(0))
        return std::numeric_limits<double>::infinity();
    return sv(0) / sv(sv.size() - 1);
}

double TomoData::total_counts() const {
    double n = 0.0;
    for (double c : counts)
        n += c;
    return n;
}

void TomoData::validate() const {
    if (settings.size() != counts.size())
        throw DomainError("tomography data has mismatched settings and counts");
    if (settings.empty())
        throw DomainError("tomography data is empty");
    for (double c : counts)
        if (!std::isfinite(c) || c < 0.0)
            throw DomainError("tomography counts must be finite and nonnegative");
}

TomoData expected_tomography(const DensityMatrix& rho, double counts_per_setting,
                             const std::vector<TomoSetting>& settings) {
    if (!(counts_per_setting > 0.0) || !std::isfinite(counts_per_setting))
        throw DomainError("counts per setting must be positive");
    TomoData data{settings, {}};
    for (const TomoSetting& s : settings)
        data.counts.push_back(counts_per_setting *
                              std::max(0.0, (rho.matrix() * s.matrix()).trace().real()));
    return data;
}

TomoData simulate_tomography(const DensityMatrix& rho, double counts_per_setting,
                             std::uint64_t seed, const std::vector<TomoSetting>& settings) {
    TomoData data = expected_tomography(rho, counts_per_setting, settings);
    Rng rng = derive_rng(seed, 0);
    for (double& c : data.counts)
        c = c > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(c)(rng)) : 0.0;
    return data;
}

LinearEstimate linear_reconstruct(const TomoData& data) {
    data.validate();
    const Eigen::MatrixXd b = design_matrix(data.settings);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() < 16 || sv(15) <= 1e-12 * sv(0))
        throw DomainError("tomography settings are not informationally complete");

    const Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(
        data.counts.data(), static_cast<Eigen::Index>(data.counts.size()));
    const Eigen::VectorXd r = svd.solve(n);
    Matrix4c m = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m += r(4 * i + j) * kron(pauli(i), pauli(j));
    const double tr = m.trace().real();
    if (!(tr > 0.0))
        throw DomainError("tomography data carries no signal");
    m /= tr;
    m = 0.5 * (m + m.adjoint());
    return {m, hermitian_eigenvalues(m)(3)};
}

double fitted_flux(const TomoData& data, const DensityMatrix& rho) {
    data.validate();
    double q = 0.0;
    for (const TomoSetting& s : data.settings)
        q += (rho.matrix() * s.matrix()).trace().real();
    return data.total_counts() / q;
}

double poisson_log_likelihood(const TomoData& data, const DensityMatrix& rho) {
    const double flux = fitted_flux(data, rho);
    double ll = 0.0;
    for (std::size_t k = 0; k < data.settings.size(); ++k) {
        const double mu = flux * std::max(0.0, (rho.matrix() * data.settings[k].matrix()).trace().real());
        const double n = data.counts[k];
        if (n > 0.0) {
            if (mu <= 0.0)
                return -std::numeric_limits<double>::infinity();
            ll += n * std::log(mu);
        }
        ll -= mu + std::lgamma(n + 1.0);
    }
    return ll;
}

MlResult ml_reconstruct(const TomoData& data, const MlOptions& options) {
    data.validate();
    const double total = data.total_counts();
    if (!(total > 0.0))
        throw DomainError("tomography data carries no signal");

    std::vector<Matrix4c> ms;
    Matrix4c m_sum = Matrix4c::Zero();
    for (const TomoSetting& s : data.settings) {
        ms.push_back(s.matrix());
        m_sum += ms.back();
    }
    const std::vector<double>& n = data.counts;

    // -sum n_k log q_k + N log Q + (Tr G - 1)^2 with G = T^dag T, q_k = Tr(G M_k).
    const Objective objective = [&](std::span<const double> x, std::span<double> grad) {
        const Matrix4c t = unpack(x);
        const Matrix4c g = t.adjoint() * t;
        const double tr = g.trace().real();
        const double q_sum = (g * m_sum).trace().real();
        if (!(q_sum > 0.0))
            return std::numeric_limits<double>::infinity();
        double f = total * std::log(q_sum) + (tr - 1.0) * (tr - 1.0);
        Matrix4c a = (total / q_sum) * m_sum + 2.0 * (tr - 1.0) * Matrix4c::Identity();
        for (std::size_t k = 0; k < ms.size(); ++k) {
            if (n[k] == 0.0)
                continue;
            const double q = (g * ms[k]).trace().real();
            if (!(q > 0.0))
                return std::numeric_limits<double>::infinity();
            f -= n[k] * std::log(q);
            a -= (n[k] / q) * ms[k];
        }
        if (!grad.empty()) {
            const Matrix4c ta = 2.0 * t * a;
            for (int i = 0; i < 4; ++i)
                grad[i] = ta(i, i).real();
            int k = 4;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j, k += 2) {
                    grad[k] = ta(i, j).real();
                    grad[k + 1] = ta(i, j).imag();
                }
        }
        return f;
    };

    // The linear estimate has zero trace when only non-diagonal settings fire.
    DensityMatrix start = DensityMatrix::maximally_mixed();
    try {
        start = DensityMatrix::repair(linear_reconstruct(data).matrix);
    } catch (const DomainError&) {
    }
    std::vector<double> x0 = pack(triangular_factor(start));
    std::vector<double> none;
    if (!std::isfinite(objective(x0, none))) {
        start = mix({{0.99, start}, {0.01, DensityMatrix::maximally_mixed()}});
        x0 = pack(triangular_factor(start));
    }

    MinimizeOptions mopts;
    mopts.max_iterations = options.max_iterations;
    const double gradient_ok = 1e-7 * (1.0 + total);

    Rng rng = derive_rng(options.seed, 0);
    std::normal_distribution<double> normal(0.0, options.perturbation);
    bool found = false;
    int converged = 0;
    MinimizeResult best{};
    for (int s = 0; s <= options.perturbed_starts; ++s) {
        std::vector<double> x = x0;
        if (s > 0)
            for (double& v : x)
                v += normal(rng);
        if (!std::isfinite(objective(x, none)))
            continue;
        MinimizeResult r = minimize_bfgs(objective, std::move(x), mopts);
        if (!(r.converged || r.gradient_max_norm <= gradient_ok))
            continue;
        ++converged;
        if (!found || r.value < best.value) {
            found = true;
            best = std::move(r);
        }
    }
    if (!found)
        throw ConvergenceError("maximum-likelihood reconstruction: no start converged");

    const Matrix4c t = unpack(best.x);
    DensityMatrix rho = DensityMatrix::repair(t.adjoint() * t);
    double log_likelihood = poisson_log_likelihood(data, rho);

    // Refit on the rank boundary with eigenvalues below kRankTol dropped; keep the likelier fit.
    constexpr double kRankTol = 1e-6;
    const HermitianEigen eig = hermitian_eigen(rho.matrix());
    if (eig.values(3) < kRankTol) {
        const Eigen::Vector4d kept = (eig.values.array() < kRankTol).select(0.0, eig.values);
        const DensityMatrix snapped = DensityMatrix::repair(
            eig.vectors * kept.cast<cplx>().asDiagonal() * eig.vectors.adjoint());
        std::vector<double> x = pack(triangular_factor(snapped));
        if (std::isfinite(objective(x, none))) {
            const MinimizeResult r = minimize_bfgs(objective, std::move(x), mopts);
            const Matrix4c tr = unpack(r.x);
            const DensityMatrix refit = DensityMatrix::repair(tr.adjoint() * tr);
            const double ll = poisson_log_likelihood(data, refit);
            if (ll >= log_likelihood) {
                rho = refit;
                log_likelihood = ll;
            }
        }
    }
    return {rho, fitted_flux(data, rho), log_likelihood, converged};
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    const Matrix4c prod = psd_sqrt(rho1.matrix()) * psd_sqrt(rho2.matrix());
    const double nuclear = prod.jacobiSvd().singularValues().sum();
    return std::clamp(nuclear * nuclear, 0.0, 1.0);
}

}  // namespace ering
