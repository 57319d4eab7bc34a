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

#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ering/bell.hpp"
#include "ering/errors.hpp"
#include "ering/qstate.hpp"
#include "ering/random_states.hpp"
#include "support/oracles.hpp"

using namespace ering;

namespace {

constexpr double kPi = oracle::kPi;
const double kTsirelson = 2.0 * oracle::kSqrt2;

void expect_matrix2_near(const Matrix2c& a, const Matrix2c& b, double tol) {
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), tol) << a << "\nvs\n" << b;
}

// Family member with diagonal (A, B, B, D) and -p/2 coupling.
DensityMatrix family_member(double p, double b, double a) {
    Matrix4c m = Matrix4c::Zero();
    m(HH, HH) = a;
    m(HV, HV) = m(VH, VH) = b;
    m(VV, VV) = 1.0 - a - 2.0 * b;
    m(HV, VH) = m(VH, HV) = -p / 2.0;
    return DensityMatrix(m);
}

std::array<double, 8> raw_angles(const ChshSettings& s) {
    return {s.a1.theta(), s.a1.phi(), s.a1p.theta(), s.a1p.phi(),
            s.a2.theta(), s.a2.phi(), s.a2p.theta(), s.a2p.phi()};
}

ChshSettings from_raw(const std::array<double, 8>& x) {
    return {BlochSetting(x[0], x[1]), BlochSetting(x[2], x[3]), BlochSetting(x[4], x[5]),
            BlochSetting(x[6], x[7])};
}

// Noiseless counts N Tr(rho Pi1 x Pi2) for a linear polarizer pair, built from
// the projector cos/sin components directly.
double ideal_counts(const DensityMatrix& rho, double t1_deg, double t2_deg, double n) {
    auto proj = [](double deg) {
        const double t = deg * kPi / 180.0;
        oracle::M2 m;
        m << std::cos(t) * std::cos(t), std::cos(t) * std::sin(t), std::cos(t) * std::sin(t),
            std::sin(t) * std::sin(t);
        return m;
    };
    const oracle::M4 op = oracle::kron(proj(t1_deg), proj(t2_deg));
    return n * (rho.matrix() * op).trace().real();
}

CountsTable ideal_table(const DensityMatrix& rho, const ChshAnglePlan& plan, double n) {
    CountsTable t;
    t.duration = 1.0;
    for (const auto& [a, b] : plan.joint_settings())
        t.set(a, b, ideal_counts(rho, a, b, n));
    return t;
}

}  // namespace

TEST(BlochSetting, Normalization) {
    const BlochSetting s(-kPi / 2, 0.0);
    EXPECT_NEAR(s.theta(), kPi / 2, 1e-15);
    EXPECT_NEAR(std::abs(s.phi()), kPi, 1e-15);
    EXPECT_LT((s.direction() - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-15);

    for (int k = 0; k < 500; ++k) {
        std::mt19937_64 rng(k);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        const double t = u(rng), f = u(rng);
        const BlochSetting b(t, f);
        EXPECT_GE(b.theta(), 0.0);
        EXPECT_LE(b.theta(), kPi);
        EXPECT_GT(b.phi(), -kPi);
        EXPECT_LE(b.phi(), kPi);
        const Eigen::Vector3d raw(std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), std::cos(t));
        EXPECT_LT((b.direction() - raw).norm(), 1e-12);
    }
}

TEST(BlochSetting, PolarizerAngle) {
    const BlochSetting s = BlochSetting::polarizer(kPi / 8);
    EXPECT_NEAR(s.theta(), kPi / 4, 1e-15);
    EXPECT_NEAR(s.polarization_angle(), kPi / 8, 1e-15);
}

TEST(Observable, PauliPoints) {
    expect_matrix2_near(observable(BlochSetting(0.0, 0.0)), oracle::sigma(3), 1e-15);
    expect_matrix2_near(observable(BlochSetting(kPi / 2, 0.0)), oracle::sigma(1), 1e-15);
    expect_matrix2_near(observable(BlochSetting(kPi / 2, kPi / 2)), oracle::sigma(2), 1e-15);
}

TEST(Observable, HermitianTracelessInvolution) {
    for (int k = 0; k < 200; ++k) {
        const Matrix2c o = observable(BlochSetting(0.03 * k, -1.7 + 0.021 * k));
        EXPECT_LT((o - o.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT(std::abs(o.trace()), 1e-15);
        EXPECT_LT((o * o - Matrix2c::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Correlation, KnownValues) {
    for (int k = 0; k < 50; ++k) {
        const BlochSetting s(0.07 * k, 0.13 * k - 3.0);
        EXPECT_NEAR(correlation(singlet(), s, s), -1.0, 1e-14);
    }
    const BlochSetting x(kPi / 2, 0.0);
    for (double p : {0.0, 0.3, 0.82, 1.0})
        EXPECT_NEAR(correlation(werner(p), x, x), -p, 1e-14);
}

TEST(Correlation, MatchesClosedFormForFamily) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double p = u(rng);
        const double b = p / 2 + (0.5 - p / 2) * u(rng);
        const double a = (1.0 - 2.0 * b) * u(rng);
        const DensityMatrix rho = family_member(p, b, a);
        const double t1 = kPi * u(rng), t2 = kPi * u(rng);
        const double f1 = 2 * kPi * u(rng) - kPi, f2 = 2 * kPi * u(rng) - kPi;
        const double c = correlation(rho, BlochSetting(t1, f1), BlochSetting(t2, f2));
        EXPECT_NEAR(c, oracle::family_correlation(p, b, t1, f1, t2, f2), 1e-10) << k;
        EXPECT_GE(c, -1.0 - 1e-12);
        EXPECT_LE(c, 1.0 + 1e-12);
    }
}

TEST(Correlation, MatchesPauliExpansionOnRandomStates) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 200; ++k) {
        Rng r = derive_rng(21, k);
        const DensityMatrix rho = random_density_matrix(r);
        const double t1 = u(rng), f1 = u(rng), t2 = u(rng), f2 = u(rng);
        EXPECT_NEAR(correlation(rho, BlochSetting(t1, f1), BlochSetting(t2, f2)),
                    oracle::pauli_correlation(rho.matrix(), t1, f1, t2, f2), 1e-12);
    }
}

TEST(Chsh, SingletStandardBlochAngles) {
    const ChshSettings s{BlochSetting(0.0, 0.0), BlochSetting(kPi / 2, 0.0),
                         BlochSetting(kPi / 4, 0.0), BlochSetting(3 * kPi / 4, 0.0)};
    EXPECT_NEAR(std::abs(chsh(singlet(), s)), kTsirelson, 1e-14);
}

TEST(Chsh, MaximallyMixedIsZero) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        std::array<double, 8> x;
        for (double& v : x)
            v = u(rng);
        EXPECT_NEAR(chsh(DensityMatrix::maximally_mixed(), from_raw(x)), 0.0, 1e-15);
    }
}

TEST(Chsh, QuotedOptimalSettingsOnWernerHalf) {
    const ChshOptimum opt = chsh_optimal_family(0.5, 0.375);
    const double s = chsh(werner(0.5), opt.settings);
    EXPECT_NEAR(std::abs(s), std::sqrt(2.0), 1e-14);
    // Independent evaluation at the quoted angles fixes the sign.
    const double x[8] = {-kPi / 2, kPi / 4, kPi / 2, -kPi / 4, kPi / 2, kPi / 2, -kPi / 2, 0.0};
    EXPECT_NEAR(s, oracle::chsh_angles(werner(0.5).matrix(), x), 1e-14);
}

TEST(ChshOptimalFamily, Values) {
    EXPECT_NEAR(chsh_optimal_family(1.0, 0.5).abs_s, kTsirelson, 1e-14);
    EXPECT_NEAR(chsh_optimal_family(1.0 / std::sqrt(2.0), 0.4).abs_s, 2.0, 1e-14);
    EXPECT_NEAR(chsh_optimal_family(0.47, 0.3675).abs_s, 2 * oracle::kSqrt2 * 0.47, 1e-14);
    EXPECT_NEAR(chsh_optimal_family(0.47, 0.3675).abs_s, 1.3294, 1e-4);
    EXPECT_THROW(chsh_optimal_family(0.5, 0.2), DomainError);
    EXPECT_THROW(chsh_optimal_family(1.2, 0.6), DomainError);
}

TEST(ChshOptimalFamily, IndependentOfDiagonal) {
    for (double p : {0.2, 0.5, 0.9})
        for (double b : {p / 2, (p / 2 + 0.5) / 2, 0.5})
            for (double a : {0.0, (1 - 2 * b) / 2, 1 - 2 * b}) {
                const ChshOptimum opt = chsh_optimal_family(p, b);
                EXPECT_NEAR(chsh(family_member(p, b, a), opt.settings), opt.s, 1e-14);
                EXPECT_NEAR(opt.abs_s, 2 * oracle::kSqrt2 * p, 1e-14);
            }
}

TEST(Horodecki, MatchesClosedFormOnFamilies) {
    for (int i = 0; i <= 20; ++i) {
        const double p = i / 20.0;
        EXPECT_NEAR(chsh_max_horodecki(werner(p)), 2 * oracle::kSqrt2 * p, 1e-12);
    }
    EXPECT_NEAR(chsh_max_horodecki(mems(0.8)), 2 * oracle::kSqrt2 * 0.8, 1e-12);
}

TEST(ChshOptimize, KnownStates) {
    EXPECT_NEAR(chsh_optimize(singlet()).abs_s, kTsirelson, 1e-6);
    EXPECT_NEAR(chsh_optimize(werner(0.6)).abs_s, 1.6971, 1e-4);
    EXPECT_NEAR(chsh_optimize(werner(0.6)).abs_s, 2 * oracle::kSqrt2 * 0.6, 1e-6);
    EXPECT_NEAR(chsh_optimize(mems(0.8)).abs_s, 2.2627, 1e-4);
}

TEST(ChshOptimize, WernerGridAndViolationBoundary) {
    for (int i = 0; i <= 20; ++i) {
        const double p = i / 20.0;
        const ChshOptimum o = chsh_optimize(werner(p));
        EXPECT_NEAR(o.abs_s, 2 * oracle::kSqrt2 * p, 1e-6) << p;
        EXPECT_EQ(o.abs_s > 2.0 + 1e-9, p > 1.0 / std::sqrt(2.0)) << p;
    }
}

TEST(ChshOptimize, ReturnedSettingsReproduceValue) {
    for (int k = 0; k < 20; ++k) {
        Rng r = derive_rng(31, k);
        const DensityMatrix rho = random_density_matrix(r);
        const ChshOptimum o = chsh_optimize(rho);
        EXPECT_NEAR(std::abs(chsh(rho, o.settings)), o.abs_s, 1e-6);
        EXPECT_NEAR(o.abs_s, chsh_max_horodecki(rho), 1e-6);
    }
}

TEST(ChshOptimize, MemsHighBranchMatchesClosedForm) {
    for (int i = 0; i <= 10; ++i) {
        const double p = 2.0 / 3.0 + (1.0 / 3.0) * i / 10.0;
        EXPECT_NEAR(chsh_optimize(mems(p)).abs_s, chsh_optimal_family(p, mems_g(p)).abs_s, 1e-6) << p;
    }
}

TEST(ChshOptimize, StationaryAtOptimum) {
    const double h = 1e-5;
    for (const DensityMatrix& rho : {werner(0.9), mems(0.8), tune_entanglement(0.9, 0.7)}) {
        const ChshOptimum o = chsh_optimize(rho);
        const auto x = raw_angles(o.settings);
        for (int k = 0; k < 8; ++k) {
            auto up = x, down = x;
            up[k] += h;
            down[k] -= h;
            const double d = (chsh(rho, from_raw(up)) - chsh(rho, from_raw(down))) / (2 * h);
            EXPECT_LE(std::abs(d), 1e-4) << "angle " << k;
        }
    }
}

TEST(ChshOptimize, BeatsRandomSettings) {
    const DensityMatrix rho = tune_entanglement(0.85, 0.65);
    const double best = chsh_optimize(rho).abs_s;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int k = 0; k < 10000; ++k) {
        std::array<double, 8> x;
        for (double& v : x)
            v = u(rng);
        ASSERT_LE(std::abs(chsh(rho, from_raw(x))), best + 1e-9) << k;
    }
}

TEST(ChshOptimize, DeterministicForSeed) {
    Rng r = derive_rng(41, 0);
    const DensityMatrix rho = random_density_matrix(r);
    const ChshOptimum a = chsh_optimize(rho, {.starts = 8, .seed = 3});
    const ChshOptimum b = chsh_optimize(rho, {.starts = 8, .seed = 3});
    EXPECT_EQ(a.s, b.s);
    EXPECT_EQ(raw_angles(a.settings), raw_angles(b.settings));
}

TEST(AnglePlan, JointSettings) {
    const auto js = kStandardChshPlan.joint_settings();
    ASSERT_EQ(js.size(), 16u);
    const ChshSettings b = kStandardChshPlan.bloch_settings();
    EXPECT_NEAR(b.a1p.theta(), kPi / 2, 1e-15);
    EXPECT_NEAR(b.a2.theta(), kPi / 4, 1e-15);
}

TEST(CountsTable, KeyingModuloHalfTurn) {
    CountsTable t;
    t.set(0.0, 22.5, 10.0);
    EXPECT_EQ(t.at(180.0, 22.5), 10.0);
    EXPECT_EQ(t.at(-180.0, 202.5), 10.0);
    t.set(180.0, 22.5, 12.0);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_FALSE(t.find(90.0, 22.5).has_value());
    EXPECT_THROW(t.at(90.0, 22.5), DomainError);
    EXPECT_THROW(t.set(1.0, 2.0, -1.0), DomainError);
    EXPECT_THROW(t.set(1.0, 2.0, std::nan("")), DomainError);
}

TEST(CountsCsv, RoundTrip) {
    CountsTable t;
    t.duration = 11.25;
    t.set(0.0, 22.5, 1234.0);
    t.set(90.0, 112.5, 7.0);
    std::stringstream ss;
    write_counts_csv(ss, t);
    const CountsTable back = read_counts_csv(ss);
    EXPECT_EQ(back.duration, 11.25);
    EXPECT_EQ(back.at(0.0, 22.5), 1234.0);
    EXPECT_EQ(back.at(90.0, 112.5), 7.0);
}

TEST(CountsCsv, MalformedInputs) {
    for (const char* text : {"", "a,b,c\n0,0,1\n", "theta1_deg,theta2_deg,counts\n0,0\n",
                             "theta1_deg,theta2_deg,counts\n0,x,1\n",
                             "theta1_deg,theta2_deg,counts\n0,0,-3\n",
                             "theta1_deg,theta2_deg,counts\n0,0,nan\n"}) {
        std::istringstream is(text);
        EXPECT_THROW(read_counts_csv(is), FormatError) << text;
    }
}

TEST(ChshFromCounts, IdealSingletAtStandardPlan) {
    const BellEstimate e = chsh_from_counts(ideal_table(singlet(), kStandardChshPlan, 1e6), kStandardChshPlan);
    EXPECT_NEAR(e.abs_s, kTsirelson, 1e-12);
}

TEST(ChshFromCounts, UniformCountsGiveZero) {
    CountsTable t;
    for (const auto& [a, b] : kStandardChshPlan.joint_settings())
        t.set(a, b, 500.0);
    EXPECT_EQ(chsh_from_counts(t, kStandardChshPlan).s, 0.0);
}

TEST(ChshFromCounts, EqualsStateValueForNoiselessCounts) {
    const ChshAnglePlan plans[] = {kStandardChshPlan, {10.0, 50.0, 30.0, 75.0}, {0.0, 30.0, 100.0, 5.0}};
    for (int k = 0; k < 30; ++k) {
        Rng r = derive_rng(51, k);
        const DensityMatrix rho = random_density_matrix(r);
        for (const auto& plan : plans) {
            const BellEstimate e = chsh_from_counts(ideal_table(rho, plan, 1e5), plan);
            EXPECT_NEAR(e.s, chsh(rho, plan.bloch_settings()), 1e-12);
        }
    }
}

TEST(ChshFromCounts, ScaleInvariance) {
    const CountsTable base = ideal_table(werner(0.9), kStandardChshPlan, 1e4);
    const BellEstimate e0 = chsh_from_counts(base, kStandardChshPlan);
    for (double c : {0.01, 4.0, 100.0}) {
        CountsTable scaled;
        for (const auto& e : base.entries())
            scaled.set(e.theta1_deg, e.theta2_deg, c * e.counts);
        const BellEstimate e1 = chsh_from_counts(scaled, kStandardChshPlan);
        EXPECT_NEAR(e1.s, e0.s, 1e-12);
        EXPECT_NEAR(e1.sigma, e0.sigma / std::sqrt(c), 1e-12 * e0.sigma / std::sqrt(c) + 1e-15);
    }
}

TEST(ChshFromCounts, SigmaMatchesFiniteDifferencePropagation) {
    const CountsTable base = ideal_table(tune_entanglement(0.9, 0.6), kStandardChshPlan, 2e3);
    const double s0 = chsh_from_counts(base, kStandardChshPlan).s;
    double var = 0.0;
    for (const auto& e : base.entries()) {
        CountsTable bumped = base;
        const double h = 1e-4 * std::max(e.counts, 1.0);
        bumped.set(e.theta1_deg, e.theta2_deg, e.counts + h);
        const double d = (chsh_from_counts(bumped, kStandardChshPlan).s - s0) / h;
        var += d * d * e.counts;
    }
    EXPECT_NEAR(chsh_from_counts(base, kStandardChshPlan).sigma, std::sqrt(var), 1e-4 * std::sqrt(var));
}

TEST(ChshFromCounts, Errors) {
    CountsTable t = ideal_table(singlet(), kStandardChshPlan, 100.0);
    CountsTable missing;
    for (const auto& e : t.entries())
        if (e.theta1_deg != 0.0 || e.theta2_deg != 22.5)
            missing.set(e.theta1_deg, e.theta2_deg, e.counts);
    EXPECT_THROW(chsh_from_counts(missing, kStandardChshPlan), DomainError);

    CountsTable zeros;
    for (const auto& [a, b] : kStandardChshPlan.joint_settings())
        zeros.set(a, b, 0.0);
    EXPECT_THROW(chsh_from_counts(zeros, kStandardChshPlan), DomainError);
}

TEST(ChshFromCounts, ViolationSigmas) {
    const BellEstimate e{2.5, 2.5, 0.01};
    EXPECT_NEAR(e.violation_sigmas(), 50.0, 1e-9);
}

TEST(ChshOptimize, MemsLowBranchPicksUpDiagonalCorrelation) {
    // t_zz = 1 - 4g = -1/3 below p = 2/3, which beats the transverse pair once p < 1/3.
    for (double p : {0.05, 0.2, 0.3, 0.5}) {
        const double expected = 2.0 * std::sqrt(p * p + std::max(p * p, 1.0 / 9.0));
        EXPECT_NEAR(chsh_optimize(mems(p)).abs_s, expected, 1e-6) << p;
    }
}
