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

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ering/entanglement.hpp"
#include "ering/errors.hpp"
#include "ering/qstate.hpp"
#include "ering/random_states.hpp"
#include "support/oracles.hpp"

using namespace ering;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix basis_state(int k) {
    Vector4c v = Vector4c::Zero();
    v(k) = 1.0;
    return DensityMatrix::from_pure(PureState(v));
}

}  // namespace

TEST(Tangle, KnownValues) {
    EXPECT_NEAR(tangle(singlet()), 1.0, 1e-12);
    EXPECT_NEAR(tangle(werner(1.0 / 3.0)), 0.0, 1e-12);
    EXPECT_NEAR(tangle(werner(0.82)), 0.5329, 1e-12);
    EXPECT_NEAR(concurrence(werner(0.82)), 0.73, 1e-12);
    EXPECT_NEAR(tangle(DensityMatrix::maximally_mixed()), 0.0, 1e-15);
    EXPECT_NEAR(tangle(basis_state(HV)), 0.0, 1e-12);
}

TEST(Tangle, AgreesWithWoottersOracleOnRandomStates) {
    for (int k = 0; k < 200; ++k) {
        Rng rng = derive_rng(11, k);
        const DensityMatrix rho = random_density_matrix(rng);
        EXPECT_NEAR(concurrence(rho), oracle::wootters_concurrence(rho.matrix()), 1e-8) << k;
    }
}

TEST(Tangle, PureStatesMatchAmplitudeFormula) {
    for (int k = 0; k < 200; ++k) {
        Rng rng = derive_rng(12, k);
        const PureState psi = random_pure_state(rng);
        const auto& a = psi.amplitudes();
        const double c = 2.0 * std::abs(a(HH) * a(VV) - a(HV) * a(VH));
        EXPECT_NEAR(concurrence(DensityMatrix::from_pure(psi)), c, 1e-7) << k;
    }
}

TEST(LinearEntropy, KnownValues) {
    EXPECT_NEAR(linear_entropy(singlet()), 0.0, 1e-15);
    EXPECT_NEAR(linear_entropy(basis_state(VH)), 0.0, 1e-15);
    EXPECT_NEAR(linear_entropy(DensityMatrix::maximally_mixed()), 1.0, 1e-15);
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        EXPECT_NEAR(linear_entropy(werner(p)), 1.0 - p * p, 1e-14);
    }
}

TEST(Ppt, KnownValues) {
    EXPECT_TRUE(is_separable_ppt(werner(0.2)).separable);
    EXPECT_FALSE(is_separable_ppt(werner(0.5)).separable);
    const PptResult product = is_separable_ppt(basis_state(HV));
    EXPECT_TRUE(product.separable);
    EXPECT_EQ(product.negativity, 0.0);
    const PptResult s = is_separable_ppt(singlet());
    EXPECT_NEAR(s.min_eigenvalue, -0.5, 1e-14);
    EXPECT_NEAR(s.negativity, 1.0, 1e-14);
}

TEST(Ppt, MinimumEigenvalueMatchesIndexLoopOracle) {
    for (int k = 0; k < 100; ++k) {
        Rng rng = derive_rng(13, k);
        const DensityMatrix rho = random_density_matrix(rng);
        EXPECT_NEAR(is_separable_ppt(rho).min_eigenvalue, oracle::min_pt_eigenvalue(rho.matrix()), 1e-12);
    }
}

TEST(Ppt, TanglePositiveIffNptOnRandomMixtures) {
    int entangled = 0;
    for (int k = 0; k < 1000; ++k) {
        Rng rng = derive_rng(14, k);
        const DensityMatrix rho = random_density_matrix(rng);
        const bool npt = !is_separable_ppt(rho).separable;
        const bool positive = tangle(rho) > 0.0;
        EXPECT_EQ(positive, npt) << "draw " << k << " tangle " << tangle(rho);
        entangled += npt;
    }
    // Both classes must actually occur.
    EXPECT_GT(entangled, 50);
    EXPECT_LT(entangled, 950);
}

TEST(TangleCurve, KnownValues) {
    EXPECT_NEAR(tangle_curve(StateFamily::Werner, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(tangle_curve(StateFamily::Werner, 8.0 / 9.0), 0.0, 1e-15);
    EXPECT_EQ(tangle_curve(StateFamily::Werner, 0.95), 0.0);
    EXPECT_NEAR(tangle_curve(StateFamily::Mems, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(tangle_curve(StateFamily::Mems, 0.552), 0.5, 2e-3);
    EXPECT_NEAR(tangle_curve(StateFamily::Mems, 16.0 / 27.0), 4.0 / 9.0, 1e-14);
    EXPECT_NEAR(tangle_curve(StateFamily::Mems, 8.0 / 9.0), 0.0, 1e-14);
    EXPECT_EQ(tangle_curve(StateFamily::Mems, 0.95), 0.0);
    EXPECT_THROW(tangle_curve(StateFamily::Werner, 1.1), DomainError);
    EXPECT_THROW(tangle_curve(StateFamily::Mems, -0.1), DomainError);
}

TEST(TangleCurve, MemsBoundaryEntropy) {
    EXPECT_NEAR(mems_chsh_boundary_entropy(), 0.552, 1e-3);
    EXPECT_NEAR(mems_chsh_boundary_entropy(), linear_entropy(mems(kInvSqrt2)), 1e-12);
    EXPECT_NEAR(tangle_curve(StateFamily::Mems, mems_chsh_boundary_entropy()), 0.5, 1e-12);
}

TEST(TangleCurve, ConsistentWithWernerFamily) {
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        const DensityMatrix w = werner(p);
        EXPECT_NEAR(tangle(w), tangle_curve(StateFamily::Werner, linear_entropy(w)), 1e-10) << p;
    }
}

TEST(TangleCurve, ConsistentWithMemsFamily) {
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        const DensityMatrix m = mems(p);
        EXPECT_NEAR(tangle(m), p * p, 1e-10) << p;
        EXPECT_NEAR(tangle(m), tangle_curve(StateFamily::Mems, linear_entropy(m)), 1e-10) << p;
    }
}

TEST(TangleCurve, MemsDominatesWerner) {
    for (int i = 0; i <= 1000; ++i) {
        const double s = (8.0 / 9.0) * i / 1000.0;
        EXPECT_LE(tangle_curve(StateFamily::Werner, s), tangle_curve(StateFamily::Mems, s) + 1e-15) << s;
    }
}

TEST(TangleCurve, NoRandomStateAboveMemsFrontier) {
    for (int k = 0; k < 1000; ++k) {
        Rng rng = derive_rng(15, k);
        const EntropyPoint e = entropy_point(random_density_matrix(rng));
        EXPECT_LE(e.tangle, tangle_curve(StateFamily::Mems, e.linear_entropy) + 1e-9) << k;
    }
}

TEST(TangleCurve, WernerTangleFromFidelity) {
    for (int i = 0; i <= 100; ++i) {
        const double f = 0.25 + 0.75 * i / 100.0;
        const double c = std::max(0.0, 2.0 * f - 1.0);
        EXPECT_NEAR(tangle(werner_from_fidelity(f)), c * c, 1e-10) << f;
    }
}

TEST(Classify, WernerRegions) {
    const NonlocalityClass a = classify(StateFamily::Werner, 0.9);
    EXPECT_EQ(a.region, NonlocalRegion::ViolatesLocalRealism);
    EXPECT_LT(linear_entropy(werner(0.9)), 0.5);
    EXPECT_EQ(a.s_l_hi, 0.5);

    const NonlocalityClass b = classify(StateFamily::Werner, 0.5);
    EXPECT_EQ(b.region, NonlocalRegion::NonseparableNoChshViolation);
    EXPECT_EQ(b.s_l_lo, 0.5);
    EXPECT_NEAR(b.s_l_hi, 8.0 / 9.0, 1e-15);

    EXPECT_EQ(classify(StateFamily::Werner, 1.0 / 3.0).region, NonlocalRegion::SeparableLocal);
    EXPECT_EQ(classify(StateFamily::Werner, 0.0).region, NonlocalRegion::SeparableLocal);
    EXPECT_EQ(classify(StateFamily::Werner, kInvSqrt2).region,
              NonlocalRegion::NonseparableNoChshViolation);
    EXPECT_THROW(classify(StateFamily::Werner, 1.01), DomainError);
}

TEST(Classify, MemsRegions) {
    EXPECT_EQ(classify(StateFamily::Mems, 0.9).region, NonlocalRegion::ViolatesLocalRealism);
    EXPECT_EQ(classify(StateFamily::Mems, kInvSqrt2).region,
              NonlocalRegion::NonseparableNoChshViolation);
    EXPECT_EQ(classify(StateFamily::Mems, std::nextafter(kInvSqrt2, 1.0)).region,
              NonlocalRegion::ViolatesLocalRealism);
    for (int i = 0; i <= 100; ++i)
        EXPECT_NE(classify(StateFamily::Mems, i / 100.0).region, NonlocalRegion::SeparableLocal);
    EXPECT_NEAR(classify(StateFamily::Mems, 0.2).s_l_lo, mems_chsh_boundary_entropy(), 1e-15);
    EXPECT_THROW(classify(StateFamily::Mems, -0.01), DomainError);
}

TEST(Classify, RegionsAgreeWithMeasures) {
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        for (StateFamily f : {StateFamily::Werner, StateFamily::Mems}) {
            const DensityMatrix rho = f == StateFamily::Werner ? werner(p) : mems(p);
            const NonlocalityClass c = classify(f, p);
            const double s = linear_entropy(rho);
            EXPECT_GE(s, c.s_l_lo - 1e-12);
            if (c.hi_inclusive)
                EXPECT_LE(s, c.s_l_hi + 1e-12);
            else
                EXPECT_LT(s, c.s_l_hi + 1e-12);
            if (c.region == NonlocalRegion::SeparableLocal)
                EXPECT_TRUE(is_separable_ppt(rho).separable);
        }
    }
}

TEST(Families, NamesRoundTrip) {
    EXPECT_EQ(parse_family("werner"), StateFamily::Werner);
    EXPECT_EQ(parse_family(to_string(StateFamily::Mems)), StateFamily::Mems);
    EXPECT_THROW(parse_family("bogus"), DomainError);
}

TEST(EntropyCsv, HeaderAndRows) {
    const std::vector<EntropySample> samples{{0.3276, 0.5329, StateFamily::Werner, 0.82}};
    std::ostringstream os;
    write_entropy_csv(os, samples);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "S_L,T,family,p");
    EXPECT_NE(text.find("0.3276,0.5329,werner,0.82"), std::string::npos) << text;
}
