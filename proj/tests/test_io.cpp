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
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ering/csv.hpp"
#include "ering/errors.hpp"
#include "ering/io.hpp"
#include "ering/source_config.hpp"

using namespace ering;

TEST(Csv, ParseNumber) {
    EXPECT_EQ(parse_number("1.5"), 1.5);
    EXPECT_EQ(parse_number(" +2e3 "), 2000.0);
    EXPECT_EQ(parse_number("-0.25"), -0.25);
    for (const char* bad : {"", " ", "1.5x", "nan", "inf", "abc", "1,2"})
        EXPECT_FALSE(parse_number(bad).has_value()) << bad;
}

TEST(Csv, NumbersRoundTrip) {
    for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, 2.5564, 1e-300, -7.25e12})
        EXPECT_EQ(parse_number(csv_number(x)), x) << csv_number(x);
}

TEST(Csv, SplitKeepsParenthesizedCommas) {
    const auto f = split_csv_line("3,E(1.5,0.25),H,42");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "E(1.5,0.25)");
    EXPECT_EQ(f[3], "42");
}

TEST(DensityJson, RoundTrip) {
    const DensityMatrix rho = mems(0.45);
    const nlohmann::json j = to_json(rho);
    EXPECT_EQ(j["basis"], nlohmann::json({"HH", "HV", "VH", "VV"}));
    const DensityMatrix back = density_matrix_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.matrix(), rho.matrix());
}

TEST(DensityJson, ComplexEntries) {
    const DensityMatrix rho = DensityMatrix::from_pure(bell_state(BellKind::Phi, 1.0));
    const DensityMatrix back = density_matrix_from_json(to_json(rho));
    EXPECT_LT((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NE(to_json(rho)["im"][0][3].get<double>(), 0.0);
}

TEST(DensityJson, Malformed) {
    EXPECT_THROW(density_matrix_from_json(nlohmann::json::parse("{}")), FormatError);
    EXPECT_THROW(density_matrix_from_json(nlohmann::json::parse(R"({"re": [[1]], "im": [[0]]})")), FormatError);
    nlohmann::json j = to_json(singlet());
    j["basis"] = {"HH", "VH", "HV", "VV"};
    EXPECT_THROW(density_matrix_from_json(j), FormatError);
    j = to_json(singlet());
    j["re"][0][0] = 5.0;
    EXPECT_THROW(density_matrix_from_json(j), DomainError);
}

TEST(BlochJson, LabeledUnits) {
    const nlohmann::json j = to_json(BlochSetting::polarizer(std::numbers::pi / 8));
    EXPECT_NEAR(j["theta_rad"].get<double>(), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(j["polarization_angle_deg"].get<double>(), 22.5, 1e-12);
    EXPECT_TRUE(j.contains("phi_rad"));
    const nlohmann::json s = to_json(kStandardChshPlan.bloch_settings());
    for (const char* k : {"a1", "a1p", "a2", "a2p"})
        EXPECT_TRUE(s.contains(k)) << k;
}

TEST(TomoCsv, RoundTrip) {
    TomoData d = simulate_tomography(werner(0.47), 1e4, 5);
    d.settings[3].p2 = ProjectorSpec::elliptical(0.7, -2.0);
    std::stringstream ss;
    write_tomo_csv(ss, d);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "setting_index,proj1,proj2,counts");
    const TomoData back = read_tomo_csv(ss);
    EXPECT_EQ(back.counts, d.counts);
    ASSERT_EQ(back.settings.size(), d.settings.size());
    for (std::size_t k = 0; k < d.settings.size(); ++k)
        EXPECT_EQ(back.settings[k].matrix(), d.settings[k].matrix()) << k;
}

TEST(TomoCsv, ErrorsCarryLineNumbers) {
    struct Case {
        const char* text;
        std::size_t line;
    };
    const Case cases[] = {
        {"nope\n", 1},
        {"setting_index,proj1,proj2,counts\n0,H,H,10\n1,H,V\n", 3},
        {"setting_index,proj1,proj2,counts\n0,H,H,10\n2,H,V,3\n", 3},
        {"setting_index,proj1,proj2,counts\n0,H,Q,10\n", 2},
        {"setting_index,proj1,proj2,counts\n# comment\n0,H,H,-1\n", 3},
        {"setting_index,proj1,proj2,counts\n0,H,H,ten\n", 2},
    };
    for (const Case& c : cases) {
        std::istringstream is(c.text);
        try {
            read_tomo_csv(is);
            ADD_FAILURE() << "accepted: " << c.text;
        } catch (const FormatError& e) {
            EXPECT_EQ(e.line(), c.line) << e.what();
            EXPECT_NE(std::string(e.what()).find("line " + std::to_string(c.line)), std::string::npos);
        }
    }
    std::istringstream empty("");
    EXPECT_THROW(read_tomo_csv(empty), FormatError);
    std::istringstream header_only("setting_index,proj1,proj2,counts\n");
    EXPECT_THROW(read_tomo_csv(header_only), FormatError);
}

TEST(SourceConfig, DefaultsValidate) {
    const SourceConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_NEAR(c.lambda_pump, c.lambda / 2, 1e-18);
    EXPECT_NEAR(c.alpha, 2.9 * std::numbers::pi / 180, 1e-15);
}

TEST(SourceConfig, ValidationRejectsBadValues) {
    for (const char* key : {"lambda", "R", "pair_rate", "tau_coh", "coincidence_window"}) {
        SourceConfig c;
        c.set(key, 0.0);
        EXPECT_THROW(c.validate(), DomainError) << key;
    }
    SourceConfig c;
    c.detector_qe = 1.2;
    EXPECT_THROW(c.validate(), DomainError);
    c = SourceConfig{};
    c.dark_rate = -1.0;
    EXPECT_THROW(c.validate(), DomainError);
    c = SourceConfig{};
    c.alpha = 2.0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(SourceConfig, FileRoundTrip) {
    SourceConfig c;
    c.alpha = 1.4 * std::numbers::pi / 180;
    c.visibility = 0.904;
    std::stringstream ss;
    write_source_config(ss, c);
    const SourceConfig back = read_source_config(ss);
    for (const auto& [k, v] : c.entries())
        EXPECT_EQ(back.get(k), v) << k;
}

TEST(SourceConfig, ParsesCommentsAndKeepsDefaults) {
    std::istringstream is("# lab settings\n\nvisibility = 0.94  # measured\n  dark_rate=20\n");
    const SourceConfig c = read_source_config(is);
    EXPECT_EQ(c.visibility, 0.94);
    EXPECT_EQ(c.dark_rate, 20.0);
    EXPECT_EQ(c.pair_rate, SourceConfig{}.pair_rate);
}

TEST(SourceConfig, MalformedFiles) {
    for (const auto& [text, line] : std::initializer_list<std::pair<const char*, std::size_t>>{
             {"bogus = 1\n", 1}, {"R = 0.1\nR = 0.2\n", 2}, {"# x\nR = abc\n", 2}, {"R 0.1\n", 1}}) {
        std::istringstream is(text);
        try {
            read_source_config(is);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const FormatError& e) {
            EXPECT_EQ(e.line(), line) << e.what();
        }
    }
    EXPECT_THROW(load_source_config("/nonexistent/ering.cfg"), FormatError);
}

TEST(SourceConfig, Overrides) {
    SourceConfig c;
    apply_override(c, "visibility=0.9");
    EXPECT_EQ(c.visibility, 0.9);
    EXPECT_THROW(apply_override(c, "visibility"), FormatError);
    EXPECT_THROW(apply_override(c, "nokey=1"), FormatError);
    EXPECT_THROW(apply_override(c, "R=x"), FormatError);
}
