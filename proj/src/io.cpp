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

#include "ering/io.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "ering/csv.hpp"
#include "ering/errors.hpp"

namespace ering {

namespace {

const char* const kBasis[4] = {"HH", "HV", "VH", "VV"};

}  // namespace

nlohmann::json to_json(const Matrix4c& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json rr = nlohmann::json::array();
        nlohmann::json ii = nlohmann::json::array();
        for (int j = 0; j < 4; ++j) {
            rr.push_back(m(i, j).real());
            ii.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return {{"basis", kBasis}, {"re", re}, {"im", im}};
}

nlohmann::json to_json(const DensityMatrix& rho) { return to_json(rho.matrix()); }

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("basis") && j.at("basis") != nlohmann::json(kBasis))
            throw FormatError("density matrix basis must be [HH, HV, VH, VV]");
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (re.size() != 4 || im.size() != 4)
            throw FormatError("density matrix must be 4x4");
        Matrix4c m;
        for (int r = 0; r < 4; ++r) {
            if (re[r].size() != 4 || im[r].size() != 4)
                throw FormatError("density matrix must be 4x4");
            for (int c = 0; c < 4; ++c)
                m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
        }
        return DensityMatrix(m);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed density matrix JSON: ") + e.what());
    }
}

nlohmann::json to_json(const BlochSetting& s) {
    return {{"theta_rad", s.theta()},
            {"phi_rad", s.phi()},
            {"polarization_angle_deg", s.polarization_angle() * 180.0 / std::numbers::pi}};
}

nlohmann::json to_json(const ChshSettings& s) {
    return {{"a1", to_json(s.a1)}, {"a1p", to_json(s.a1p)}, {"a2", to_json(s.a2)},
            {"a2p", to_json(s.a2p)}};
}

void write_tomo_csv(std::ostream& os, const TomoData& data) {
    data.validate();
    os << "setting_index,proj1,proj2,counts\n";
    for (std::size_t k = 0; k < data.settings.size(); ++k)
        os << k << ',' << data.settings[k].p1.label() << ',' << data.settings[k].p2.label() << ','
           << csv_number(data.counts[k]) << '\n';
}

TomoData read_tomo_csv(std::istream& is) {
    TomoData data;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = split_csv_line(line);
        if (!header) {
            if (fields != std::vector<std::string>{"setting_index", "proj1", "proj2", "counts"})
                throw FormatError("expected header setting_index,proj1,proj2,counts", lineno);
            header = true;
            continue;
        }
        if (fields.size() != 4)
            throw FormatError("expected 4 fields, got " + std::to_string(fields.size()), lineno);
        const auto index = parse_number(fields[0]);
        if (!index || *index != static_cast<double>(data.settings.size()))
            throw FormatError("setting_index must count up from 0", lineno);
        const auto counts = parse_number(fields[3]);
        if (!counts || *counts < 0.0)
            throw FormatError("counts must be a nonnegative number", lineno);
        try {
            data.settings.push_back({ProjectorSpec::parse(fields[1]), ProjectorSpec::parse(fields[2])});
        } catch (const FormatError& e) {
            throw FormatError(e.what(), lineno);
        }
        data.counts.push_back(*counts);
    }
    if (!header)
        throw FormatError("missing header setting_index,proj1,proj2,counts");
    if (data.settings.empty())
        throw FormatError("no tomography rows");
    return data;
}

}  // namespace ering
