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

#pragma once

#include <iosfwd>

#include <json.hpp>

#include "ering/bell.hpp"
#include "ering/qstate.hpp"
#include "ering/tomography.hpp"

namespace ering {

/// {"basis": ["HH","HV","VH","VV"], "re": [[...]], "im": [[...]]}.
nlohmann::json to_json(const Matrix4c& m);
nlohmann::json to_json(const DensityMatrix& rho);

/// Throws FormatError on a malformed document, DomainError on an unphysical matrix.
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

/// {"theta": rad, "phi": rad, "polarization_angle_deg": deg}.
nlohmann::json to_json(const BlochSetting& s);
nlohmann::json to_json(const ChshSettings& s);

/// CSV `setting_index,proj1,proj2,counts`, rows in setting order.
void write_tomo_csv(std::ostream& os, const TomoData& data);
TomoData read_tomo_csv(std::istream& is);

}  // namespace ering
