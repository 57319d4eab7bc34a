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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ering {

/// Source parameters, SI units throughout (angles in radians).
struct SourceConfig {
    double lambda_pump = 363.8e-9;
    double lambda = 727.6e-9;
    double alpha = 0.050614548307835558;  // 2.9 degrees
    double R = 0.15;                      // mirror radius of curvature
    double f = 0.15;                      // lens focal length
    double mask_D = 1.5e-2;
    double mask_delta = 0.07e-2;
    double iris_r = 0.75e-3;
    double pair_rate = 2e5;  // generated pairs per second
    double detector_qe = 0.65;
    double dark_rate = 50.0;
    double filter_bandwidth = 6e-9;
    double tau_coh = 140e-15;  // coherence time at the reference bandwidth of 6 nm
    double pump_waist = 150e-6;
    double transmission = 0.35;  // collection and optics, per arm
    double coincidence_window = 10e-9;
    double visibility = 1.0;        // effective two-photon visibility
    double hom_visibility = 0.88;   // Ou-Mandel interference visibility
    double decoherence_width = 50e-6;  // spatial overlap width of the displaced cones

    /// Throws DomainError unless every length and rate is positive and the
    /// dimensionless factors lie in their ranges.
    void validate() const;

    /// Sets one key; throws FormatError on an unknown key.
    void set(std::string_view key, double value);
    double get(std::string_view key) const;

    /// (key, value) pairs in declaration order.
    std::vector<std::pair<std::string, double>> entries() const;
};

/// Reads `key = value` lines; `#` starts a comment. Unknown keys, duplicate
/// keys and non-numeric values are FormatErrors. Missing keys keep defaults.
SourceConfig read_source_config(std::istream& is);
SourceConfig load_source_config(const std::string& path);
void write_source_config(std::ostream& os, const SourceConfig& config);

/// Applies a `key=value` override.
void apply_override(SourceConfig& config, std::string_view assignment);

}  // namespace ering
