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
 * @file source_sim.hpp
 * @brief Model of the E-ring source: geometry, sector patchwork, mirror
 * phase, photon counting and Ou-Mandel interference.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ering/bell.hpp"
#include "ering/qstate.hpp"
#include "ering/source_config.hpp"

namespace ering {

/// E-ring diameter 2 alpha f.
double ring_diameter(const SourceConfig& config);

/// Area 2 D delta arcsin(r / D) selected by an iris of radius r on the mask.
/// Throws DomainError unless 0 <= r <= D.
double sector_area(double r, const SourceConfig& config);

/// Optical treatment applied to one angular sector of the ring.
enum class Treatment {
    coherent,                       // |Phi(phi)>
    decohered,                      // (|HH><HH| + |VV><VV|) / 2
    flipped_and_coherent,           // |Psi(phi)>
    flipped_and_decohered,          // (|HV><HV| + |VH><VH|) / 2
    blocked,                        // nothing detected
    reflected_blocked,              // reflected cone stopped: |HH>
    flipped_and_reflected_blocked,  // reflected cone stopped after the flip: |HV>
};

std::string_view to_string(Treatment t);
Treatment parse_treatment(std::string_view name);

struct Sector {
    std::string label;
    double fraction;
    Treatment treatment;
};

/// Fractions in [0, 1] summing to 1 within 1e-9, labels unique.
class SectorPartition {
public:
    explicit SectorPartition(std::vector<Sector> sectors);
    const std::vector<Sector>& sectors() const noexcept { return sectors_; }

private:
    std::vector<Sector> sectors_;
};

/// Detection-conditioned mixture of the sector contributions. Throws
/// DomainError when every sector is blocked.
DensityMatrix synthesize(const SectorPartition& partition, double phi);

/// A: flipped_and_coherent p; B: flipped_and_decohered (1 - p)/2;
/// C: decohered (1 - p)/2. Synthesized at phi = pi this is werner(p).
SectorPartition werner_partition(double p);

/// D: reflected_blocked 1 - 2g; E: flipped_and_coherent p;
/// F: flipped_and_decohered 2g - p (absent when zero). Synthesized at
/// phi = pi this is mems(p).
SectorPartition mems_partition(double p);

/// First step of the identity recipe: {flipped_and_coherent 1/2, coherent 1/2}.
SectorPartition identity_recipe_half();

/// Second step: both halves decohered, giving I/4 for any phi.
SectorPartition identity_recipe_full();

/// Meridional ray trace of the back-reflected cone for a mirror displaced by
/// delta_d along the pump axis.
struct PhaseGeometry {
    double delta_d;
    double oa;            // OA' = R + delta_d
    double ob;            // OB'
    double bc;            // B'C, back to the crystal plane
    double phi;           // wrapped to [0, 2 pi)
    double phi_unwrapped;
    double lateral_offset;  // OC
};

/// Throws DomainError when |delta_d| >= R / 10.
PhaseGeometry phase_from_displacement(double delta_d, const SourceConfig& config);

/// Displacement of smallest magnitude whose unwrapped phase equals `phi`,
/// |phi| <= 4 pi. The phase falls as the mirror moves away from the crystal,
/// so positive phases need negative delta_d.
double displacement_for_phase(double phi, const SourceConfig& config);

/// exp(-(OC / w)^2) with w = config.decoherence_width.
double displacement_visibility(double delta_d, const SourceConfig& config);

/// V rho + (1 - V) I / 4.
DensityMatrix apply_visibility(const DensityMatrix& rho, double v);

/// Pairs per second reaching both detectors: pair_rate qe^2 transmission.
double detected_pair_rate(const SourceConfig& config);

/// Expected coincidence rates at joint polarizer angles (degrees), after the
/// configured effective visibility is applied.
struct RateModel {
    double signal;
    double accidental;
    double total() const { return signal + accidental; }
};
RateModel expected_coincidence_rate(const DensityMatrix& rho, double theta1_deg,
                                    double theta2_deg, const SourceConfig& config);

/// Poisson counts for each joint setting with `duration` seconds per setting.
CountsTable simulate_coincidences(const DensityMatrix& rho,
                                  const std::vector<std::pair<double, double>>& settings,
                                  double duration, const SourceConfig& config,
                                  std::uint64_t seed);

/// Same settings, noiseless expected counts.
CountsTable expected_coincidences(const DensityMatrix& rho,
                                  const std::vector<std::pair<double, double>>& settings,
                                  double duration, const SourceConfig& config);

struct BellRun {
    CountsTable counts;
    BellEstimate estimate;
};

/// CHSH measurement with `total_duration` split evenly over the 16 joint settings.
BellRun run_bell_experiment(const DensityMatrix& rho, const ChshAnglePlan& plan,
                            double total_duration, const SourceConfig& config,
                            std::uint64_t seed);

/// (max - min) / (max + min) of a fringe.
double fringe_visibility(const std::vector<double>& values);

/// Coherence time tau_coh lambda_ref^2 dlambda_ref / (lambda^2 dlambda) with the
/// reference at 727.6 nm and 6 nm: the Gaussian-spectrum 1/dnu scaling.
double coherence_time(const SourceConfig& config);

/// FWHM of the Ou-Mandel envelope in beam-splitter displacement, c tau.
double ou_mandel_fwhm(const SourceConfig& config);

/// 1 - V cos(phi) exp(-(x / sigma)^2) with V = hom_visibility.
double ou_mandel_value(double phi, double x, const SourceConfig& config);

std::vector<std::pair<double, double>> ou_mandel_scan(double phi, const std::vector<double>& xs,
                                                      const SourceConfig& config);

/// Coincidence rate through the iris, detected_pair_rate scaled by the
/// selected share of the ring area pi D delta.
double iris_coincidence_rate(double r, const SourceConfig& config);

/// Poisson counts per position, normalized by the far-from-overlap mean.
std::vector<std::pair<double, double>> ou_mandel_counts(double phi, const std::vector<double>& xs,
                                                        double duration,
                                                        const SourceConfig& config,
                                                        std::uint64_t seed);

}  // namespace ering
