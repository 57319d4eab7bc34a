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

#include "ering/source_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ering/errors.hpp"
#include "ering/random_states.hpp"

namespace ering {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kReferenceLambda = 727.6e-9;
constexpr double kReferenceBandwidth = 6e-9;

void require_fraction(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(name) + " must lie in [0, 1]");
}

Matrix4c projector(int basis) {
    Matrix4c m = Matrix4c::Zero();
    m(basis, basis) = 1.0;
    return m;
}

Matrix4c contribution(Treatment t, double phi) {
    switch (t) {
        case Treatment::coherent:
            return outer(bell_state(BellKind::Phi, phi).amplitudes());
        case Treatment::decohered:
            return 0.5 * (projector(HH) + projector(VV));
        case Treatment::flipped_and_coherent:
            return outer(bell_state(BellKind::Psi, phi).amplitudes());
        case Treatment::flipped_and_decohered:
            return 0.5 * (projector(HV) + projector(VH));
        case Treatment::reflected_blocked:
            return projector(HH);
        case Treatment::flipped_and_reflected_blocked:
            return projector(HV);
        case Treatment::blocked:
            break;
    }
    return Matrix4c::Zero();
}

// Polarizer projector at `deg` degrees: |cos t, sin t><cos t, sin t|.
Matrix2c polarizer_projector(double deg) {
    const double t = deg * kPi / 180.0;
    Vector2c v(std::cos(t), std::sin(t));
    return v * v.adjoint();
}

double poisson(Rng& rng, double mean) {
    if (mean <= 0.0)
        return 0.0;
    return static_cast<double>(std::poisson_distribution<long long>(mean)(rng));
}

}  // namespace

double ring_diameter(const SourceConfig& config) { return 2.0 * config.alpha * config.f; }

double sector_area(double r, const SourceConfig& config) {
    if (!(r >= 0.0 && r <= config.mask_D))
        throw DomainError("iris radius must lie in [0, D]");
    return 2.0 * config.mask_D * config.mask_delta * std::asin(r / config.mask_D);
}

std::string_view to_string(Treatment t) {
    switch (t) {
        case Treatment::coherent: return "coherent";
        case Treatment::decohered: return "decohered";
        case Treatment::flipped_and_coherent: return "flipped_and_coherent";
        case Treatment::flipped_and_decohered: return "flipped_and_decohered";
        case Treatment::blocked: return "blocked";
        case Treatment::reflected_blocked: return "reflected_blocked";
        case Treatment::flipped_and_reflected_blocked: return "flipped_and_reflected_blocked";
    }
    return "unknown";
}

Treatment parse_treatment(std::string_view name) {
    for (Treatment t : {Treatment::coherent, Treatment::decohered, Treatment::flipped_and_coherent,
                        Treatment::flipped_and_decohered, Treatment::blocked,
                        Treatment::reflected_blocked, Treatment::flipped_and_reflected_blocked})
        if (to_string(t) == name)
            return t;
    throw DomainError("unknown treatment '" + std::string(name) + "'");
}

SectorPartition::SectorPartition(std::vector<Sector> sectors) : sectors_(std::move(sectors)) {
    if (sectors_.empty())
        throw DomainError("partition needs at least one sector");
    std::set<std::string> labels;
    double total = 0.0;
    for (const Sector& s : sectors_) {
        if (!(s.fraction >= 0.0 && s.fraction <= 1.0))
            throw DomainError("sector " + s.label + " fraction must lie in [0, 1]");
        if (!labels.insert(s.label).second)
            throw DomainError("duplicate sector label " + s.label);
        total += s.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw DomainError("sector fractions must sum to 1");
}

DensityMatrix synthesize(const SectorPartition& partition, double phi) {
    Matrix4c m = Matrix4c::Zero();
    double detected = 0.0;
    for (const Sector& s : partition.sectors()) {
        if (s.treatment == Treatment::blocked)
            continue;
        m += s.fraction * contribution(s.treatment, phi);
        detected += s.fraction;
    }
    if (detected <= 0.0)
        throw DomainError("every sector is blocked");
    return DensityMatrix(m / detected);
}

SectorPartition werner_partition(double p) {
    require_fraction(p, "p");
    std::vector<Sector> s{{"A", p, Treatment::flipped_and_coherent}};
    if (p < 1.0) {
        s.push_back({"B", (1.0 - p) / 2.0, Treatment::flipped_and_decohered});
        s.push_back({"C", (1.0 - p) / 2.0, Treatment::decohered});
    }
    return SectorPartition(std::move(s));
}

SectorPartition mems_partition(double p) {
    require_fraction(p, "p");
    const double g = mems_g(p);
    std::vector<Sector> s;
    if (1.0 - 2.0 * g > 0.0)
        s.push_back({"D", 1.0 - 2.0 * g, Treatment::reflected_blocked});
    if (p > 0.0)
        s.push_back({"E", p, Treatment::flipped_and_coherent});
    if (2.0 * g - p > 0.0)
        s.push_back({"F", 2.0 * g - p, Treatment::flipped_and_decohered});
    return SectorPartition(std::move(s));
}

SectorPartition identity_recipe_half() {
    return SectorPartition({{"flipped", 0.5, Treatment::flipped_and_coherent},
                            {"direct", 0.5, Treatment::coherent}});
}

SectorPartition identity_recipe_full() {
    return SectorPartition({{"flipped", 0.5, Treatment::flipped_and_decohered},
                            {"direct", 0.5, Treatment::decohered}});
}

PhaseGeometry phase_from_displacement(double delta_d, const SourceConfig& config) {
    const double r = config.R;
    if (!std::isfinite(delta_d) || std::abs(delta_d) >= r / 10.0)
        throw DomainError("mirror displacement must satisfy |delta_d| < R/10");
    const double a = config.alpha;

    // z along the pump, y transverse; O at the origin, mirror centre O' = (delta_d, 0).
    const Eigen::Vector2d dir(std::cos(a), std::sin(a));
    const Eigen::Vector2d centre(delta_d, 0.0);
    const double sa = std::sin(a);
    const double t = delta_d * std::cos(a) + std::sqrt(r * r - delta_d * delta_d * sa * sa);
    const Eigen::Vector2d b = t * dir;
    const Eigen::Vector2d n = (b - centre) / r;
    const Eigen::Vector2d out = dir - 2.0 * dir.dot(n) * n;
    const double s = -b.x() / out.x();
    const Eigen::Vector2d c = b + s * out;

    PhaseGeometry g;
    g.delta_d = delta_d;
    g.oa = r + delta_d;
    g.ob = std::sqrt(delta_d * delta_d + r * r + 2.0 * r * delta_d * std::cos(a));
    g.bc = s;
    g.phi_unwrapped = 4.0 * kPi / config.lambda * (2.0 * g.oa - (g.ob + g.bc));
    g.phi = std::fmod(g.phi_unwrapped, 2.0 * kPi);
    if (g.phi < 0.0)
        g.phi += 2.0 * kPi;
    g.lateral_offset = std::abs(c.y());
    return g;
}

double displacement_for_phase(double phi, const SourceConfig& config) {
    if (!(std::abs(phi) <= 4.0 * kPi))
        throw DomainError("target phase must lie in [-4 pi, 4 pi]");
    if (phi == 0.0)
        return 0.0;
    const double limit = config.R / 10.0;
    const double slope = phase_from_displacement(limit / 1e6, config).phi_unwrapped;
    const double dir = (slope > 0.0) == (phi > 0.0) ? 1.0 : -1.0;
    // g(u) = |phi(dir u)| - |phi| is increasing in u >= 0 on the modeled range.
    auto g = [&](double u) {
        return std::abs(phase_from_displacement(dir * u, config).phi_unwrapped) - std::abs(phi);
    };
    double lo = 0.0;
    double hi = 1e-6;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi >= limit) {
            if (g(std::nextafter(limit, 0.0)) < 0.0)
                throw DomainError("target phase not reachable below R/10");
            hi = std::nextafter(limit, 0.0);
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return dir * 0.5 * (lo + hi);
}

double displacement_visibility(double delta_d, const SourceConfig& config) {
    const double oc = phase_from_displacement(delta_d, config).lateral_offset;
    const double x = oc / config.decoherence_width;
    return std::exp(-x * x);
}

DensityMatrix apply_visibility(const DensityMatrix& rho, double v) {
    require_fraction(v, "visibility");
    return DensityMatrix(v * rho.matrix() + (1.0 - v) * Matrix4c::Identity() / 4.0);
}

double detected_pair_rate(const SourceConfig& config) {
    return config.pair_rate * config.detector_qe * config.detector_qe * config.transmission;
}

RateModel expected_coincidence_rate(const DensityMatrix& rho, double theta1_deg,
                                    double theta2_deg, const SourceConfig& config) {
    const DensityMatrix state = apply_visibility(rho, config.visibility);
    const Matrix2c p1 = polarizer_projector(theta1_deg);
    const Matrix2c p2 = polarizer_projector(theta2_deg);
    const Matrix4c& m = state.matrix();
    const double joint = (m * kron(p1, p2)).trace().real();
    const double marginal1 = (m * kron(p1, Matrix2c::Identity())).trace().real();
    const double marginal2 = (m * kron(Matrix2c::Identity(), p2)).trace().real();

    const double single_scale = config.pair_rate * config.detector_qe * config.transmission;
    const double singles1 = single_scale * marginal1 + config.dark_rate;
    const double singles2 = single_scale * marginal2 + config.dark_rate;
    return {detected_pair_rate(config) * std::max(joint, 0.0),
            singles1 * singles2 * config.coincidence_window};
}

CountsTable expected_coincidences(const DensityMatrix& rho,
                                  const std::vector<std::pair<double, double>>& settings,
                                  double duration, const SourceConfig& config) {
    if (!(duration > 0.0))
        throw DomainError("duration must be positive");
    CountsTable table;
    table.duration = duration;
    for (const auto& [t1, t2] : settings)
        table.set(t1, t2, expected_coincidence_rate(rho, t1, t2, config).total() * duration);
    return table;
}

CountsTable simulate_coincidences(const DensityMatrix& rho,
                                  const std::vector<std::pair<double, double>>& settings,
                                  double duration, const SourceConfig& config,
                                  std::uint64_t seed) {
    CountsTable expected = expected_coincidences(rho, settings, duration, config);
    CountsTable table;
    table.duration = duration;
    Rng rng = derive_rng(seed, 0);
    for (const auto& e : expected.entries())
        table.set(e.theta1_deg, e.theta2_deg, poisson(rng, e.counts));
    return table;
}

BellRun run_bell_experiment(const DensityMatrix& rho, const ChshAnglePlan& plan,
                            double total_duration, const SourceConfig& config,
                            std::uint64_t seed) {
    const auto settings = plan.joint_settings();
    CountsTable counts = simulate_coincidences(
        rho, settings, total_duration / static_cast<double>(settings.size()), config, seed);
    const BellEstimate estimate = chsh_from_counts(counts, plan);
    return {std::move(counts), estimate};
}

double fringe_visibility(const std::vector<double>& values) {
    if (values.empty())
        throw DomainError("empty fringe");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi + *lo <= 0.0)
        return 0.0;
    return (*hi - *lo) / (*hi + *lo);
}

double coherence_time(const SourceConfig& config) {
    return config.tau_coh * (config.lambda * config.lambda / config.filter_bandwidth) /
           (kReferenceLambda * kReferenceLambda / kReferenceBandwidth);
}

double ou_mandel_fwhm(const SourceConfig& config) {
    return kSpeedOfLight * coherence_time(config);
}

double ou_mandel_value(double phi, double x, const SourceConfig& config) {
    const double sigma = ou_mandel_fwhm(config) / (2.0 * std::sqrt(std::numbers::ln2));
    const double u = x / sigma;
    return 1.0 - config.hom_visibility * std::cos(phi) * std::exp(-u * u);
}

std::vector<std::pair<double, double>> ou_mandel_scan(double phi, const std::vector<double>& xs,
                                                      const SourceConfig& config) {
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (double x : xs)
        out.emplace_back(x, ou_mandel_value(phi, x, config));
    return out;
}

double iris_coincidence_rate(double r, const SourceConfig& config) {
    const double full = kPi * config.mask_D * config.mask_delta;
    return detected_pair_rate(config) * sector_area(r, config) / full;
}

std::vector<std::pair<double, double>> ou_mandel_counts(double phi, const std::vector<double>& xs,
                                                        double duration,
                                                        const SourceConfig& config,
                                                        std::uint64_t seed) {
    if (!(duration > 0.0))
        throw DomainError("duration must be positive");
    const double base = iris_coincidence_rate(config.iris_r, config) * duration;
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Rng rng = derive_rng(seed, i);
        out.emplace_back(xs[i], poisson(rng, base * ou_mandel_value(phi, xs[i], config)) / base);
    }
    return out;
}

}  // namespace ering
