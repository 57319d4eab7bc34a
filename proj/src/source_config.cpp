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

#include "ering/source_config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "ering/csv.hpp"
#include "ering/errors.hpp"

namespace ering {

namespace {

struct Field {
    std::string_view key;
    double SourceConfig::*member;
};

constexpr std::array<Field, 19> kFields{{
    {"lambda_pump", &SourceConfig::lambda_pump},
    {"lambda", &SourceConfig::lambda},
    {"alpha", &SourceConfig::alpha},
    {"R", &SourceConfig::R},
    {"f", &SourceConfig::f},
    {"mask_D", &SourceConfig::mask_D},
    {"mask_delta", &SourceConfig::mask_delta},
    {"iris_r", &SourceConfig::iris_r},
    {"pair_rate", &SourceConfig::pair_rate},
    {"detector_qe", &SourceConfig::detector_qe},
    {"dark_rate", &SourceConfig::dark_rate},
    {"filter_bandwidth", &SourceConfig::filter_bandwidth},
    {"tau_coh", &SourceConfig::tau_coh},
    {"pump_waist", &SourceConfig::pump_waist},
    {"transmission", &SourceConfig::transmission},
    {"coincidence_window", &SourceConfig::coincidence_window},
    {"visibility", &SourceConfig::visibility},
    {"hom_visibility", &SourceConfig::hom_visibility},
    {"decoherence_width", &SourceConfig::decoherence_width},
}};

const Field* find_field(std::string_view key) {
    for (const Field& f : kFields)
        if (f.key == key)
            return &f;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

void SourceConfig::validate() const {
    for (const Field& f : kFields) {
        const double v = this->*f.member;
        if (!std::isfinite(v))
            throw DomainError("config " + std::string(f.key) + " must be finite");
    }
    auto positive = [this](std::string_view key) {
        if (!(get(key) > 0.0))
            throw DomainError("config " + std::string(key) + " must be positive");
    };
    for (auto key : {"lambda_pump", "lambda", "R", "f", "mask_D", "mask_delta", "iris_r",
                     "pair_rate", "filter_bandwidth", "tau_coh", "pump_waist",
                     "coincidence_window", "decoherence_width"})
        positive(key);
    if (!(alpha >= 0.0 && alpha < std::acos(0.0)))
        throw DomainError("config alpha must lie in [0, pi/2)");
    if (dark_rate < 0.0)
        throw DomainError("config dark_rate must be nonnegative");
    for (auto key : {"detector_qe", "transmission", "visibility", "hom_visibility"}) {
        const double v = get(key);
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("config " + std::string(key) + " must lie in [0, 1]");
    }
}

void SourceConfig::set(std::string_view key, double value) {
    const Field* f = find_field(key);
    if (!f)
        throw FormatError("unknown config key '" + std::string(key) + "'");
    this->*f->member = value;
}

double SourceConfig::get(std::string_view key) const {
    const Field* f = find_field(key);
    if (!f)
        throw FormatError("unknown config key '" + std::string(key) + "'");
    return this->*f->member;
}

std::vector<std::pair<std::string, double>> SourceConfig::entries() const {
    std::vector<std::pair<std::string, double>> out;
    for (const Field& f : kFields)
        out.emplace_back(std::string(f.key), this->*f.member);
    return out;
}

SourceConfig read_source_config(std::istream& is) {
    SourceConfig config;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw FormatError("expected key = value", lineno);
        const std::string_view key = trim(view.substr(0, eq));
        const auto value = parse_number(view.substr(eq + 1));
        if (!find_field(key))
            throw FormatError("unknown config key '" + std::string(key) + "'", lineno);
        if (!value)
            throw FormatError("value of '" + std::string(key) + "' is not a number", lineno);
        if (!seen.emplace(key).second)
            throw FormatError("duplicate config key '" + std::string(key) + "'", lineno);
        config.set(key, *value);
    }
    return config;
}

SourceConfig load_source_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open config file " + path);
    return read_source_config(in);
}

void write_source_config(std::ostream& os, const SourceConfig& config) {
    for (const auto& [key, value] : config.entries())
        os << key << " = " << csv_number(value) << '\n';
}

void apply_override(SourceConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw FormatError("override must be key=value: '" + std::string(assignment) + "'");
    const std::string_view key = trim(assignment.substr(0, eq));
    const auto value = parse_number(assignment.substr(eq + 1));
    if (!value)
        throw FormatError("override value of '" + std::string(key) + "' is not a number");
    config.set(key, *value);
}

}  // namespace ering
