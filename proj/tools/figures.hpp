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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ering/entanglement.hpp"
#include "ering/source_config.hpp"

namespace ering::cli {

struct CsvTable {
    std::string file;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const;
};

struct FigureOptions {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double phi = 0.0;                  // Ou-Mandel phase, radians
    std::optional<double> duration;    // seconds per grid point
    double tomo_counts = 1e4;          // counts per tomography setting
};

inline constexpr int kFigureIds[] = {2, 3, 4, 8, 11, 12};

/// Data tables for one figure. Throws DomainError on an unknown id.
std::vector<CsvTable> make_figure(int id, const SourceConfig& config, const FigureOptions& options);

/// Seed of grid point `index`, independent of evaluation order.
std::uint64_t point_seed(std::uint64_t master, std::uint64_t index);

/// Runs fn(0..n-1) on up to `jobs` threads; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// One reconstructed (S_L, T) point of the entropy-tangle scatter.
struct ScatterPoint {
    double p;
    double s_l;
    double t;
};

/// Simulates tomography of `family`(p) at `counts` per setting and returns the
/// reconstructed entropy and tangle.
ScatterPoint reconstructed_point(StateFamily family, double p, double counts, std::uint64_t seed);

}  // namespace ering::cli
