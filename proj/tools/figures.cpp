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

#include "figures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "ering/bell.hpp"
#include "ering/csv.hpp"
#include "ering/errors.hpp"
#include "ering/random_states.hpp"
#include "ering/source_sim.hpp"
#include "ering/tomography.hpp"

namespace ering::cli {

namespace {

std::vector<double> grid(double first, double last, double step) {
    std::vector<double> out;
    const auto n = static_cast<long>(std::llround((last - first) / step));
    for (long i = 0; i <= n; ++i)
        out.push_back(std::round((first + static_cast<double>(i) * step) * 1e9) / 1e9);
    return out;
}

std::vector<std::string> row(std::initializer_list<double> values) {
    std::vector<std::string> out;
    for (double v : values)
        out.push_back(csv_number(v));
    return out;
}

DensityMatrix family_state(StateFamily family, double p) {
    return family == StateFamily::Werner ? werner(p) : mems(p);
}

// Polarization fringe: theta1 scanned at fixed theta2, one count per angle.
std::vector<double> fringe_counts(const DensityMatrix& rho, const std::vector<double>& theta1,
                                  double theta2, double duration, const SourceConfig& config,
                                  std::uint64_t seed) {
    std::vector<std::pair<double, double>> settings;
    for (double t : theta1)
        settings.emplace_back(t, theta2);
    const CountsTable table = simulate_coincidences(rho, settings, duration, config, seed);
    std::vector<double> out;
    for (const auto& e : table.entries())
        out.push_back(e.counts);
    return out;
}

CsvTable figure2(const SourceConfig& config, const FigureOptions& o) {
    const auto theta1 = grid(45.0, 135.0, 5.0);
    const auto counts = fringe_counts(DensityMatrix::from_pure(bell_state(BellKind::Phi, std::numbers::pi)),
                                      theta1, 45.0, o.duration.value_or(1.0), config, o.seed);
    CsvTable t{"fig2.csv", {"theta1_deg", "coincidences"}, {}};
    for (std::size_t i = 0; i < theta1.size(); ++i)
        t.rows.push_back(row({theta1[i], counts[i]}));
    return t;
}

CsvTable figure3(const SourceConfig& config, const FigureOptions& o) {
    std::vector<double> xs;
    for (double um : grid(-100.0, 100.0, 2.0))
        xs.push_back(um * 1e-6);
    const auto points = ou_mandel_counts(o.phi, xs, o.duration.value_or(10.0), config, o.seed);
    CsvTable t{"fig3.csv", {"x_um", "normalized_coincidence"}, {}};
    for (const auto& [x, c] : points)
        t.rows.push_back(row({x * 1e6, c}));
    return t;
}

CsvTable figure4(const SourceConfig& config, const FigureOptions& o) {
    const auto radii_mm = grid(0.5, 7.5, 0.5);
    const auto theta1 = grid(0.0, 180.0, 15.0);
    const double full = std::numbers::pi * config.mask_D * config.mask_delta;
    std::vector<std::vector<std::string>> rows(radii_mm.size());
    parallel_for(radii_mm.size(), o.jobs, [&](std::size_t i) {
        const double r = radii_mm[i] * 1e-3;
        SourceConfig c = config;
        c.pair_rate = config.pair_rate * sector_area(r, config) / full;
        const auto counts =
            fringe_counts(singlet(), theta1, 45.0, o.duration.value_or(1.0), c, point_seed(o.seed, i));
        rows[i] = row({radii_mm[i], fringe_visibility(counts), iris_coincidence_rate(r, config)});
    });
    return {"fig4.csv", {"r_mm", "visibility", "rate_hz"}, std::move(rows)};
}

std::vector<CsvTable> entropy_figure(StateFamily family, const std::string& stem,
                                     const FigureOptions& o) {
    const auto ps = grid(0.0, 1.0, 0.05);
    std::vector<std::vector<std::string>> rows(ps.size());
    const std::string name(to_string(family));
    parallel_for(ps.size(), o.jobs, [&](std::size_t i) {
        const ScatterPoint pt = reconstructed_point(family, ps[i], o.tomo_counts, point_seed(o.seed, i));
        auto r = row({pt.s_l, pt.t});
        r.push_back(name);
        r.push_back(csv_number(ps[i]));
        r.push_back(csv_number(tangle_curve(family, pt.s_l)));
        rows[i] = std::move(r);
    });
    CsvTable scatter{stem + ".csv", {"S_L", "T", "family", "p", "T_curve"}, std::move(rows)};

    CsvTable curve{stem + "_curve.csv", {"S_L", "T", "family", "p"}, {}};
    std::vector<StateFamily> families{family};
    if (family == StateFamily::Mems)
        families.push_back(StateFamily::Werner);
    for (StateFamily f : families)
        for (double p : grid(0.0, 1.0, 0.01)) {
            const EntropyPoint e = entropy_point(family_state(f, p));
            auto r = row({e.linear_entropy, e.tangle});
            r.push_back(std::string(to_string(f)));
            r.push_back(csv_number(p));
            curve.rows.push_back(std::move(r));
        }
    return {std::move(scatter), std::move(curve)};
}

CsvTable figure12(const SourceConfig& config, const FigureOptions& o) {
    const auto ps = grid(0.05, 1.0, 0.05);
    std::vector<std::vector<std::string>> rows(ps.size());
    parallel_for(ps.size(), o.jobs, [&](std::size_t i) {
        const BellRun run = run_bell_experiment(werner(ps[i]), kStandardChshPlan,
                                                o.duration.value_or(180.0), config,
                                                point_seed(o.seed, i));
        rows[i] = row({ps[i], run.estimate.abs_s, run.estimate.sigma});
    });
    return {"fig12.csv", {"p", "abs_S", "sigma_S"}, std::move(rows)};
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

std::uint64_t point_seed(std::uint64_t master, std::uint64_t index) {
    Rng rng = derive_rng(master, index);
    return rng();
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

ScatterPoint reconstructed_point(StateFamily family, double p, double counts, std::uint64_t seed) {
    const TomoData data = simulate_tomography(family_state(family, p), counts, seed);
    const MlResult ml = ml_reconstruct(data);
    const EntropyPoint e = entropy_point(ml.rho);
    return {p, e.linear_entropy, e.tangle};
}

std::vector<CsvTable> make_figure(int id, const SourceConfig& config, const FigureOptions& options) {
    config.validate();
    switch (id) {
        case 2: return {figure2(config, options)};
        case 3: return {figure3(config, options)};
        case 4: return {figure4(config, options)};
        case 8: return entropy_figure(StateFamily::Werner, "fig8", options);
        case 11: return entropy_figure(StateFamily::Mems, "fig11", options);
        case 12: return {figure12(config, options)};
        default: break;
    }
    throw DomainError("unknown figure id " + std::to_string(id) + " (expected 2, 3, 4, 8, 11 or 12)");
}

}  // namespace ering::cli
