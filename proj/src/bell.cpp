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

#include "ering/bell.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ering/csv.hpp"
#include "ering/errors.hpp"
#include "ering/optimize.hpp"
#include "ering/random_states.hpp"

namespace ering {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

Eigen::Vector3d unit(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Eigen::Vector3d unit_dtheta(double theta, double phi) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

Eigen::Vector3d unit_dphi(double theta, double phi) {
    return {-std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi), 0.0};
}

// Correlation of the (A, B, B, D; -p/2) family when every Theta is +-pi/2.
double equatorial_family_correlation(double p, const BlochSetting& s1, const BlochSetting& s2) {
    return -p * std::cos(s1.phi() - s2.phi()) * std::sin(s1.theta()) * std::sin(s2.theta());
}

}  // namespace

BlochSetting::BlochSetting(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw DomainError("Bloch angles must be finite");
    theta = wrap_pi(theta);
    if (theta < 0.0) {
        theta = -theta;
        phi += kPi;
    }
    theta_ = theta;
    phi_ = wrap_pi(phi);
}

BlochSetting BlochSetting::polarizer(double angle) { return BlochSetting(2.0 * angle, 0.0); }

Eigen::Vector3d BlochSetting::direction() const { return unit(theta_, phi_); }

Matrix2c observable(const BlochSetting& s) {
    const double c = std::cos(s.theta());
    const double sn = std::sin(s.theta());
    Matrix2c o;
    o << c, std::polar(sn, -s.phi()), std::polar(sn, s.phi()), -c;
    return o;
}

double correlation(const DensityMatrix& rho, const BlochSetting& s1, const BlochSetting& s2) {
    return (rho.matrix() * kron(observable(s1), observable(s2))).trace().real();
}

double chsh(const DensityMatrix& rho, const ChshSettings& st) {
    const double s = correlation(rho, st.a1, st.a2) - correlation(rho, st.a1, st.a2p) +
                     correlation(rho, st.a1p, st.a2) + correlation(rho, st.a1p, st.a2p);
    if (std::abs(s) > kTsirelson + 1e-9)
        throw std::logic_error("CHSH value " + std::to_string(s) + " exceeds the Tsirelson bound");
    return s;
}

ChshOptimum chsh_optimal_family(double p, double b) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("family parameter p must lie in [0, 1]");
    if (!(b >= p / 2.0 - 1e-12 && b <= 0.5 + 1e-12))
        throw DomainError("family diagonal B must satisfy p/2 <= B <= 1/2");

    ChshSettings st{BlochSetting(-kPi / 2, kPi / 4), BlochSetting(kPi / 2, -kPi / 4),
                    BlochSetting(kPi / 2, kPi / 2), BlochSetting(-kPi / 2, 0.0)};
    const double s = equatorial_family_correlation(p, st.a1, st.a2) -
                     equatorial_family_correlation(p, st.a1, st.a2p) +
                     equatorial_family_correlation(p, st.a1p, st.a2) +
                     equatorial_family_correlation(p, st.a1p, st.a2p);
    return {s, std::abs(s), st};
}

Eigen::Matrix3d correlation_tensor(const DensityMatrix& rho) {
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (rho.matrix() * kron(pauli(i + 1), pauli(j + 1))).trace().real();
    return t;
}

double chsh_max_horodecki(const DensityMatrix& rho) {
    const Eigen::Vector3d sv = correlation_tensor(rho).jacobiSvd().singularValues();
    return 2.0 * std::sqrt(sv(0) * sv(0) + sv(1) * sv(1));
}

ChshOptimum chsh_optimize(const DensityMatrix& rho, const ChshOptimizeOptions& options) {
    if (options.starts < 1)
        throw DomainError("chsh_optimize needs at least one start");
    const Eigen::Matrix3d t = correlation_tensor(rho);

    // x = (T1, F1, T1', F1', T2, F2, T2', F2'); minimizes -S.
    const Objective objective = [&t](std::span<const double> x, std::span<double> grad) {
        std::array<Eigen::Vector3d, 4> n, dt, dp;
        for (int k = 0; k < 4; ++k) {
            n[k] = unit(x[2 * k], x[2 * k + 1]);
            dt[k] = unit_dtheta(x[2 * k], x[2 * k + 1]);
            dp[k] = unit_dphi(x[2 * k], x[2 * k + 1]);
        }
        // Site 1 enters as (a1, a1p), site 2 as (a2, a2p).
        const Eigen::Vector3d w1 = t * (n[2] - n[3]);   // coefficient of a1
        const Eigen::Vector3d w1p = t * (n[2] + n[3]);  // coefficient of a1p
        const Eigen::Vector3d v2 = t.transpose() * (n[0] + n[1]);
        const Eigen::Vector3d v2p = t.transpose() * (n[1] - n[0]);
        const double s = n[0].dot(w1) + n[1].dot(w1p);
        if (!grad.empty()) {
            const std::array<Eigen::Vector3d, 4> coeff{w1, w1p, v2, v2p};
            for (int k = 0; k < 4; ++k) {
                grad[2 * k] = -dt[k].dot(coeff[k]);
                grad[2 * k + 1] = -dp[k].dot(coeff[k]);
            }
        }
        return -s;
    };

    MinimizeOptions mopts;
    mopts.max_iterations = 500;
    std::uniform_real_distribution<double> theta_dist(0.0, kPi);
    std::uniform_real_distribution<double> phi_dist(-kPi, kPi);

    bool found = false;
    std::vector<double> best;
    double best_s = -1.0;
    for (int k = 0; k < options.starts; ++k) {
        Rng rng = derive_rng(options.seed, static_cast<std::uint64_t>(k));
        std::vector<double> x0(8);
        for (int i = 0; i < 4; ++i) {
            x0[2 * i] = theta_dist(rng);
            x0[2 * i + 1] = phi_dist(rng);
        }
        const MinimizeResult r = minimize_bfgs(objective, std::move(x0), mopts);
        if (!(r.converged || r.gradient_max_norm < 1e-8))
            continue;
        if (!found || -r.value > best_s) {
            found = true;
            best_s = -r.value;
            best = r.x;
        }
    }
    if (!found)
        throw ConvergenceError("chsh_optimize: no start converged");

    ChshSettings st{BlochSetting(best[0], best[1]), BlochSetting(best[2], best[3]),
                    BlochSetting(best[4], best[5]), BlochSetting(best[6], best[7])};
    const double s = chsh(rho, st);
    return {s, std::abs(s), st};
}

ChshSettings ChshAnglePlan::bloch_settings() const {
    const double rad = kPi / 180.0;
    return {BlochSetting::polarizer(theta1 * rad), BlochSetting::polarizer(theta1p * rad),
            BlochSetting::polarizer(theta2 * rad), BlochSetting::polarizer(theta2p * rad)};
}

std::vector<std::pair<double, double>> ChshAnglePlan::joint_settings() const {
    std::vector<std::pair<double, double>> out;
    for (double a : {theta1, theta1p})
        for (double b : {theta2, theta2p})
            for (double da : {0.0, 90.0})
                for (double db : {0.0, 90.0})
                    out.emplace_back(a + da, b + db);
    return out;
}

namespace {

std::int64_t angle_key(double deg) {
    std::int64_t k = std::llround(std::fmod(deg, 180.0) * 1e6);
    const std::int64_t period = 180'000'000;
    k %= period;
    return k < 0 ? k + period : k;
}

}  // namespace

std::optional<std::size_t> CountsTable::index_of(double theta1_deg, double theta2_deg) const {
    const auto k1 = angle_key(theta1_deg);
    const auto k2 = angle_key(theta2_deg);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (angle_key(entries_[i].theta1_deg) == k1 && angle_key(entries_[i].theta2_deg) == k2)
            return i;
    return std::nullopt;
}

void CountsTable::set(double theta1_deg, double theta2_deg, double counts) {
    if (!std::isfinite(theta1_deg) || !std::isfinite(theta2_deg))
        throw DomainError("polarizer angles must be finite");
    if (!std::isfinite(counts) || counts < 0.0)
        throw DomainError("counts must be finite and nonnegative");
    if (auto i = index_of(theta1_deg, theta2_deg))
        entries_[*i].counts = counts;
    else
        entries_.push_back({theta1_deg, theta2_deg, counts});
}

std::optional<double> CountsTable::find(double theta1_deg, double theta2_deg) const {
    if (auto i = index_of(theta1_deg, theta2_deg))
        return entries_[*i].counts;
    return std::nullopt;
}

double CountsTable::at(double theta1_deg, double theta2_deg) const {
    if (auto c = find(theta1_deg, theta2_deg))
        return *c;
    throw DomainError("counts table has no entry for (" + csv_number(theta1_deg) + ", " +
                      csv_number(theta2_deg) + ") degrees");
}

void write_counts_csv(std::ostream& os, const CountsTable& table) {
    if (table.duration > 0.0)
        os << "# duration_s=" << csv_number(table.duration) << '\n';
    os << "theta1_deg,theta2_deg,counts\n";
    for (const auto& e : table.entries())
        os << csv_number(e.theta1_deg) << ',' << csv_number(e.theta2_deg) << ','
           << csv_number(e.counts) << '\n';
}

CountsTable read_counts_csv(std::istream& is) {
    CountsTable table;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    const std::string duration_tag = "# duration_s=";
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            if (line.rfind(duration_tag, 0) == 0) {
                auto d = parse_number(std::string_view(line).substr(duration_tag.size()));
                if (!d || *d < 0.0)
                    throw FormatError("bad duration", lineno);
                table.duration = *d;
            }
            continue;
        }
        const auto fields = split_csv_line(line);
        if (!header) {
            if (fields != std::vector<std::string>{"theta1_deg", "theta2_deg", "counts"})
                throw FormatError("expected header theta1_deg,theta2_deg,counts", lineno);
            header = true;
            continue;
        }
        if (fields.size() != 3)
            throw FormatError("expected 3 fields, got " + std::to_string(fields.size()), lineno);
        const auto t1 = parse_number(fields[0]);
        const auto t2 = parse_number(fields[1]);
        const auto c = parse_number(fields[2]);
        if (!t1 || !t2 || !c)
            throw FormatError("non-numeric field", lineno);
        if (*c < 0.0)
            throw FormatError("negative counts", lineno);
        table.set(*t1, *t2, *c);
    }
    if (!header)
        throw FormatError("missing header theta1_deg,theta2_deg,counts");
    return table;
}

BellEstimate chsh_from_counts(const CountsTable& counts, const ChshAnglePlan& plan) {
    struct Term {
        double a, b, sign;
    };
    const Term terms[4] = {{plan.theta1, plan.theta2, 1.0},
                           {plan.theta1, plan.theta2p, -1.0},
                           {plan.theta1p, plan.theta2, 1.0},
                           {plan.theta1p, plan.theta2p, 1.0}};

    // dS/dn per distinct table entry, so shared entries are not double counted.
    std::vector<double> grad(counts.size(), 0.0);
    double s = 0.0;
    for (const Term& term : terms) {
        const double a = term.a, b = term.b;
        const std::pair<double, double> keys[4] = {
            {a, b}, {a + 90.0, b + 90.0}, {a, b + 90.0}, {a + 90.0, b}};
        double c[4];
        for (int i = 0; i < 4; ++i)
            c[i] = counts.at(keys[i].first, keys[i].second);
        const double total = c[0] + c[1] + c[2] + c[3];
        if (total <= 0.0)
            throw DomainError("zero coincidences for P(" + csv_number(a) + ", " + csv_number(b) +
                              ")");
        const double same = c[0] + c[1];
        const double diff = c[2] + c[3];
        s += term.sign * (same - diff) / total;
        const double d_same = 2.0 * diff / (total * total);
        const double d_diff = -2.0 * same / (total * total);
        for (int i = 0; i < 4; ++i) {
            const auto idx = std::find_if(counts.entries().begin(), counts.entries().end(),
                                          [&](const CountsTable::Entry& e) {
                                              return angle_key(e.theta1_deg) ==
                                                         angle_key(keys[i].first) &&
                                                     angle_key(e.theta2_deg) ==
                                                         angle_key(keys[i].second);
                                          }) -
                             counts.entries().begin();
            grad[static_cast<std::size_t>(idx)] += term.sign * (i < 2 ? d_same : d_diff);
        }
    }
    double var = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
        var += grad[i] * grad[i] * counts.entries()[i].counts;
    return {s, std::abs(s), std::sqrt(var)};
}

}  // namespace ering
