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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ering/bell.hpp"
#include "ering/entanglement.hpp"
#include "ering/errors.hpp"
#include "ering/io.hpp"
#include "ering/source_config.hpp"
#include "ering/source_sim.hpp"
#include "ering/tomography.hpp"
#include "ering/version.hpp"
#include "figures.hpp"

namespace ering::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct StateArgs {
    std::string family;
    double p = kNaN;
    double fidelity = kNaN;
    double a = kNaN;
    std::string kind = "psi";
    double phi = std::numbers::pi;
    double theta_p_deg = kNaN;
};

void add_state_options(CLI::App* app, StateArgs& s, const std::string& family_flag) {
    const std::string families = "werner | mems | bell | werner-fidelity | nonmax | tuned";
    if (family_flag.empty())
        app->add_option("family", s.family, families)->required();
    else
        app->add_option(family_flag, s.family, families);
    app->add_option("--p", s.p, "singlet weight p in [0, 1] (werner, mems)");
    app->add_option("--F", s.fidelity, "singlet fidelity in [1/4, 1] (werner-fidelity, tuned)");
    app->add_option("--a", s.a, "tuning amplitude in [1/2, 1] (tuned)");
    app->add_option("--kind", s.kind, "Bell state kind: phi (HH, VV) or psi (HV, VH)")
        ->check(CLI::IsMember({"phi", "psi"}));
    app->add_option("--phi", s.phi, "relative phase of the Bell state, radians");
    app->add_option("--theta-p-deg", s.theta_p_deg, "pump wave-plate angle in degrees (nonmax)");
}

double need(double v, const char* flag, const std::string& family) {
    if (std::isnan(v))
        throw DomainError("state '" + family + "' needs " + flag);
    return v;
}

DensityMatrix build_state(const StateArgs& s) {
    const std::string& f = s.family;
    if (f == "werner")
        return werner(need(s.p, "--p", f));
    if (f == "mems")
        return mems(need(s.p, "--p", f));
    if (f == "bell")
        return DensityMatrix::from_pure(
            bell_state(s.kind == "phi" ? BellKind::Phi : BellKind::Psi, s.phi));
    if (f == "werner-fidelity")
        return werner_from_fidelity(need(s.fidelity, "--F", f));
    if (f == "nonmax")
        return DensityMatrix::from_pure(
            nonmax_state(need(s.theta_p_deg, "--theta-p-deg", f) * std::numbers::pi / 180.0));
    if (f == "tuned")
        return tune_entanglement(need(s.fidelity, "--F", f), need(s.a, "--a", f));
    throw DomainError("unknown state family '" + f + "'");
}

json state_json(const StateArgs& s) {
    json j{{"family", s.family}};
    if (!std::isnan(s.p)) j["p"] = s.p;
    if (!std::isnan(s.fidelity)) j["F"] = s.fidelity;
    if (!std::isnan(s.a)) j["a"] = s.a;
    if (s.family == "bell") {
        j["kind"] = s.kind;
        j["phi_rad"] = s.phi;
    }
    if (!std::isnan(s.theta_p_deg)) j["theta_p_deg"] = s.theta_p_deg;
    return j;
}

double max_abs_imag(const DensityMatrix& rho) { return rho.matrix().imag().cwiseAbs().maxCoeff(); }

json measures(const DensityMatrix& rho) {
    const PptResult ppt = is_separable_ppt(rho);
    const ChshOptimum opt = chsh_optimize(rho);
    return {{"tangle", tangle(rho)},
            {"concurrence", concurrence(rho)},
            {"linear_entropy", linear_entropy(rho)},
            {"purity", rho.purity()},
            {"singlet_fidelity", fidelity(rho, singlet())},
            {"negativity", ppt.negativity},
            {"separable", ppt.separable},
            {"chsh", {{"abs_S_max", opt.abs_s},
                      {"S", opt.s},
                      {"abs_S_max_oracle", chsh_max_horodecki(rho)},
                      {"settings", to_json(opt.settings)}}}};
}

struct Context {
    std::vector<std::string> args;
    std::string config_path;
    std::vector<std::string> overrides;
    std::ostream& out;
    Clock::time_point start = Clock::now();

    SourceConfig config() const {
        SourceConfig c;
        std::string path = config_path;
        if (path.empty())
            if (const char* env = std::getenv("ERING_CONFIG"))
                path = env;
        if (!path.empty())
            c = load_source_config(path);
        for (const auto& o : overrides)
            apply_override(c, o);
        c.validate();
        return c;
    }

    json manifest(const SourceConfig& config, std::optional<std::uint64_t> seed,
                  const std::vector<std::string>& outputs) const {
        json cmd = json::array({"ering"});
        for (const auto& a : args)
            cmd.push_back(a);
        json cfg = json::object();
        for (const auto& [k, v] : config.entries())
            cfg[k] = v;
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return {{"command_line", cmd},
                {"config", cfg},
                {"seed", seed ? json(*seed) : json(nullptr)},
                {"version", kVersion},
                {"outputs", outputs},
                {"duration_s", seconds}};
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("cannot write " + path);
    f << content;
    if (!f)
        throw FormatError("failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Writes `content` to `path`, or to stdout when the path is empty or "-".
// File outputs get a `<path>.manifest.json` alongside.
void emit(const Context& ctx, const std::string& path, const std::string& content,
          const SourceConfig& config, std::optional<std::uint64_t> seed) {
    if (path.empty() || path == "-") {
        ctx.out << content;
        return;
    }
    write_file(path, content);
    write_file(path + ".manifest.json", ctx.manifest(config, seed, {path}).dump(2) + "\n");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void run_state(const Context& ctx, const StateArgs& s, const std::string& out_path) {
    const DensityMatrix rho = build_state(s);
    json j{{"state", state_json(s)}, {"density_matrix", to_json(rho)}, {"measures", measures(rho)}};
    if (s.family == "werner" || s.family == "mems") {
        const StateFamily fam = parse_family(s.family);
        const NonlocalityClass c = classify(fam, s.p);
        j["classification"] = {{"region", to_string(c.region)},
                               {"S_L_lo", c.s_l_lo},
                               {"S_L_hi", c.s_l_hi},
                               {"hi_inclusive", c.hi_inclusive}};
    }
    emit(ctx, out_path, dump(j), ctx.config(), std::nullopt);
}

void run_figure(const Context& ctx, int id, const FigureOptions& options, const std::string& dir) {
    const SourceConfig config = ctx.config();
    const auto tables = make_figure(id, config, options);
    std::filesystem::create_directories(dir);
    std::vector<std::string> outputs;
    for (const auto& t : tables) {
        const std::string path = (std::filesystem::path(dir) / t.file).string();
        std::ostringstream ss;
        t.write(ss);
        write_file(path, ss.str());
        outputs.push_back(path);
        ctx.out << path << '\n';
    }
    const std::string manifest_path =
        (std::filesystem::path(dir) / ("fig" + std::to_string(id) + ".manifest.json")).string();
    write_file(manifest_path, dump(ctx.manifest(config, options.seed, outputs)));
}

void run_tomo_simulate(const Context& ctx, const StateArgs& s, double counts,
                       std::optional<std::uint64_t> seed, bool exact, const std::string& out_path) {
    if (!exact && !seed)
        throw FormatError("tomo simulate needs --seed (or --exact for noiseless counts)");
    const DensityMatrix rho = build_state(s);
    const TomoData data = exact ? expected_tomography(rho, counts)
                                : simulate_tomography(rho, counts, *seed);
    std::ostringstream ss;
    write_tomo_csv(ss, data);
    emit(ctx, out_path, ss.str(), ctx.config(), seed);
}

void run_tomo_reconstruct(const Context& ctx, const std::string& input, const StateArgs& target,
                          std::uint64_t ml_seed, const std::string& out_path) {
    std::istringstream in(read_file(input));
    const TomoData data = read_tomo_csv(in);
    MlOptions options;
    options.seed = ml_seed;
    const MlResult ml = ml_reconstruct(data, options);
    const LinearEstimate lin = linear_reconstruct(data);
    const ChshOptimum opt = chsh_optimize(ml.rho);

    json j{{"input", input},
           {"density_matrix", to_json(ml.rho)},
           {"tangle", tangle(ml.rho)},
           {"linear_entropy", linear_entropy(ml.rho)},
           {"abs_S_max", opt.abs_s},
           {"flux", ml.flux},
           {"log_likelihood", ml.log_likelihood},
           {"max_abs_imag", max_abs_imag(ml.rho)},
           {"linear_estimate_min_eigenvalue", lin.min_eigenvalue},
           {"design_condition_number", design_condition_number(data.settings)},
           {"starts_converged", ml.starts_converged}};
    if (!target.family.empty()) {
        const DensityMatrix t = build_state(target);
        j["target"] = state_json(target);
        j["fidelity_to_target"] = fidelity(ml.rho, t);
    }
    emit(ctx, out_path, dump(j), ctx.config(), ml_seed);
}

json bell_json(const BellEstimate& e, const ChshAnglePlan& plan) {
    return {{"S", e.s},
            {"abs_S", e.abs_s},
            {"sigma_S", e.sigma},
            {"violation_sigmas", e.violation_sigmas()},
            {"plan_deg",
             {{"theta1", plan.theta1}, {"theta1p", plan.theta1p}, {"theta2", plan.theta2},
              {"theta2p", plan.theta2p}}}};
}

void run_bell_analyze(const Context& ctx, const std::string& input, const ChshAnglePlan& plan,
                      const std::string& out_path) {
    std::istringstream in(read_file(input));
    const CountsTable counts = read_counts_csv(in);
    emit(ctx, out_path, dump(bell_json(chsh_from_counts(counts, plan), plan)), ctx.config(),
         std::nullopt);
}

void run_bell_simulate(const Context& ctx, const StateArgs& s, const ChshAnglePlan& plan,
                       double duration, std::uint64_t seed, const std::string& counts_path) {
    const SourceConfig config = ctx.config();
    const BellRun run = run_bell_experiment(build_state(s), plan, duration, config, seed);
    std::ostringstream ss;
    write_counts_csv(ss, run.counts);
    if (!counts_path.empty())
        emit(ctx, counts_path, ss.str(), config, seed);
    ctx.out << dump(bell_json(run.estimate, plan));
}

void run_phase(const Context& ctx, std::optional<double> delta_um, std::optional<double> phase) {
    const SourceConfig config = ctx.config();
    if (delta_um.has_value() == phase.has_value())
        throw FormatError("phase needs exactly one of --delta-d-um or --for-phase");
    const double d = delta_um ? *delta_um * 1e-6 : displacement_for_phase(*phase, config);
    const PhaseGeometry g = phase_from_displacement(d, config);
    ctx.out << dump({{"delta_d_um", g.delta_d * 1e6},
                     {"OA_m", g.oa},
                     {"OB_m", g.ob},
                     {"BC_m", g.bc},
                     {"phi_rad", g.phi},
                     {"phi_unwrapped_rad", g.phi_unwrapped},
                     {"lateral_offset_um", g.lateral_offset * 1e6},
                     {"visibility", displacement_visibility(d, config)}});
}

void add_plan_options(CLI::App* app, ChshAnglePlan& plan) {
    app->add_option("--theta1", plan.theta1, "site-1 polarizer angle, degrees")->capture_default_str();
    app->add_option("--theta1p", plan.theta1p, "site-1 primed angle, degrees")->capture_default_str();
    app->add_option("--theta2", plan.theta2, "site-2 polarizer angle, degrees")->capture_default_str();
    app->add_option("--theta2p", plan.theta2p, "site-2 primed angle, degrees")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-qubit polarization states of an E-ring photon-pair source", "ering"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Context ctx{args, "", {}, out};
    app.add_option("--config", ctx.config_path,
                   "source config file of `key = value` lines, SI units (default: $ERING_CONFIG)");
    app.add_option("--set", ctx.overrides, "override one config key, e.g. --set visibility=0.94");

    // state
    StateArgs state_args;
    std::string state_out;
    auto* state = app.add_subcommand("state", "density matrix, entanglement measures and CHSH optimum");
    add_state_options(state, state_args, "");
    state->add_option("--out", state_out, "JSON output path (default: stdout)");

    // figure
    int figure_id = 0;
    FigureOptions fig;
    std::string figure_dir = ".";
    double duration = 0.0;
    fig.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* figure = app.add_subcommand("figure", "regenerate figure data as CSV");
    figure->add_option("id", figure_id, "figure: 2, 3, 4, 8, 11 or 12")->required();
    figure->add_option("--seed", fig.seed, "master seed")->required();
    figure->add_option("--out", figure_dir, "output directory")->capture_default_str();
    figure->add_option("--jobs", fig.jobs, "worker threads (default: available processors)");
    figure->add_option("--phi", fig.phi, "Ou-Mandel phase for figure 3, radians")->capture_default_str();
    auto* duration_opt = figure->add_option(
        "--duration", duration,
        "seconds per grid point (defaults: fig2/fig4 1 s, fig3 10 s, fig12 180 s per Bell run)");
    figure->add_option("--tomo-counts", fig.tomo_counts, "expected counts per setting for probability 1 (fig8, fig11)")
        ->capture_default_str();

    // tomo
    auto* tomo = app.add_subcommand("tomo", "simulate or reconstruct 16-setting tomography");
    tomo->require_subcommand(1);
    StateArgs tomo_state;
    double tomo_counts = 1e4;
    std::uint64_t tomo_seed = 0;
    bool exact = false;
    std::string tomo_out;
    auto* tsim = tomo->add_subcommand("simulate", "write `setting_index,proj1,proj2,counts` CSV");
    add_state_options(tsim, tomo_state, "");
    tsim->add_option("--counts", tomo_counts, "mean counts per setting for probability 1")
        ->capture_default_str();
    auto* tomo_seed_opt = tsim->add_option("--seed", tomo_seed, "seed of the Poisson draws");
    tsim->add_flag("--exact", exact, "write noiseless expected counts");
    tsim->add_option("--out", tomo_out, "CSV output path")->required();

    std::string recon_in;
    std::string recon_out;
    std::uint64_t ml_seed = MlOptions{}.seed;
    StateArgs target;
    auto* trec = tomo->add_subcommand("reconstruct", "maximum-likelihood reconstruction report (JSON)");
    trec->add_option("input", recon_in, "tomography CSV")->required();
    add_state_options(trec, target, "--target");
    trec->add_option("--ml-seed", ml_seed, "seed of the perturbed optimizer starts")->capture_default_str();
    trec->add_option("--out", recon_out, "JSON report path (default: stdout)");

    // bell
    auto* bell = app.add_subcommand("bell", "CHSH parameter from counts, or a simulated Bell run");
    bell->require_subcommand(1);
    ChshAnglePlan plan = kStandardChshPlan;
    std::string counts_in;
    std::string analyze_out;
    auto* analyze = bell->add_subcommand("analyze", "S, sigma_S and (|S| - 2)/sigma_S from a counts CSV");
    analyze->add_option("input", counts_in, "CSV `theta1_deg,theta2_deg,counts`")->required();
    add_plan_options(analyze, plan);
    analyze->add_option("--out", analyze_out, "JSON output path (default: stdout)");

    StateArgs bell_state_args;
    double bell_duration = 180.0;
    std::uint64_t bell_seed = 0;
    std::string bell_counts_out;
    auto* bsim = bell->add_subcommand("simulate", "Poisson coincidence counts of a CHSH run");
    add_state_options(bsim, bell_state_args, "");
    add_plan_options(bsim, plan);
    bsim->add_option("--duration", bell_duration, "total integration time in seconds, split over 16 settings")
        ->capture_default_str();
    bsim->add_option("--seed", bell_seed, "seed of the Poisson draws")->required();
    bsim->add_option("--counts-out", bell_counts_out, "also write the counts CSV here");

    // phase
    std::optional<double> delta_um;
    std::optional<double> target_phase;
    auto* phase = app.add_subcommand("phase", "mirror displacement to two-photon phase");
    phase->add_option("--delta-d-um", delta_um, "mirror displacement in micrometres");
    phase->add_option("--for-phase", target_phase, "find the displacement for this phase, radians");

    // config
    auto* config_cmd = app.add_subcommand("config", "print the effective source config");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kFormatError;
    }

    try {
        if (state->parsed()) {
            run_state(ctx, state_args, state_out);
        } else if (figure->parsed()) {
            if (!duration_opt->empty())
                fig.duration = duration;
            run_figure(ctx, figure_id, fig, figure_dir);
        } else if (tsim->parsed()) {
            std::optional<std::uint64_t> seed;
            if (!tomo_seed_opt->empty())
                seed = tomo_seed;
            run_tomo_simulate(ctx, tomo_state, tomo_counts, seed, exact, tomo_out);
        } else if (trec->parsed()) {
            run_tomo_reconstruct(ctx, recon_in, target, ml_seed, recon_out);
        } else if (analyze->parsed()) {
            run_bell_analyze(ctx, counts_in, plan, analyze_out);
        } else if (bsim->parsed()) {
            run_bell_simulate(ctx, bell_state_args, plan, bell_duration, bell_seed, bell_counts_out);
        } else if (phase->parsed()) {
            run_phase(ctx, delta_um, target_phase);
        } else if (config_cmd->parsed()) {
            write_source_config(out, ctx.config());
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kFormatError;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kConvergenceError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFormatError;
    }
    return kOk;
}

}  // namespace ering::cli
