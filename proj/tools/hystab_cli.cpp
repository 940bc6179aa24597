/*
 Copyright 2026 The hystab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// hystab: simulate, analyze, sweep and audit loops with hysteresis feedback.
//
// Exit codes: 0 ok, 2 config, 3 model, 4 usage.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hystab/hystab.hpp"

namespace fs = std::filesystem;
using hystab::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitUsage = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::string format = "csv";
};

struct ScenarioOptions {
    std::string config;
    std::string manifest;
    std::string preset;
    std::optional<double> K, g, h, c, gamma, damping, xi0;
    std::string feedback;
    std::string damping_sign;
    std::string coupling_sign;
    bool no_stick = false;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o) {
    auto* cfg = cmd->add_option("--config", o.config, "Scenario JSON file");
    auto* man = cmd->add_option("--manifest", o.manifest, "Re-run the scenario embedded in a manifest");
    auto* pre = cmd->add_option("--preset", o.preset, "Built-in scenario")
                    ->check(CLI::IsMember({"double_integrator", "second_order", "oscillator"}));
    cfg->excludes(man)->excludes(pre);
    man->excludes(pre);
    cmd->add_option("--K", o.K, "Oscillator: destabilizing stiffness K");
    cmd->add_option("--g", o.g, "Oscillator: coupling stiffness g");
    cmd->add_option("--h", o.h, "Hysteresis height h");
    cmd->add_option("--c", o.c, "Stop element slope c");
    cmd->add_option("--gamma", o.gamma, "Linear slope gamma of the hysteresis");
    cmd->add_option("--damping", o.damping, "Oscillator: damping magnitude");
    cmd->add_option("--xi0", o.xi0, "Initial hysteresis output");
    cmd->add_option("--feedback", o.feedback, "Oscillator feedback")
        ->check(CLI::IsMember({"sign", "stop", "static", "none"}));
    cmd->add_option("--damping-sign", o.damping_sign, "Oscillator (4,4) entry sign")
        ->check(CLI::IsMember({"as_printed", "dissipative"}));
    cmd->add_option("--coupling-sign", o.coupling_sign, "Oscillator input vector orientation")
        ->check(CLI::IsMember({"as_printed", "dissipative"}));
    cmd->add_flag("--no-stick-resolution", o.no_stick, "Use the plain one-step-delayed branch decision");
}

hystab::Scenario resolve_scenario(const ScenarioOptions& o, const GlobalOptions& g) {
    hystab::Scenario sc;
    if (!o.config.empty()) {
        sc = hystab::load_scenario(o.config);
    } else if (!o.manifest.empty()) {
        json m;
        try {
            m = json::parse(hystab::read_text_file(o.manifest));
        } catch (const json::parse_error& e) {
            throw hystab::ConfigError(std::string("manifest is not valid JSON: ") + e.what());
        }
        sc = hystab::scenario_from_manifest(m);
    } else if (!o.preset.empty()) {
        hystab::PresetParams p;
        p.K = o.K;
        p.g = o.g;
        p.h = o.h;
        p.c = o.c;
        p.gamma = o.gamma;
        p.damping = o.damping;
        p.xi0 = o.xi0;
        if (!o.feedback.empty()) p.feedback = hystab::parse_oscillator_feedback(o.feedback);
        if (!o.damping_sign.empty()) p.damping_sign = hystab::parse_damping_sign(o.damping_sign);
        if (!o.coupling_sign.empty()) p.coupling_sign = hystab::parse_coupling_sign(o.coupling_sign);
        sc = hystab::build_preset(hystab::parse_preset(o.preset), p);
    } else {
        throw UsageError("one of --config, --manifest or --preset is required");
    }
    if (o.no_stick) sc.stick_resolution = false;
    if (g.dt) sc.dt = *g.dt;
    if (g.t_end) sc.t_end = *g.t_end;
    if (g.seed) sc.seed = *g.seed;
    try {
        sc.validate();
    } catch (const hystab::InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return sc;
}

fs::path prepare_out(const GlobalOptions& g) {
    fs::path out(g.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw hystab::ConfigError("cannot create output directory '" + g.out + "'");
    return out;
}

std::string trajectory_text(const hystab::Trajectory& tr, const std::string& format) {
    std::ostringstream s;
    if (format == "json") {
        json j;
        j["t"] = tr.t;
        for (Eigen::Index i = 0; i < tr.n; ++i) {
            std::vector<double> col(tr.size());
            for (std::size_t k = 0; k < tr.size(); ++k) col[k] = tr.state(k, i);
            j["x" + std::to_string(i + 1)] = col;
        }
        j["y"] = tr.y;
        j["xi"] = tr.xi;
        j["u"] = tr.u;
        j["V"] = tr.V;
        j["dissipated"] = tr.dissipated;
        s << j.dump() << '\n';
    } else {
        hystab::write_trajectory_csv(s, tr);
    }
    return s.str();
}

std::string ext(const GlobalOptions& g) { return g.format == "json" ? ".json" : ".csv"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- simulate -------------------------------------------------------------

struct SimulateOptions {
    ScenarioOptions scenario;
    std::size_t seeds = 0;
    double box = 3.0;
    bool svg = false;
    std::vector<int> phase_axes{1, 2};
    unsigned workers = 0;
};

int cmd_simulate(const SimulateOptions& o, const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = resolve_scenario(o.scenario, g);
    const auto out = prepare_out(g);
    if (o.phase_axes.size() != 2) throw UsageError("--phase-axes takes two 1-based state indices");
    const Eigen::Index ax = o.phase_axes[0] - 1;
    const Eigen::Index ay = o.phase_axes[1] - 1;
    if (ax < 0 || ay < 0 || ax >= sc.sys.order() || ay >= sc.sys.order())
        throw UsageError("--phase-axes out of range for a system of order " + std::to_string(sc.sys.order()));

    auto manifest = hystab::make_manifest("simulate", sc);

    if (o.seeds == 0) {
        const auto res = hystab::run(sc);
        const auto traj_path = out / ("trajectory" + ext(g));
        hystab::write_text_file(traj_path.string(), trajectory_text(res.trajectory, g.format));
        manifest.outputs.push_back(traj_path.filename().string());
        json diag = hystab::to_json(res.diagnostics);
        hystab::write_text_file((out / "diagnostics.json").string(), diag.dump(2) + "\n");
        manifest.outputs.push_back("diagnostics.json");
        if (o.svg) {
            const auto phase = hystab::render_svg(hystab::phase_portrait(res.trajectory, ax, ay, sc.id));
            hystab::write_text_file((out / "phase.svg").string(), phase);
            const auto loop = hystab::render_svg(hystab::hysteresis_loop(res.trajectory, sc.id));
            hystab::write_text_file((out / "hysteresis.svg").string(), loop);
            manifest.outputs.push_back("phase.svg");
            manifest.outputs.push_back("hysteresis.svg");
        }
        std::cout << "bounded=" << (res.diagnostics.bounded ? "true" : "false");
        if (res.diagnostics.limit_cycle)
            std::cout << " period=" << hystab::format_double(res.diagnostics.limit_cycle->period)
                      << " amplitude=" << hystab::format_double(res.diagnostics.limit_cycle->amplitude);
        if (res.diagnostics.set_verdict)
            std::cout << " in_set=" << (*res.diagnostics.set_verdict ? "true" : "false");
        std::cout << '\n';
    } else {
        std::vector<std::uint64_t> seeds(o.seeds);
        for (std::size_t i = 0; i < o.seeds; ++i) seeds[i] = sc.seed + i + 1;
        hystab::RunOptions ro;
        ro.keep_ledger_samples = false;
        const auto batch = hystab::run_batch(sc, seeds, o.box, ro, o.workers);
        json runs = json::array();
        std::size_t members = 0;
        std::size_t with_set = 0;
        std::size_t bounded = 0;
        for (const auto& e : batch) {
            const std::string name = "run_" + std::to_string(e.seed) + ext(g);
            hystab::write_text_file((out / name).string(), trajectory_text(e.result.trajectory, g.format));
            manifest.outputs.push_back(name);
            const auto& d = e.result.diagnostics;
            bounded += d.bounded ? 1 : 0;
            if (d.set_verdict) {
                ++with_set;
                members += *d.set_verdict ? 1 : 0;
            }
            json r = hystab::to_json(d);
            r["seed"] = e.seed;
            r["x0"] = hystab::detail::vector_to(e.x0);
            runs.push_back(r);
        }
        json summary{{"scenario", sc.id},
                     {"runs", batch.size()},
                     {"bounded", bounded},
                     {"box_half_width", o.box}};
        summary["set_membership_rate"] =
            with_set ? json(static_cast<double>(members) / static_cast<double>(with_set)) : json(nullptr);
        summary["per_run"] = runs;
        hystab::write_text_file((out / "summary.json").string(), summary.dump(2) + "\n");
        manifest.outputs.push_back("summary.json");
        if (o.svg) {
            hystab::PlotSpec p;
            p.title = sc.id + " (" + std::to_string(batch.size()) + " runs)";
            p.x_label = "x" + std::to_string(ax + 1);
            p.y_label = "x" + std::to_string(ay + 1);
            p.max_points = 400;
            for (const auto& e : batch) {
                auto s = hystab::phase_portrait(e.result.trajectory, ax, ay).series.front();
                p.series.push_back(std::move(s));
            }
            hystab::write_text_file((out / "phase.svg").string(), hystab::render_svg(p));
            manifest.outputs.push_back("phase.svg");
        }
        std::cout << "runs=" << batch.size() << " bounded=" << bounded;
        if (with_set) std::cout << " in_set=" << members << "/" << with_set;
        std::cout << '\n';
    }
    manifest.wall_clock_seconds = seconds_since(t0);
    manifest.outputs.push_back("manifest.json");
    hystab::write_text_file((out / "manifest.json").string(), hystab::to_json(manifest).dump(2) + "\n");
    return kExitOk;
}

// --- analyze --------------------------------------------------------------

struct AnalyzeOptions {
    ScenarioOptions scenario;
    double omega_lo = 1e-3;
    double omega_hi = 1e3;
    std::size_t points = 2000;
    bool svg = true;
};

int cmd_analyze(const AnalyzeOptions& o, const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = resolve_scenario(o.scenario, g);
    const auto out = prepare_out(g);
    hystab::OmegaGrid grid{o.omega_lo, o.omega_hi, o.points, true};
    try {
        (void)grid.values();
    } catch (const hystab::InvalidArgument& e) {
        throw UsageError(e.what());
    }
    const auto pr = hystab::poles(sc.sys);
    const auto eq = hystab::equilibrium(sc.sys, sc.feedback);
    const auto sector = hystab::static_sector(sc.feedback);
    const double h = sc.feedback.kind == hystab::OperatorKind::static_map ? 0.0 : sc.feedback.h;
    const auto tl = hystab::transformed_loop_check(sc.sys, sector, h, grid);

    json report;
    report["scenario"] = sc.id;
    report["poles"] = hystab::to_json(pr);
    report["classification"] = hystab::to_string(pr.classification);
    report["max_real_part"] = pr.max_real_part();
    report["unstable_poles"] = pr.unstable;
    report["marginal_poles"] = pr.marginal;
    report["equilibrium"] = hystab::to_json(eq);
    report["phi_g"] = hystab::to_json(tl.phi_g);
    report["phi_h"] = hystab::to_json(tl.phi_h);
    report["overall"] = hystab::to_string(tl.overall);
    hystab::write_text_file((out / "analysis.json").string(), report.dump(2) + "\n");

    auto manifest = hystab::make_manifest("analyze", sc);
    manifest.outputs.push_back("analysis.json");
    if (o.svg) {
        const auto lg = hystab::frequency_response(sc.sys, grid, hystab::LocusKind::G);
        const auto ls = hystab::frequency_response(sc.sys, grid, hystab::LocusKind::sG);
        hystab::write_text_file((out / "nyquist_g.svg").string(),
                                hystab::render_svg(hystab::nyquist_plot(lg, hystab::critical_disk(sector),
                                                                        sc.id + ": G(jw)")));
        hystab::write_text_file(
            (out / "nyquist_sg.svg").string(),
            hystab::render_svg(hystab::nyquist_plot(ls, hystab::critical_disk(hystab::kInf, hystab::kInf),
                                                    sc.id + ": jw G(jw)")));
        hystab::write_text_file((out / "poles.svg").string(), hystab::render_svg(hystab::pole_map(pr, sc.id)));
        for (const char* f : {"nyquist_g.svg", "nyquist_sg.svg", "poles.svg"}) manifest.outputs.push_back(f);
    }
    manifest.wall_clock_seconds = seconds_since(t0);
    manifest.outputs.push_back("manifest.json");
    hystab::write_text_file((out / "manifest.json").string(), hystab::to_json(manifest).dump(2) + "\n");
    std::cout << "classification=" << report["classification"].get<std::string>()
              << " phi_g=" << hystab::to_string(tl.phi_g.status) << " phi_h=" << hystab::to_string(tl.phi_h.status)
              << " overall=" << hystab::to_string(tl.overall) << '\n';
    return kExitOk;
}

// --- sweep ----------------------------------------------------------------

struct SweepOptions {
    ScenarioOptions scenario;
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    bool simulate = true;
    unsigned workers = 0;
};

struct SweepRow {
    double value = 0.0;
    double max_real_part = 0.0;
    bool bounded = false;
    double amplitude = std::numeric_limits<double>::quiet_NaN();
    double period = std::numeric_limits<double>::quiet_NaN();
};

int cmd_sweep(const SweepOptions& o, const GlobalOptions& g) {
    if (o.steps < 1) throw UsageError("sweep range is empty (--steps must be at least 1)");
    if (!(o.from <= o.to)) throw UsageError("sweep range is empty (--from must not exceed --to)");
    if (o.steps > 1 && o.from == o.to) throw UsageError("sweep range is empty (--from equals --to)");
    if (o.scenario.preset.empty() && (o.param == "K"))
        throw UsageError("sweeping K needs --preset oscillator");
    const auto t0 = std::chrono::steady_clock::now();
    const auto base = resolve_scenario(o.scenario, g);
    const auto out = prepare_out(g);

    std::vector<double> values(static_cast<std::size_t>(o.steps));
    for (int i = 0; i < o.steps; ++i)
        values[static_cast<std::size_t>(i)] =
            o.steps == 1 ? o.from : o.from + (o.to - o.from) * static_cast<double>(i) / (o.steps - 1);

    auto build = [&](double v) {
        if (o.param == "K") {
            if (o.scenario.preset != "oscillator") throw UsageError("sweeping K needs --preset oscillator");
            ScenarioOptions so = o.scenario;
            so.K = v;
            return resolve_scenario(so, g);
        }
        hystab::Scenario sc = base;
        if (o.param == "h")
            sc.feedback.h = v;
        else
            sc.feedback.gamma = v;
        try {
            sc.validate();
        } catch (const hystab::InvalidArgument& e) {
            throw UsageError(e.what());
        }
        return sc;
    };
    // builds are cheap; do them up front so usage errors surface before any work
    std::vector<hystab::Scenario> scenarios;
    for (double v : values) scenarios.push_back(build(v));

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                SweepRow r;
                r.value = values[i];
                r.max_real_part = hystab::poles(scenarios[i].sys).max_real_part();
                if (o.simulate) {
                    hystab::RunOptions ro;
                    ro.keep_ledger_samples = false;
                    const auto res = hystab::run(scenarios[i], ro);
                    r.bounded = res.diagnostics.bounded;
                    if (res.diagnostics.limit_cycle) {
                        r.amplitude = res.diagnostics.limit_cycle->amplitude;
                        r.period = res.diagnostics.limit_cycle->period;
                    }
                }
                rows[i] = r;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(values.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::ostringstream s;
    if (g.format == "json") {
        json a = json::array();
        for (const auto& r : rows)
            a.push_back({{o.param, r.value},
                         {"max_real_part", r.max_real_part},
                         {"bounded", o.simulate ? json(r.bounded) : json(nullptr)},
                         {"amplitude", hystab::finite_or_null(r.amplitude)},
                         {"period", hystab::finite_or_null(r.period)}});
        s << a.dump(2) << '\n';
    } else {
        hystab::CsvWriter w(s);
        w.header({o.param, "max_real_part", "bounded", "amplitude", "period"});
        for (const auto& r : rows)
            w.row({r.value, r.max_real_part, o.simulate ? (r.bounded ? 1.0 : 0.0) : std::nan(""), r.amplitude,
                   r.period});
    }
    const std::string name = "sweep" + ext(g);
    hystab::write_text_file((out / name).string(), s.str());
    auto manifest = hystab::make_manifest("sweep " + o.param, base);
    manifest.outputs = {name, "manifest.json"};
    manifest.wall_clock_seconds = seconds_since(t0);
    hystab::write_text_file((out / "manifest.json").string(), hystab::to_json(manifest).dump(2) + "\n");
    std::cout << "rows=" << rows.size() << '\n';
    return kExitOk;
}

// --- energy-audit ---------------------------------------------------------

struct AuditOptions {
    ScenarioOptions scenario;
    double rel_tol = 1e-8;
};

int cmd_energy_audit(const AuditOptions& o, const GlobalOptions& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = resolve_scenario(o.scenario, g);
    const auto out = prepare_out(g);
    const auto res = hystab::run(sc);
    const auto& ledger = res.trajectory.ledger;
    std::optional<double> sign_h;
    if (sc.feedback.kind == hystab::OperatorKind::sign) sign_h = sc.feedback.h;
    const auto rep = hystab::verify_dissipation(ledger, sign_h, o.rel_tol);

    std::ostringstream s;
    if (g.format == "json") {
        json j = json::array();
        for (const auto& p : ledger.samples)
            j.push_back({{"t", p.t}, {"y", p.y}, {"xi", p.xi}, {"w", p.w}, {"V", p.V}, {"dissipated", p.dissipated}});
        s << j.dump() << '\n';
    } else {
        hystab::write_energy_csv(s, ledger);
    }
    const std::string name = "energy" + ext(g);
    hystab::write_text_file((out / name).string(), s.str());
    json audit = hystab::to_json(rep);
    audit["supplied"] = ledger.supplied;
    audit["stored_initial"] = ledger.stored_initial;
    audit["stored_final"] = ledger.stored;
    audit["dissipated"] = ledger.dissipated;
    audit["residual"] = ledger.residual();
    hystab::write_text_file((out / "audit.json").string(), audit.dump(2) + "\n");
    auto manifest = hystab::make_manifest("energy-audit", sc);
    manifest.outputs = {name, "audit.json", "manifest.json"};
    manifest.wall_clock_seconds = seconds_since(t0);
    hystab::write_text_file((out / "manifest.json").string(), hystab::to_json(manifest).dump(2) + "\n");
    std::cout << "dissipative=" << (rep.dissipative ? "true" : "false")
              << " residual=" << hystab::format_double(ledger.residual()) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hystab: stability analysis and simulation of linear loops with hysteresis feedback"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag();
    app.set_help_all_flag("--help", "Print help for every command and flag, then exit");
    app.set_version_flag("--version", std::string(hystab::kToolVersion));

    GlobalOptions g;
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed (batch seeds start after it)");
    app.add_option("--dt", g.dt, "Integration step");
    app.add_option("--t-end", g.t_end, "Final time");
    app.add_option("--format", g.format, "Tabular output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its trajectory");
    add_scenario_options(simulate, sim.scenario);
    simulate->add_option("--seeds", sim.seeds, "Batch of N runs with random x0 on the box");
    simulate->add_option("--box", sim.box, "Half width of the random x0 box")->capture_default_str();
    simulate->add_flag("--svg", sim.svg, "Write phase portrait and hysteresis loop SVGs");
    simulate->add_option("--phase-axes", sim.phase_axes, "Two 1-based state indices for the phase portrait")
        ->expected(2);
    simulate->add_option("--workers", sim.workers, "Worker threads for batches (0 = all cores)");

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Poles, equilibria and circle-criterion verdicts");
    add_scenario_options(analyze, an.scenario);
    analyze->add_option("--omega-lo", an.omega_lo, "Lowest frequency")->capture_default_str();
    analyze->add_option("--omega-hi", an.omega_hi, "Highest frequency")->capture_default_str();
    analyze->add_option("--points", an.points, "Frequency grid points")->capture_default_str();
    analyze->add_flag_callback("--no-svg", [&an] { an.svg = false; }, "Skip Nyquist and pole SVGs");

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "Vary one parameter and tabulate stability");
    add_scenario_options(sweep, sw.scenario);
    sweep->add_option("--param", sw.param, "Parameter to vary")
        ->required()
        ->check(CLI::IsMember({"K", "h", "gamma"}));
    sweep->add_option("--from", sw.from, "First value")->required();
    sweep->add_option("--to", sw.to, "Last value")->required();
    sweep->add_option("--steps", sw.steps, "Number of values")->required();
    sweep->add_flag_callback("--no-simulate", [&sw] { sw.simulate = false; }, "Only compute poles");
    sweep->add_option("--workers", sw.workers, "Worker threads (0 = all cores)");

    AuditOptions au;
    auto* audit = app.add_subcommand("energy-audit", "Energy ledger of the feedback operator along a run");
    add_scenario_options(audit, au.scenario);
    audit->add_option("--rel-tol", au.rel_tol, "Relative audit tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, g);
        if (analyze->parsed()) return cmd_analyze(an, g);
        if (sweep->parsed()) return cmd_sweep(sw, g);
        if (audit->parsed()) return cmd_energy_audit(au, g);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hystab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hystab::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hystab::Error& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    }
    return kExitUsage;
}
