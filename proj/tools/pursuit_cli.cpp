// Command-line surface for the pursuit-evasion library: regime classification,
// simulation with CSV/SVG export, Theta estimation, capture-bound verification,
// and parameter sweeps.
//
// Exit codes: 0 success (classify: evasion), 1 error, 2 classify: pursuit,
// 3 verification failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pursuit/classifier.hpp"
#include "pursuit/engine.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/strategies.hpp"
#include "pursuit/theta.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace pursuit;

std::string fmt(double x) { return pursuit::detail::format_double(x); }

Control build_evader_control(const std::string& spec_text, std::size_t dim, double dt,
                             double horizon, std::uint64_t global_seed) {
    TestControlSpec spec = parse_control_spec(spec_text);
    if (spec.kind == TestControlSpec::Kind::Constant && spec.direction.dim() != dim) {
        throw UsageError("control spec: expected " + std::to_string(dim) + " coordinates");
    }
    if (spec.kind == TestControlSpec::Kind::SphereSeeded &&
        spec_text.find("seed=") == std::string::npos) {
        spec.seed = global_seed;
    }
    return make_test_control(spec, dim, dt, horizon);
}

PursuerMode build_pursuer_mode(const std::string& mode_text, const Scenario& scenario, double dt,
                               double horizon, std::uint64_t global_seed) {
    if (mode_text == "closed-form") return ClosedFormStrategy{};
    if (mode_text.rfind("file:", 0) == 0) {
        const std::string path = mode_text.substr(5);
        std::ifstream in(path);
        if (!in) throw ParseError("pursuers: cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("pursuers: ") + e.what());
        }
        if (!j.contains("controls") || !j["controls"].is_array() ||
            j["controls"].size() != scenario.pursuer_count()) {
            throw ParseError("pursuers: \"controls\" must list one spec per pursuer");
        }
        RecordedControls rec;
        for (const auto& s : j["controls"]) {
            rec.controls.push_back(
                build_evader_control(s.get<std::string>(), scenario.dim, dt, horizon, global_seed));
        }
        return rec;
    }
    throw UsageError("pursuers: expected \"closed-form\" or \"file:PATH\"");
}

void write_svg(const SimulationResult& res, std::size_t ax, std::size_t ay,
               const std::string& path) {
    const std::size_t dim = res.evader_traj.front().dim();
    // For 1-D scenarios plot position against time instead of a coordinate pair.
    const bool vs_time = dim < 2;
    auto px = [&](const Vec& v, double t) { return vs_time ? t : v[ax]; };
    auto py = [&](const Vec& v, double) { return vs_time ? v[0] : v[ay]; };

    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    auto grow = [&](double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    };
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        grow(px(res.evader_traj[k], res.times[k]), py(res.evader_traj[k], res.times[k]));
        for (const auto& traj : res.pursuer_trajs) grow(px(traj[k], res.times[k]), py(traj[k], res.times[k]));
    }
    const double span_x = std::max(max_x - min_x, 1e-9);
    const double span_y = std::max(max_y - min_y, 1e-9);
    const double w = 640, h = 640, margin = 40;
    auto sx = [&](double x) { return margin + (x - min_x) / span_x * (w - 2 * margin); };
    auto sy = [&](double y) { return h - margin - (y - min_y) / span_y * (h - 2 * margin); };

    std::ofstream out(path);
    if (!out) throw UsageError("svg: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    auto polyline = [&](const std::vector<Vec>& traj, const char* color) {
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < res.times.size(); ++k) {
            out << sx(px(traj[k], res.times[k])) << ',' << sy(py(traj[k], res.times[k])) << ' ';
        }
        out << "\"/>\n";
    };
    const char* palette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    for (std::size_t i = 0; i < res.pursuer_trajs.size(); ++i) {
        polyline(res.pursuer_trajs[i], palette[i % 6]);
    }
    polyline(res.evader_traj, "#d62728");
    if (res.capture) {
        const Vec& p = res.capture->position;
        out << "  <circle cx=\"" << sx(px(p, res.capture->time)) << "\" cy=\""
            << sy(py(p, res.capture->time)) << "\" r=\"5\" fill=\"black\"/>\n";
    }
    out << "</svg>\n";
}

nlohmann::json make_manifest(const std::string& command, const std::string& scenario_path,
                             const nlohmann::json& options, std::uint64_t seed,
                             const std::vector<std::string>& outputs, double duration_s) {
    nlohmann::json j;
    j["command"] = command;
    j["scenario"] = scenario_path;
    j["options"] = options;
    j["seed"] = seed;
    j["tool_version"] = kVersion;
    j["outputs"] = outputs;
    j["duration_seconds"] = duration_s;
    return j;
}

int cmd_classify(const std::string& scenario_path) {
    const Scenario s = load_scenario(scenario_path);
    const PursuitFrame frame = validate(s);
    const RegimeCertificate cert = classify(frame);
    std::cout << certificate_to_json(cert).dump(2) << '\n';
    return cert.regime == Regime::Evasion ? 0 : 2;
}

struct SimulateArgs {
    std::string scenario_path;
    std::string evader_spec = "constant:[1]";
    std::string pursuer_mode = "closed-form";
    double dt = 0.01;
    double horizon = 10.0;
    double capture_tol = 1e-9;
    std::size_t record_every = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string svg_path;
    std::size_t svg_ax = 1, svg_ay = 2;  // 1-based
};

int cmd_simulate(const SimulateArgs& a) {
    const Scenario s = load_scenario(a.scenario_path);
    const PursuitFrame frame = validate(s);
    const Control evader = build_evader_control(a.evader_spec, s.dim, a.dt, a.horizon, a.seed);
    const PursuerMode mode = build_pursuer_mode(a.pursuer_mode, s, a.dt, a.horizon, a.seed);
    SimulationOptions opts;
    opts.dt = a.dt;
    opts.horizon = a.horizon;
    opts.capture_tolerance = a.capture_tol;
    opts.record_every = a.record_every;

    const auto res = simulate(s, frame, evader, mode, opts);

    if (!a.out_path.empty()) {
        std::ofstream out(a.out_path);
        if (!out) throw UsageError("simulate: cannot write " + a.out_path);
        write_trajectory_csv(res, out);
        std::ofstream side(a.out_path + ".events.json");
        side << capture_sidecar_json(res).dump(2) << '\n';
    } else {
        write_trajectory_csv(res, std::cout);
    }
    if (!a.svg_path.empty()) {
        if (s.dim >= 2 && (a.svg_ax > s.dim || a.svg_ay > s.dim || a.svg_ax == a.svg_ay)) {
            throw UsageError("simulate: bad --svg-axes for this dimension");
        }
        write_svg(res, a.svg_ax - 1, a.svg_ay - 1, a.svg_path);
    }
    if (res.capture) {
        std::cout << "captured i=" << (res.capture->pursuer_index + 1)
                  << " tau=" << fmt(res.capture->time) << '\n';
    } else {
        std::cout << "no capture within horizon\n";
    }
    return 0;
}

int cmd_theta(const std::string& scenario_path, std::size_t starts, std::uint64_t seed,
              double resolution) {
    const Scenario s = load_scenario(scenario_path);
    const PursuitFrame frame = validate(s);
    ThetaOptions opts;
    opts.starts = starts;
    opts.seed = seed;
    opts.grid_resolution = resolution;
    const ThetaReport report = estimate_theta(frame, opts);
    std::cout << theta_report_to_json(report).dump(2) << '\n';
    return 0;
}

int cmd_verify(const std::string& scenario_path, const std::vector<std::string>& specs, double dt,
               std::uint64_t seed, std::size_t starts, double resolution) {
    const Scenario s = load_scenario(scenario_path);
    const PursuitFrame frame = validate(s);
    ThetaOptions topts;
    topts.starts = starts;
    topts.seed = seed;
    topts.grid_resolution = resolution;
    SimulationOptions sopts;
    sopts.dt = dt;
    sopts.horizon = 0.0;  // verify extends to 1.5 * eta

    std::vector<std::pair<std::string, Control>> evaders;
    for (const auto& spec : specs) {
        // Seeded controls pre-expand over this horizon and hold their last
        // value beyond it; 1000 time units covers any reasonable eta here.
        evaders.emplace_back(spec, build_evader_control(spec, s.dim, dt, 1000.0, seed));
    }
    if (evaders.empty()) throw UsageError("verify: needs at least one --evader spec");

    const VerifyReport report = verify_capture_bound(s, frame, evaders, sopts, topts);
    std::cout << "theta_lower_bound=" << fmt(report.theta_lower_bound)
              << " eta=" << fmt(report.eta_upper) << '\n';
    bool ok = true;
    for (const auto& run : report.runs) {
        if (run.captured && run.slack >= -1e-6 && run.decay_ok) {
            std::cout << "pass " << run.name << " tau=" << fmt(run.tau)
                      << " slack=" << fmt(run.slack) << '\n';
        } else {
            ok = false;
            std::cerr << "FAIL " << run.name
                      << (run.captured ? " capture after eta" : " no capture") << '\n';
        }
    }
    return ok ? 0 : 3;
}

struct SweepArgs {
    std::string config_path;
    std::string out_dir = "sweep_out";
    std::size_t jobs = 1;
};

struct SweepRow {
    std::size_t m = 0, n = 0;
    std::uint64_t seed = 0;
    std::string regime;
    double theta_est = 0.0;
    std::optional<double> theta_lb, tau, eta, slack;
};

void run_sweep_case(std::size_t n, std::size_t m, std::uint64_t seed, const nlohmann::json& cfg,
                    const std::filesystem::path& out_dir, SweepRow& row) {
    const auto t0 = std::chrono::steady_clock::now();
    const double dt = cfg.value("dt", 0.01);
    const double horizon = cfg.value("horizon", 20.0);
    const std::size_t starts = cfg.value("starts", std::size_t{8});
    const double resolution = cfg.value("resolution", 1e-2);

    // Seeded instance: evader at the origin, pursuers on a shell around it.
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + n * 1315423911ULL + m);
    Scenario s;
    s.dim = n;
    s.evader = Vec::zero(n);
    for (std::size_t i = 0; i < m; ++i) {
        s.pursuers.push_back(random_unit(rng, n) * uniform_in(rng, 0.5, 2.0));
    }
    const PursuitFrame frame = validate(s);

    const std::string stem = "run_n" + std::to_string(n) + "_m" + std::to_string(m) + "_s" +
                             std::to_string(seed);
    const auto run_dir = out_dir / stem;
    std::filesystem::create_directories(run_dir);
    save_scenario(s, (run_dir / "scenario.json").string());

    const RegimeCertificate cert = classify(frame);
    row.m = m;
    row.n = n;
    row.seed = seed;
    row.regime = regime_name(cert.regime);

    ThetaOptions topts;
    topts.starts = starts;
    topts.seed = seed;
    topts.grid_resolution = resolution;
    const ThetaReport theta = estimate_theta(frame, topts);
    row.theta_est = theta.theta_estimate;
    row.theta_lb = theta.theta_lower_bound;
    row.eta = theta.eta_upper;

    Control evader = cert.witness ? evasion_control(*cert.witness)
                                  : [&] {
                                        TestControlSpec spec;
                                        spec.kind = TestControlSpec::Kind::SphereSeeded;
                                        spec.seed = seed;
                                        return make_test_control(spec, n, dt, horizon);
                                    }();
    SimulationOptions sopts;
    sopts.dt = dt;
    sopts.horizon = theta.eta_upper ? std::max(horizon, *theta.eta_upper + dt) : horizon;
    const auto res = simulate(s, frame, evader, ClosedFormStrategy{}, sopts);
    {
        std::ofstream csv(run_dir / "trajectory.csv");
        write_trajectory_csv(res, csv);
        std::ofstream side(run_dir / "trajectory.csv.events.json");
        side << capture_sidecar_json(res).dump(2) << '\n';
    }
    if (res.capture) {
        row.tau = res.capture->time;
        if (row.eta) row.slack = *row.eta - *row.tau;
    }

    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json options = {{"dt", dt}, {"horizon", horizon}, {"starts", starts},
                              {"resolution", resolution}};
    std::ofstream mf(run_dir / "manifest.json");
    mf << make_manifest("sweep", (run_dir / "scenario.json").string(), options, seed,
                        {(run_dir / "trajectory.csv").string(),
                         (run_dir / "trajectory.csv.events.json").string()},
                        duration)
              .dump(2)
       << '\n';
}

int cmd_sweep(const SweepArgs& a) {
    std::ifstream in(a.config_path);
    if (!in) throw ParseError("sweep: cannot open " + a.config_path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("sweep: ") + e.what());
    }
    const auto dims = cfg.value("dims", std::vector<std::size_t>{});
    const auto counts = cfg.value("pursuer_counts", std::vector<std::size_t>{});
    const auto seeds = cfg.value("seeds", std::vector<std::uint64_t>{});

    struct Case {
        std::size_t n, m;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    for (auto n : dims) {
        for (auto m : counts) {
            for (auto seed : seeds) cases.push_back({n, m, seed});
        }
    }

    const std::filesystem::path out_dir(a.out_dir);
    std::filesystem::create_directories(out_dir);
    std::vector<SweepRow> rows(cases.size());

    const std::size_t jobs = std::max<std::size_t>(1, a.jobs);
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < std::min(jobs, std::max<std::size_t>(1, cases.size())); ++w) {
        workers.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < cases.size(); k = next.fetch_add(1)) {
                try {
                    run_sweep_case(cases[k].n, cases[k].m, cases[k].seed, cfg, out_dir, rows[k]);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) first_error = e.what();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failed) throw InternalError("sweep: " + first_error);

    std::ofstream agg(out_dir / "aggregate.csv");
    agg << "m,n,seed,regime,theta_est,theta_lb,tau,eta,slack\n";
    auto opt = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string(); };
    for (const auto& r : rows) {
        agg << r.m << ',' << r.n << ',' << r.seed << ',' << r.regime << ',' << fmt(r.theta_est)
            << ',' << opt(r.theta_lb) << ',' << opt(r.tau) << ',' << opt(r.eta) << ','
            << opt(r.slack) << '\n';
    }
    std::cout << "sweep: " << cases.size() << " runs -> " << (out_dir / "aggregate.csv").string()
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pursuit-evasion differential game toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    auto* classify_cmd = app.add_subcommand("classify", "Classify a scenario's regime");
    classify_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate trajectories");
    simulate_cmd->add_option("--scenario", sim.scenario_path, "Scenario JSON file")->required();
    simulate_cmd->add_option("--evader", sim.evader_spec, "Evader control spec");
    simulate_cmd->add_option("--pursuers", sim.pursuer_mode, "closed-form | file:PATH");
    simulate_cmd->add_option("--dt", sim.dt, "Step size")
        ->check(CLI::PositiveNumber.description("(positive)"));
    simulate_cmd->add_option("--horizon", sim.horizon, "Simulation horizon");
    simulate_cmd->add_option("--capture-tol", sim.capture_tol, "Capture distance tolerance");
    simulate_cmd->add_option("--record-every", sim.record_every, "Trace thinning factor");
    simulate_cmd->add_option("--seed", sim.seed, "Seed for seeded control specs");
    simulate_cmd->add_option("--out", sim.out_path, "Trajectory CSV output path");
    simulate_cmd->add_option("--svg", sim.svg_path, "SVG plot output path");
    simulate_cmd->add_option("--svg-axes", [&sim](const std::vector<std::string>& v) {
        return std::sscanf(v.back().c_str(), "%zu,%zu", &sim.svg_ax, &sim.svg_ay) == 2;
    }, "Coordinate pair to plot, 1-based (default 1,2)");

    std::size_t starts = 16;
    std::uint64_t seed = 0;
    double resolution = 1e-3;
    auto* theta_cmd = app.add_subcommand("theta", "Estimate Theta and the eta bound");
    theta_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    theta_cmd->add_option("--starts", starts, "Random descent starts");
    theta_cmd->add_option("--seed", seed, "Seed");
    theta_cmd->add_option("--resolution", resolution, "Certificate grid step (radians)");

    std::vector<std::string> verify_specs;
    double verify_dt = 0.01;
    auto* verify_cmd = app.add_subcommand("verify", "Verify the capture-time bound");
    verify_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    verify_cmd->add_option("--evader", verify_specs, "Evader control specs (repeatable)");
    verify_cmd->add_option("--dt", verify_dt, "Step size")
        ->check(CLI::PositiveNumber.description("(positive)"));
    verify_cmd->add_option("--starts", starts, "Random descent starts");
    verify_cmd->add_option("--seed", seed, "Seed");
    verify_cmd->add_option("--resolution", resolution, "Certificate grid step (radians)");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Expand a config grid into many runs");
    sweep_cmd->add_option("--config", sweep.config_path, "Sweep config JSON")->required();
    sweep_cmd->add_option("--out", sweep.out_dir, "Output directory");
    sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse CLI11's parse-error codes onto the documented contract:
        // anything other than a clean --help/--version exit is an error (1).
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(scenario_path);
        if (simulate_cmd->parsed()) return cmd_simulate(sim);
        if (theta_cmd->parsed()) return cmd_theta(scenario_path, starts, seed, resolution);
        if (verify_cmd->parsed()) {
            return cmd_verify(scenario_path, verify_specs, verify_dt, seed, starts, resolution);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
