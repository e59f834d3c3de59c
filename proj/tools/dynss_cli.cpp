// dynss_cli.cpp — Command-line front end: sweep, spectrum, oracle, check

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "dynss/checks.hpp"
#include "dynss/config.hpp"
#include "dynss/errors.hpp"
#include "dynss/oracle.hpp"
#include "dynss/renorm.hpp"
#include "dynss/sweep.hpp"

namespace {

using namespace dynss;

// Flags mirror config keys; only flags given on the command line override the file.
struct FlagSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;

    void add(CLI::App* app, const std::string& key, bool hidden = false) {
        auto* opt = app->add_option("--" + key, values[key], config_keys().at(key));
        if (hidden) opt->group("");
        options[key] = opt;
    }
    void add_all(CLI::App* app) {
        for (const auto& [key, _] : config_keys()) add(app, key, key == "explicit-dressing");
        app->add_option("--config", config_path, "flat key = value config file");
    }
    void add_bath(CLI::App* app) {
        for (const char* key : {"coupling", "d-star", "omega-c", "quad-tol"}) add(app, key);
        app->add_option("--config", config_path, "flat key = value config file");
    }
    KeyValues given() const {
        KeyValues kv;
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) kv[key] = values.at(key);
        return kv;
    }
    SweepConfig resolve() const {
        const KeyValues file = config_path.empty() ? KeyValues{} : read_config_file(config_path);
        return resolve_config(file, given());
    }
};

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
    if (path.empty() || path == "-") return std::cout;
    holder = std::make_unique<std::ofstream>(path);
    if (!*holder) throw ConfigError("output: cannot open '" + path + "' for writing");
    return *holder;
}

int run_sweep_cmd(const FlagSet& flags) {
    const SweepConfig cfg = flags.resolve();
    const auto rows = run_sweep(cfg);
    std::unique_ptr<std::ofstream> file;
    write_sweep_csv(open_output(cfg.output, file), cfg, rows);
    return 0;
}

int run_spectrum_cmd(const FlagSet& flags, double wmin, double wmax, int points, const std::string& out) {
    const SweepConfig cfg = flags.resolve();
    const auto rows = emit_spectrum(cfg.bath, wmin, wmax, points);
    std::unique_ptr<std::ofstream> file;
    write_spectrum_csv(open_output(out, file), cfg.bath, rows);
    return 0;
}

struct OracleArgs {
    double bias{std::sqrt(1.0 - 0.09)};
    TrajectoryConfig traj;
    std::string trajectory_csv;
    bool skip_step_check{false};
    std::string initial{"ground"};
};

int run_oracle_cmd(const FlagSet& flags, const OracleArgs& a) {
    const SweepConfig cfg = flags.resolve();
    const PiezoSpectrum spec(cfg.bath);
    DQDParams p = cfg.dqd;
    p.bias = a.bias;
    const BareFrame bare = bare_frame(p);
    RenormOptions opts;
    opts.tol = cfg.tol;
    const RenormSolution sol = solve_self_consistent(bare, bare.theta, spec, opts);
    const SweepRow row = [&] {
        SweepConfig one = cfg;
        one.mode = Mode::Full;
        return evaluate_point(a.bias, one, spec);
    }();
    const InitialState init = a.initial == "mixed" ? InitialState::MaximallyMixed : InitialState::DressedGround;

    std::cout << std::setprecision(12);
    std::cout << "bias," << a.bias << "\n";
    std::cout << "eta," << sol.frame.detuning << "\nomega," << sol.frame.rabi << "\n";
    std::cout << "M_poles," << (row.m_full ? std::to_string(*row.m_full) : std::string("nan")) << "\n";

    TrajectoryConfig tc = a.traj;
    if (tc.kernel_window <= 0.0) tc.kernel_window = kernel_window_for(cfg.bath, tc.dt);
    if (!a.trajectory_csv.empty()) {
        const Trajectory tr = propagate_tc2(bare, bare.theta, sol.frame, cfg.bath, tc, init);
        std::ofstream os(a.trajectory_csv);
        if (!os) throw ConfigError("trajectory: cannot open '" + a.trajectory_csv + "'");
        write_trajectory_csv(os, tr);
    }
    if (a.skip_step_check) {
        const Trajectory tr = propagate_tc2(bare, bare.theta, sol.frame, cfg.bath, tc, init);
        std::cout << "M_oracle," << time_average_observable(tr, tc) << "\n";
        std::cout << "max_trace_error," << tr.max_trace_error << "\n";
        return 0;
    }
    const OracleResult r = run_oracle(bare, bare.theta, sol.frame, cfg.bath, tc, 1e-3, init);
    std::cout << "M_oracle," << r.value << "\nM_oracle_half_step," << r.value_half << "\nstep_change,"
              << r.step_change << "\nkernel_window," << r.kernel_window << "\n";
    if (row.m_full) std::cout << "discrepancy," << std::abs(*row.m_full - r.value) << "\n";
    return 0;
}

int run_check_cmd(const FlagSet& flags, int max_points) {
    const SweepConfig cfg = flags.resolve();
    const PiezoSpectrum spec(cfg.bath);
    const auto grid = cfg.grid();
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / static_cast<std::size_t>(max_points));
    std::map<std::string, std::pair<int, double>> worst; // failures, worst value
    std::map<std::string, double> limits;
    int skipped = 0;
    for (std::size_t i = 0; i < grid.size(); i += stride) {
        try {
            for (const auto& r : check_point(grid[i], cfg, spec)) {
                auto& w = worst[r.name];
                if (!r.pass) ++w.first;
                w.second = std::max(w.second, r.value);
                limits[r.name] = r.limit;
            }
        } catch (const DegenerateFrequencies& e) {
            ++skipped;
            std::cerr << "skip bias " << grid[i] << ": " << e.what() << "\n";
        }
    }
    int failures = 0;
    for (const auto& [name, w] : worst) {
        const bool ok = w.first == 0;
        failures += ok ? 0 : 1;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " worst=" << w.second << " limit=" << limits[name]
                  << " failing_points=" << w.first << "\n";
    }
    if (skipped) std::cout << "note: " << skipped << " degenerate-frequency points skipped\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynss: dynamical steady states of a driven double quantum dot with a phonon bath"};
    app.require_subcommand(1);

    FlagSet sweep_flags, spectrum_flags, oracle_flags, check_flags;

    auto* sweep = app.add_subcommand("sweep", "bias sweep of the steady-state right-dot population");
    sweep_flags.add_all(sweep);

    auto* spectrum = app.add_subcommand("spectrum", "tabulate J(omega) and F(omega)");
    spectrum_flags.add_bath(spectrum);
    double wmin = -4.0, wmax = 4.0;
    int points = 801;
    std::string spectrum_out;
    spectrum->add_option("--omega-min", wmin, "first frequency");
    spectrum->add_option("--omega-max", wmax, "last frequency");
    spectrum->add_option("--points", points, "number of frequencies");
    spectrum->add_option("--output", spectrum_out, "CSV path (default stdout)");

    auto* oracle = app.add_subcommand("oracle", "single-point comparison against the time-domain oracle");
    oracle_flags.add_all(oracle);
    OracleArgs oa;
    oracle->add_option("--bias", oa.bias, "bias epsilon* (default: resonance for delta*=0.3)");
    oracle->add_option("--t-max", oa.traj.t_max, "propagation time");
    oracle->add_option("--dt", oa.traj.dt, "time step");
    oracle->add_option("--kernel-window", oa.traj.kernel_window, "history window (0 = automatic)");
    oracle->add_option("--average-window", oa.traj.average_window, "tail averaging window");
    oracle->add_option("--trajectory", oa.trajectory_csv, "dump the trajectory as CSV");
    oracle->add_option("--initial", oa.initial, "initial state: ground | mixed")
        ->check(CLI::IsMember({"ground", "mixed"}));
    oracle->add_flag("--no-step-check", oa.skip_step_check, "skip the dt-halving self-consistency run");

    auto* check = app.add_subcommand("check", "run the solver invariant suite over a config's bias grid");
    check_flags.add_all(check);
    int max_points = 50;
    check->add_option("--max-points", max_points, "number of grid points to check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_cmd(sweep_flags);
        if (spectrum->parsed()) return run_spectrum_cmd(spectrum_flags, wmin, wmax, points, spectrum_out);
        if (oracle->parsed()) return run_oracle_cmd(oracle_flags, oa);
        if (check->parsed()) return run_check_cmd(check_flags, max_points);
    } catch (const dynss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dynss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
