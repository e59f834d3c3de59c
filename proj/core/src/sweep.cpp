// sweep.cpp — per-point evaluation, chunked threaded sweeps, CSV writers

#include "dynss/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "dynss/errors.hpp"
#include "dynss/renorm.hpp"

namespace dynss {
namespace {

bool wants(Mode requested, Mode m) { return requested == m || requested == Mode::All; }

struct Dynamical {
    double value{0.0};
    double imag{0.0};
    SolveDiagnostics diag;
    int kernel{0};
    double conditioning{0.0};
};

Dynamical dynamical_observable(double theta, const DressedFrame& frame, const BareFrame& bare,
                               const SpectralDensity& spec, Dressing dressing) {
    const CouplingTable table = coupling_table(theta, frame);
    const DispersiveCoeffs disp = dispersive_coeffs(theta, frame, bare, spec);
    const ResidueSystem sys = assemble_system(table, disp, frame, spec, default_poles(), dressing);
    Dynamical out;
    const ResidueSet res = solve_residues(sys, &out.diag);
    const cplx m = observable_sum(res, observable_table(theta, frame));
    out.value = m.real();
    out.imag = m.imag();
    out.kernel = sys.kernel_dimension;
    out.conditioning = sys.conditioning;
    return out;
}

void note(SweepRow& row, const std::string& what) {
    row.valid = false;
    if (!row.flag.empty()) row.flag += "; ";
    row.flag += what;
}

// Flag without invalidating the point.
void warn(SweepRow& row, const std::string& what) {
    if (!row.flag.empty()) row.flag += "; ";
    row.flag += what;
}

void fill_diagnostics(SweepRow& row, const Dynamical& d) {
    row.kernel_dimension = d.kernel;
    row.conditioning = d.conditioning;
    row.solve_residual = d.diag.residual;
    row.hermiticity_defect = d.diag.hermiticity_defect;
    row.observable_imag = d.imag;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

// CSV-safe flag text.
std::string clean(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

Mode parse_mode(const std::string& s) {
    if (s == "full") return Mode::Full;
    if (s == "bare-dynamical") return Mode::BareDynamical;
    if (s == "markov") return Mode::Markov;
    if (s == "no-drive") return Mode::NoDrive;
    if (s == "all") return Mode::All;
    throw ConfigError("mode: unknown value '" + s + "' (accepted: full, bare-dynamical, markov, no-drive, all)");
}

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Full: return "full";
    case Mode::BareDynamical: return "bare-dynamical";
    case Mode::Markov: return "markov";
    case Mode::NoDrive: return "no-drive";
    case Mode::All: return "all";
    }
    return "?";
}

void SweepConfig::validate() const {
    DQDParams probe = dqd;
    probe.bias = bias_min;
    probe.validate();
    bath.validate();
    if (steps < 2) throw ConfigError("steps: must be >= 2 (got " + std::to_string(steps) + ")");
    if (!(bias_min < bias_max))
        throw ConfigError("bias-min/bias-max: need bias-min < bias-max (got " + fmt(bias_min) + " >= " +
                          fmt(bias_max) + ")");
    if (!(tol > 0.0)) throw ConfigError("tol: must be > 0");
    if (threads < 1) throw ConfigError("threads: must be >= 1");
}

std::vector<double> SweepConfig::grid() const {
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i)
        g[i] = bias_min + (bias_max - bias_min) * static_cast<double>(i) / (steps - 1);
    return g;
}

SweepRow evaluate_point(double bias, const SweepConfig& cfg, const SpectralDensity& spec,
                        std::optional<std::array<double, 2>> seed) {
    SweepRow row;
    row.bias = bias;
    DQDParams p = cfg.dqd;
    p.bias = bias;
    const BareFrame bare = bare_frame(p);
    row.bare_detuning = bare.detuning;
    row.bare_rabi = bare.rabi;
    const double theta = bare.theta;

    if (wants(cfg.mode, Mode::NoDrive)) {
        const double s = std::sin(0.5 * theta);
        row.m_no_drive = s * s;
    }
    if (cfg.mode == Mode::NoDrive) {
        row.eta = bare.detuning;
        row.omega = std::abs(bare.rabi);
        row.omega_prime = bare.rabi_prime;
        return row;
    }

    // Comparison frame (η̃, Ω_approx) shared by the bare-dynamical and Markov modes.
    std::optional<DressedFrame> approx_frame;
    if (wants(cfg.mode, Mode::BareDynamical) || wants(cfg.mode, Mode::Markov)) {
        try {
            const ApproxRenorm a = approx_renorm(bare, spec);
            approx_frame = make_dressed_frame(bare.detuning, a.omega);
            row.eta = approx_frame->detuning;
            row.omega = std::abs(approx_frame->rabi);
            row.omega_prime = approx_frame->rabi_prime;
        } catch (const Error& e) {
            note(row, std::string("approx: ") + e.what());
        }
    }

    if (approx_frame && wants(cfg.mode, Mode::Markov)) {
        try {
            const CouplingTable table = coupling_table(theta, *approx_frame);
            const ResidueSet res = markov_steady(table, spec);
            row.m_markov = steady_observable(res, observable_table(theta, *approx_frame));
        } catch (const Error& e) {
            note(row, std::string("markov: ") + e.what());
        }
    }

    if (approx_frame && wants(cfg.mode, Mode::BareDynamical)) {
        try {
            const Dressing d = cfg.explicit_dressing ? Dressing::Explicit : Dressing::Cancelled;
            const Dynamical r = dynamical_observable(theta, *approx_frame, bare, spec, d);
            row.m_bare_dynamical = r.value;
            fill_diagnostics(row, r);
        } catch (const Error& e) {
            note(row, std::string("bare-dynamical: ") + e.what());
        }
    }

    if (wants(cfg.mode, Mode::Full)) {
        try {
            RenormOptions opts;
            opts.tol = cfg.tol;
            const RenormSolution sol = solve_self_consistent(bare, theta, spec, opts, seed);
            row.eta = sol.frame.detuning;
            row.omega = std::abs(sol.frame.rabi);
            row.omega_prime = sol.frame.rabi_prime;
            row.renorm_residual = sol.residual_norm;
            row.renorm_iterations = sol.iterations;
            row.consistency_gap = sol.consistency_gap;
            const Dynamical r = dynamical_observable(theta, sol.frame, bare, spec, Dressing::Cancelled);
            row.m_full = r.value;
            fill_diagnostics(row, r);
        } catch (const Error& e) {
            note(row, std::string("full: ") + e.what());
        }
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const PiezoSpectrum spec(cfg.bath);
    return run_sweep(cfg, spec);
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const SpectralDensity& spec) {
    cfg.validate();
    const std::vector<double> grid = cfg.grid();
    std::vector<SweepRow> rows(grid.size());
    const int nchunks = (static_cast<int>(grid.size()) + kChunk - 1) / kChunk;

    auto run_chunk = [&](int c) {
        std::optional<std::array<double, 2>> seed;
        std::optional<std::array<double, 2>> prev_bare;
        const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
        const std::size_t end = std::min(grid.size(), begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
            SweepRow row = evaluate_point(grid[i], cfg, spec, seed);
            if (row.m_full) {
                const std::array<double, 2> now{row.eta, row.bare_rabi < 0 ? -row.omega : row.omega};
                // Bounded step-to-step change along the warm-started branch.
                if (seed && prev_bare) {
                    const double dsol = std::hypot(now[0] - (*seed)[0], now[1] - (*seed)[1]);
                    const double dbare = std::abs(row.bare_detuning - (*prev_bare)[0]);
                    if (dsol > 20.0 * dbare + 1e-6) warn(row, "branch jump between neighbouring bias points");
                }
                seed = now;
                prev_bare = std::array<double, 2>{row.bare_detuning, row.bare_rabi};
            } else {
                seed.reset();
                prev_bare.reset();
            }
            rows[i] = std::move(row);
        }
    };

    const int nthreads = std::min(cfg.threads, nchunks);
    if (nthreads <= 1) {
        for (int c = 0; c < nchunks; ++c) run_chunk(c);
        return rows;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (int c = next++; c < nchunks; c = next++) run_chunk(c);
        });
    pool.clear(); // joins
    return rows;
}

std::vector<SpectrumRow> emit_spectrum(const BathSpectrum& bath, double omega_min, double omega_max,
                                       int points) {
    bath.validate();
    if (points < 2) throw ConfigError("points: must be >= 2 (got " + std::to_string(points) + ")");
    if (!(omega_min < omega_max)) throw ConfigError("omega-min/omega-max: need omega-min < omega-max");
    std::vector<SpectrumRow> rows(points);
    for (int i = 0; i < points; ++i) {
        SpectrumRow& r = rows[i];
        r.omega = omega_min + (omega_max - omega_min) * static_cast<double>(i) / (points - 1);
        r.J = eval_J(r.omega, bath);
        try {
            r.F = eval_F(r.omega, bath);
        } catch (const Error& e) {
            r.valid = false;
            r.flag = e.what();
        }
    }
    return rows;
}

std::string config_header(const SweepConfig& cfg) {
    std::ostringstream os;
    os << "# dynss sweep\n"
       << "# delta = " << fmt(cfg.dqd.tunneling) << "\n"
       << "# delta-angle = " << fmt(cfg.dqd.drive_angle) << "\n"
       << "# drive = " << fmt(cfg.dqd.drive_amplitude) << "\n"
       << "# coupling = " << fmt(cfg.bath.coupling) << "\n"
       << "# d-star = " << fmt(cfg.bath.separation) << "\n"
       << "# omega-c = " << fmt(cfg.bath.cutoff) << "\n"
       << "# quad-tol = " << fmt(cfg.bath.quadrature_tolerance) << "\n"
       << "# bias-min = " << fmt(cfg.bias_min) << "\n"
       << "# bias-max = " << fmt(cfg.bias_max) << "\n"
       << "# steps = " << cfg.steps << "\n"
       << "# mode = " << to_string(cfg.mode) << "\n"
       << "# tol = " << fmt(cfg.tol) << "\n"
       << "# threads = " << cfg.threads << "\n";
    if (cfg.explicit_dressing) os << "# explicit-dressing = true\n";
    return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
    os << config_header(cfg);
    os << "bias,bare_eta,bare_omega,eta,omega,omega_prime,M_full,M_bare_dynamical,M_markov,M_no_drive,"
          "valid,renorm_residual,renorm_iterations,consistency_gap,kernel_dim,conditioning,"
          "solve_residual,hermiticity_defect,observable_imag,flag\n";
    for (const auto& r : rows) {
        os << fmt(r.bias) << ',' << fmt(r.bare_detuning) << ',' << fmt(std::abs(r.bare_rabi)) << ','
           << fmt(r.eta) << ',' << fmt(r.omega) << ',' << fmt(r.omega_prime) << ',';
        // Invalid points keep their observables blank.
        if (r.valid)
            os << fmt_opt(r.m_full) << ',' << fmt_opt(r.m_bare_dynamical) << ',' << fmt_opt(r.m_markov) << ','
               << fmt_opt(r.m_no_drive) << ',';
        else
            os << ",,,,";
        os << (r.valid ? 1 : 0) << ',' << fmt(r.renorm_residual) << ',' << r.renorm_iterations << ','
           << fmt(r.consistency_gap) << ',' << r.kernel_dimension << ',' << fmt(r.conditioning) << ','
           << fmt(r.solve_residual) << ',' << fmt(r.hermiticity_defect) << ',' << fmt(r.observable_imag)
           << ',' << clean(r.flag) << '\n';
    }
}

void write_spectrum_csv(std::ostream& os, const BathSpectrum& bath, const std::vector<SpectrumRow>& rows) {
    os << "# dynss spectrum\n"
       << "# coupling = " << fmt(bath.coupling) << "\n"
       << "# d-star = " << fmt(bath.separation) << "\n"
       << "# omega-c = " << fmt(bath.cutoff) << "\n"
       << "# quad-tol = " << fmt(bath.quadrature_tolerance) << "\n";
    os << "omega,J,F,valid,flag\n";
    for (const auto& r : rows)
        os << fmt(r.omega) << ',' << fmt(r.J) << ',' << (r.valid ? fmt(r.F) : std::string()) << ','
           << (r.valid ? 1 : 0) << ',' << clean(r.flag) << '\n';
}

} // namespace dynss
