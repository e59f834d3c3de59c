// sweep.hpp — Bias sweeps over the solver stack, comparison modes and CSV output

#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynss/model.hpp"
#include "dynss/poles.hpp"
#include "dynss/spectral.hpp"

namespace dynss {

enum class Mode {
    Full,          // V = {0, ±Ω′}, self-consistently renormalized η, Ω
    BareDynamical, // V = {0, ±Ω′}, bare η̃ with Ω_approx
    Markov,        // V = {0}, bare η̃ with Ω_approx
    NoDrive,       // ground state of the undriven double dot
    All,
};

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

struct SweepConfig {
    DQDParams dqd; // bias is overwritten per grid point
    double bias_min{0.7};
    double bias_max{1.2};
    int steps{400};
    BathSpectrum bath;
    Mode mode{Mode::Full};
    double tol{1e-10};
    int threads{1};
    std::string output; // empty means stdout
    // Keep the h_ν − f_ν mismatch in bare-dynamical mode instead of setting h_ν := f_ν.
    bool explicit_dressing{false};

    void validate() const;
    std::vector<double> grid() const;
};

struct SweepRow {
    double bias{0.0};
    double bare_detuning{0.0};
    double bare_rabi{0.0};
    // Frame of the leading dynamical mode: renormalized for full/all, (η̃, Ω_approx) otherwise.
    double eta{0.0};
    double omega{0.0};
    double omega_prime{0.0};
    std::optional<double> m_full, m_bare_dynamical, m_markov, m_no_drive;
    bool valid{true};
    std::string flag;
    // diagnostics
    double renorm_residual{0.0};
    int renorm_iterations{0};
    double consistency_gap{0.0};
    int kernel_dimension{0};
    double conditioning{0.0};
    double solve_residual{0.0};
    double hermiticity_defect{0.0};
    double observable_imag{0.0};
};

// Warm-start chains restart every kChunk grid points, independently of the
// thread count, so serial and threaded sweeps give bit-identical rows.
inline constexpr int kChunk = 16;

// One bias point; seed is the previous point's (η, Ω) for the full mode.
SweepRow evaluate_point(double bias, const SweepConfig& cfg, const SpectralDensity& spec,
                        std::optional<std::array<double, 2>> seed = std::nullopt);

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const SpectralDensity& spec);

struct SpectrumRow {
    double omega{0.0};
    double J{0.0};
    double F{0.0};
    bool valid{true};
    std::string flag;
};

std::vector<SpectrumRow> emit_spectrum(const BathSpectrum& bath, double omega_min, double omega_max,
                                       int points);

// Reproducibility header: one "# key = value" line per resolved setting.
std::string config_header(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows);
void write_spectrum_csv(std::ostream& os, const BathSpectrum& bath, const std::vector<SpectrumRow>& rows);

} // namespace dynss
