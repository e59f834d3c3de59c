// oracle.hpp — Time-domain integrator of the second-order time-convolution
// (Born) master equation, used to validate the pole-ansatz solver.
//
// Works in the rotating frame of the drive followed by the interaction picture
// of H_D = −(η σ_z^e + Ω σ_x^e)/2 for a supplied dressed frame. With H_I = Z ⊗ B:
//
//   ρ̇(t) = −i[H(t), ρ(t)] − [Z(t), Q(t) − Q(t)†],
//   Q(t) = ∫₀^{τ_max} dτ C(τ) Z(t − τ) ρ(t − τ)
//
// where H(t) is the residual drive H_R − H_D in the interaction picture.
// Q is discretized with product-trapezoid (hat function) weights integrated
// against C exactly up to Gauss–Legendre error, because C(τ) has a
// logarithmic singularity at τ = 0.

#pragma once

#include <iosfwd>
#include <vector>

#include "dynss/model.hpp"
#include "dynss/spectral.hpp"

namespace dynss {

struct TrajectoryConfig {
    double t_max{3000.0};
    double dt{0.05};
    // History truncation τ_max; 0 picks the smallest window meeting the decay criterion.
    double kernel_window{0.0};
    // Tail length used for averaging; rounded down to whole periods 2π/Ω′.
    double average_window{300.0};
    bool predictor_corrector{true};
    // Drift between the last two averaging windows above this raises NotSettled.
    double settle_tolerance{1e-4};
    // Sample every k-th step into the stored trajectory.
    int sample_stride{1};

    // Throws ConfigError on dt above min(0.02/Ω̃′, 0.02·2π) or an insufficient kernel window.
    void validate(double bare_rabi_prime, const BathSpectrum& bath) const;
};

// Smallest τ on the dt grid beyond which |C(τ)| stays below ratio·|C(dt)|.
// C(0) itself is infinite, so |C(dt)| stands in for the kernel scale.
double kernel_window_for(const BathSpectrum& bath, double dt, double ratio = 1e-6);

enum class InitialState { DressedGround, MaximallyMixed };

struct Trajectory {
    double dt{0.0};
    int stride{1};
    DressedFrame frame;
    double theta{0.0};
    std::vector<double> times;
    std::vector<Mat2> rho;             // interaction picture, σ_z^e eigenbasis
    std::vector<double> observable;    // right-dot population Tr{M(t) ρ(t)} built in the lab frame
    double max_trace_error{0.0};
    double max_hermiticity_error{0.0};
};

Trajectory propagate_tc2(const BareFrame& bare, double theta, const DressedFrame& frame,
                         const BathSpectrum& bath, const TrajectoryConfig& cfg,
                         InitialState init = InitialState::DressedGround);

// Mean of the lab-frame observable over the averaging window. Throws NotSettled.
double time_average_observable(const Trajectory& traj, const TrajectoryConfig& cfg);

// Same average computed from a dressed-basis Floquet table, Σ_ω Tr{M_ω e^{iωt} ρ_d(t)}.
double time_average_observable(const Trajectory& traj, const CouplingTable& obs,
                               const TrajectoryConfig& cfg);

struct OracleResult {
    double value{0.0};        // average at cfg.dt
    double value_half{0.0};   // average at cfg.dt / 2
    double step_change{0.0};  // |value − value_half|
    double kernel_window{0.0};
};

// Runs at dt and dt/2 and throws StepTooCoarse when the averages differ by more
// than step_tol.
OracleResult run_oracle(const BareFrame& bare, double theta, const DressedFrame& frame,
                        const BathSpectrum& bath, TrajectoryConfig cfg, double step_tol = 1e-3,
                        InitialState init = InitialState::DressedGround);

// CSV: t, rho00, rho11, re rho01, im rho01, observable
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace dynss
