// renorm.hpp — Self-consistent renormalization of detuning and Rabi frequency
//
// Finds the dressed (η, Ω) whose dispersive coefficients cancel the residual
// drive, i.e. the fixed point of
//
//   η = η̃ + a₀ cos φ − a_Ω′ sin φ
//   Ω = Ω̃ + a₀ sin φ + a_Ω′ cos φ,      φ = atan2(Ω, η)
//
// which is the rotated form of [η̃, Ω̃]ᵀ = −R(φ)[a₀ − Ω′, a_Ω′]ᵀ.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "dynss/model.hpp"
#include "dynss/spectral.hpp"

namespace dynss {

struct RenormOptions {
    double tol{1e-10};
    int max_iterations{200};
    double damping{0.5};
    double fd_step{1e-6};
    // Run every seed and report distinct roots instead of stopping at the first.
    bool explore_seeds{false};
};

struct RenormSolution {
    DressedFrame frame;
    double residual_norm{0.0};
    int iterations{0};
    double consistency_gap{0.0};
    bool newton{false}; // fell back to quasi-Newton
    // Distinct roots reached from other seeds (> 1e-6 apart), if any were tried.
    std::vector<DressedFrame> alternatives;
};

// One application of the map above: returns G(η, Ω).
std::array<double, 2> renorm_map(const BareFrame& bare, double theta, const SpectralDensity& spec,
                                 double eta, double omega);

// seed: starting (η, Ω); defaults to (η̃, Ω_approx). Throws UndrivenDegenerate
// when Ω̃ = 0 with a non-vanishing bath, NoConvergence when every seed fails.
RenormSolution solve_self_consistent(const BareFrame& bare, double theta, const SpectralDensity& spec,
                                     const RenormOptions& opts = {},
                                     std::optional<std::array<double, 2>> seed = std::nullopt);
RenormSolution solve_self_consistent(const BareFrame& bare, double theta, const BathSpectrum& bath,
                                     double tol = 1e-10);

struct ApproxRenorm {
    double eta{0.0};
    double omega{0.0};
};

// Near-resonance scaling η̃/(1 + F′(0)), Ω̃/(1 − F′(0)).
// Throws PolaronDivergence when |1 + F′(0)| < 1e-6.
ApproxRenorm approx_renorm(const BareFrame& bare, const SpectralDensity& spec);
ApproxRenorm approx_renorm(const BareFrame& bare, const BathSpectrum& bath);

} // namespace dynss
