// checks.hpp — Per-point solver invariants shared by the `check` subcommand and tests

#pragma once

#include <string>
#include <vector>

#include "dynss/spectral.hpp"
#include "dynss/sweep.hpp"

namespace dynss {

struct InvariantResult {
    std::string name;
    double value{0.0};
    double limit{0.0};
    bool pass{false};
};

// Full-mode solve at one bias with every post-condition measured:
// renormalization residual and consistency gap, kernel dimension, trace(ρ₀),
// emergent trace(ρ_{±Ω′}), Hermiticity closure, relative system residual,
// observable imaginary part and population bounds.
std::vector<InvariantResult> check_point(double bias, const SweepConfig& cfg, const SpectralDensity& spec);

} // namespace dynss
