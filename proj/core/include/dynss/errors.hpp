// errors.hpp — Exception types raised by the solver stack

#pragma once

#include <stdexcept>
#include <string>

namespace dynss {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature could not reach its error target within the evaluation budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Two distinct Floquet labels collapse onto the same numerical frequency.
struct DegenerateFrequencies : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

// Undriven system (Ω̃ = 0) with nonzero coupling: the dressed angle is ill-defined.
struct UndrivenDegenerate : Error {
    using Error::Error;
};

// |1 + F′(0)| too small for the near-resonance scaling.
struct PolaronDivergence : Error {
    using Error::Error;
};

// Residue / Lindblad kernel is not one-dimensional.
struct SingularSystem : Error {
    using Error::Error;
};

struct StepTooCoarse : Error {
    using Error::Error;
};

struct NotSettled : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace dynss
