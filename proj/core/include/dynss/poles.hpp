// poles.hpp — Pole-ansatz residue system, Markov baseline and observable contraction
//
// The steady-state Laplace transform is approximated by ρ̄(s) = Σ_ν ρ_ν / (s − iν)
// over poles ν ∈ V. Matching residues on both sides of the Laplace-transformed
// Born master equation gives a homogeneous linear system in the stacked,
// row-major vectorized residues; trace(ρ₀) = 1 fixes the scale.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dynss/model.hpp"
#include "dynss/spectral.hpp"

namespace dynss {

// How the coherent part h_ν of the system Hamiltonian enters the residue equations.
enum class Dressing {
    Cancelled, // h_ν := f_ν, the dispersive terms absorbed into the dressing
    Explicit,  // h_ν from the bare drive, leaving any h_ν − f_ν mismatch in place
};

// V = {0, +Ω′, −Ω′} as labels.
std::vector<FreqLabel> default_poles();

struct ResidueSet {
    std::vector<FreqLabel> poles;
    std::vector<double> frequencies;
    std::vector<Mat2> residues;

    // Residue at a pole label; zero matrix if the label is not in V.
    Mat2 at(FreqLabel label) const;
};

struct ResidueSystem {
    std::vector<FreqLabel> poles;
    double rabi_prime{0.0};
    Eigen::MatrixXcd matrix;   // 4|V| × 4|V|, coupling minus the iν′ diagonal
    Eigen::MatrixXcd coupling; // right-hand side only
    Eigen::VectorXd singular_values;
    int kernel_dimension{0};
    double conditioning{0.0};   // σ_max / smallest singular value above the kernel
    double trace_defect{0.0};   // max |trace row| of the coupling part, relative to ‖matrix‖
};

struct SolveDiagnostics {
    double residual{0.0};            // ‖L x‖ / (‖L‖ ‖x‖)
    double hermiticity_defect{0.0};  // max over pairs of ‖ρ_{−ν} − ρ_ν†‖
    double dynamic_trace{0.0};       // max |trace ρ_ν| over ν ≠ 0
    bool ill_conditioned{false};     // conditioning above 1e12
    Eigen::Vector2d rho0_eigenvalues;
};

struct CouplingPair {
    FreqLabel omega;
    FreqLabel omega_prime; // ω′ = ω + ν − ν′
};

// All (ω, ω′) ∈ W × W with ω′ − ω = ν − ν′, enumerated on labels.
std::vector<CouplingPair> coupling_pairs(const CouplingTable& table, FreqLabel nu, FreqLabel nu_prime);

// Throws DegenerateFrequencies if Ω′ sits within 1e-6 of 1/2 or 1, where labels collide.
ResidueSystem assemble_system(const CouplingTable& table, const DispersiveCoeffs& disp,
                              const DressedFrame& frame, const SpectralDensity& spec,
                              const std::vector<FreqLabel>& poles = default_poles(),
                              Dressing dressing = Dressing::Cancelled);

// Throws SingularSystem when the kernel is not one-dimensional.
ResidueSet solve_residues(const ResidueSystem& system, SolveDiagnostics* diag = nullptr);

// Lindblad steady state of Σ_ω J(ω) D[P_ω]; V = {0}.
ResidueSet markov_steady(const CouplingTable& table, const SpectralDensity& spec);

// Σ_ν Tr{M_ν† ρ_ν}; the imaginary part is a Hermiticity diagnostic.
cplx observable_sum(const ResidueSet& residues, const CouplingTable& obs);
double steady_observable(const ResidueSet& residues, const CouplingTable& obs);

// Row-major vec of a 2×2 matrix and back.
Eigen::Vector4cd vec(const Mat2& m);
Mat2 unvec(const Eigen::Ref<const Eigen::VectorXcd>& v);

} // namespace dynss
