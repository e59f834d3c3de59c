// model.hpp — Bare and dressed frames of the driven double quantum dot and the
// Floquet coupling tables in the dressed interaction picture.
//
// Frequencies in W are labelled by integer pairs (n, m) meaning n·ω₀ + m·Ω′ with
// n, m ∈ {−1, 0, 1}, which spans W = {0, ±Ω′, ±1, ±(1 + Ω′), ±(1 − Ω′)}.
// Matching of shifted frequencies is done on labels, never on floats.
//
// Dressed basis ordering is (|+⟩, |−⟩), |+⟩ the lower-energy eigenstate of
// H_D = −Ω′σ_z^d/2. σ₊^d raises |+⟩ → |−⟩, so in the interaction picture it
// picks up e^{+iΩ′t}, matching the +Ω′ table entry.

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dynss/spectral.hpp"

namespace dynss {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

namespace pauli {
Mat2 identity();
Mat2 sz();
Mat2 sx();
Mat2 sy();
Mat2 raising();  // σ₊^d = |−⟩⟨+|
Mat2 lowering(); // σ₋^d = |+⟩⟨−|
} // namespace pauli

struct DQDParams {
    double bias{0.95};                          // ε*
    double tunneling{0.3};                      // Δ*
    double drive_angle{1.5707963267948966};     // δ
    double drive_amplitude{0.2};                // Ω₀*

    void validate() const;
};

struct BareFrame {
    double theta{0.0};      // atan2(Δ, ε)
    double splitting{0.0};  // √(ε² + Δ²)
    double detuning{0.0};   // η̃ = splitting − 1
    double rabi{0.0};       // Ω̃ = Ω₀ sin(θ − δ)
    double rabi_prime{0.0}; // √(η̃² + Ω̃²)
    double angle{0.0};      // atan2(Ω̃, η̃)
};

struct DressedFrame {
    double detuning{0.0};   // η
    double rabi{0.0};       // Ω
    double rabi_prime{0.0}; // Ω′
    double angle{0.0};      // atan2(Ω, η)
};

BareFrame bare_frame(const DQDParams& params);
DressedFrame make_dressed_frame(double eta, double omega);
// Frame that leaves the bare parameters untouched.
DressedFrame dressed_from_bare(const BareFrame& bare);

struct FreqLabel {
    int n{0}; // multiples of ω₀
    int m{0}; // multiples of Ω′

    double value(double rabi_prime) const { return n + m * rabi_prime; }
    FreqLabel operator-() const { return {-n, -m}; }
    bool operator==(const FreqLabel&) const = default;
};

struct TableEntry {
    FreqLabel label;
    double frequency{0.0};
    double alpha{0.0};
    Mat2 matrix;
};

struct CouplingTable {
    double rabi_prime{0.0};
    // Ordered: (0,0), then each +ω entry followed by its −ω adjoint.
    std::vector<TableEntry> entries;

    const TableEntry* find(FreqLabel label) const;
    // Matrix at label, or zero when the label is not in W.
    Mat2 at(FreqLabel label) const;
};

// Throws DegenerateFrequencies if two distinct labels of W coincide within tol.
void check_distinct_frequencies(double rabi_prime, double tol = 1e-9);

CouplingTable coupling_table(double theta, const DressedFrame& frame);

// M = |r⟩⟨r| = (𝟙 − σ_z)/2 expanded on the same Floquet table.
CouplingTable observable_table(double theta, const DressedFrame& frame);

struct DispersiveCoeffs {
    double a0{0.0};
    double a_rabi{0.0};
    Mat2 f0, f_plus, f_minus;
    Mat2 h0, h_plus, h_minus;

    // max ‖h_ν − f_ν‖ over ν ∈ {0, ±Ω′} (Frobenius)
    double consistency_gap() const;
};

// F_x ≡ F(x) − F(−x)
double F_antisym(const SpectralDensity& spec, double x);

// a₀, a_Ω′ only; used by the renormalization loop.
std::array<double, 2> dispersive_pair(double theta, const DressedFrame& frame,
                                      const SpectralDensity& spec);

DispersiveCoeffs dispersive_coeffs(double theta, const DressedFrame& frame, const BareFrame& bare,
                                   const SpectralDensity& spec);
DispersiveCoeffs dispersive_coeffs(double theta, const DressedFrame& frame, const BareFrame& bare,
                                   const BathSpectrum& bath);

// Unitary whose columns are |+⟩, |−⟩ written in the eigenbasis of σ_z^e.
Mat2 dressed_basis(const DressedFrame& frame);

} // namespace dynss
