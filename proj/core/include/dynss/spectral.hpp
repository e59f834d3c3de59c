// spectral.hpp — Piezo-electric phonon spectral density, its Hilbert transform,
// boundary values Ĵ± and the zero-temperature bath correlation function.
//
// All frequencies are in units of the drive frequency ω₀. The spectral density
// is supported on negative frequencies:
//
//   J(ω) = π P |ω| (1 − sinc(d ω)) / (1 + (ω/ω_c)²)   for ω < 0, else 0
//   F(x) = −π⁻¹ PV ∫ dω J(ω) / (ω − x)
//   Ĵ±(ω) = (J(ω) ± i F(ω)) / 2

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

namespace dynss {

struct BathSpectrum {
    double coupling{0.2};              // P
    double separation{20.0};           // d* = d ω₀ / c_s
    double cutoff{2.0};                // ω_c*
    double quadrature_tolerance{1e-9}; // absolute error target for F

    void validate() const;
};

enum class Branch { Plus, Minus };

// sin(x)/x with sinc(0) = 1.
double sinc(double x);

double eval_J(double omega, const BathSpectrum& bath);
double eval_F(double x, const BathSpectrum& bath);
double eval_Fprime0(const BathSpectrum& bath);
std::complex<double> jhat(Branch sign, double omega, const BathSpectrum& bath);

// C(τ) = (2π)⁻¹ ∫₀^∞ J(−ω) e^{−iωτ} dω, evaluated in closed form through
// exponential integrals. The Ohmic 1/ω tail of J makes C(0) diverge
// logarithmically, so C(0) = +∞ whenever coupling > 0.
std::complex<double> bath_correlation(double tau, const BathSpectrum& bath);

// What the model / renorm / poles layers consume. Implementations must be
// safe for concurrent calls.
class SpectralDensity {
public:
    virtual ~SpectralDensity() = default;

    virtual double J(double omega) const = 0;
    virtual double F(double x) const = 0;
    virtual double Fprime0() const = 0;
    // True when J ≡ 0 (and hence F ≡ 0).
    virtual bool vanishing() const = 0;

    std::complex<double> jhat(Branch sign, double omega) const {
        const double s = sign == Branch::Plus ? 1.0 : -1.0;
        return {0.5 * J(omega), 0.5 * s * F(omega)};
    }
    // F(x) − F(−x)
    double F_odd(double x) const { return F(x) - F(-x); }
};

// Piezo bath with a per-instance memo of F keyed on the exact argument bits.
class PiezoSpectrum final : public SpectralDensity {
public:
    explicit PiezoSpectrum(BathSpectrum bath);

    double J(double omega) const override;
    double F(double x) const override;
    double Fprime0() const override;
    bool vanishing() const override { return bath_.coupling == 0.0; }

    const BathSpectrum& bath() const { return bath_; }
    std::size_t cache_size() const;

private:
    BathSpectrum bath_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, double> f_cache_;
    mutable std::optional<double> fprime0_;
};

// Arbitrary (J, F) pair, used for limiting-case tests.
class SyntheticSpectrum final : public SpectralDensity {
public:
    SyntheticSpectrum(std::function<double(double)> J, std::function<double(double)> F,
                      double fprime0 = 0.0)
        : J_(std::move(J)), F_(std::move(F)), fprime0_(fprime0) {}

    double J(double omega) const override { return J_(omega); }
    double F(double x) const override { return F_(x); }
    double Fprime0() const override { return fprime0_; }
    bool vanishing() const override { return false; }

private:
    std::function<double(double)> J_;
    std::function<double(double)> F_;
    double fprime0_;
};

} // namespace dynss
