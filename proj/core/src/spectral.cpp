// spectral.cpp — J, F, F′(0), Ĵ± and C(τ) for the piezo-electric bath

#include "dynss/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dynss/errors.hpp"
#include "dynss/quadrature.hpp"

namespace dynss {
namespace {

using std::numbers::pi;

// 1 − sin(x)/x without cancellation near 0.
double one_minus_sinc(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 1e-2) return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    return 1.0 - std::sin(x) / x;
}

// Unit-coupling density on the positive half-line: j(u) = J(−u) / P.
double j_unit(double u, double d, double a) {
    if (u <= 0.0) return 0.0;
    const double r = u / a;
    return pi * u * one_minus_sinc(d * u) / (1.0 + r * r);
}

// ∫_U^∞ sin(d u) g(u) du by repeated integration by parts, given g and its
// first two derivatives at U.
double sin_tail(double U, double d, double g, double g1, double g2) {
    const double c = std::cos(d * U);
    const double s = std::sin(d * U);
    return g * c / d - g1 * s / (d * d) - g2 * c / (d * d * d);
}

// Upper end of the numerically integrated window.
double window_end(double y, double a) { return std::max(50.0 * a, 2.0 * std::abs(y) + 1.0); }

std::vector<double> panel_breaks(double U, double d, double y) {
    std::vector<double> b;
    const double fine = 2.0 * pi / d;
    const double dense_end = std::min(U, 10.0);
    for (double u = 0.0; u < dense_end; u += fine) b.push_back(u);
    for (double u = dense_end; u < U; u += 5.0) b.push_back(u);
    b.push_back(U);
    if (y > 0.0 && y < U) b.push_back(y);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// F at unit coupling. F(x) = π⁻¹ PV ∫₀^∞ j(u)/(u − y) du with y = −x.
double F_unit(double x, double d, double a, double abs_tol) {
    const double y = -x;
    const double U = window_end(y, a);
    const double jy = y > 0.0 ? j_unit(y, d, a) : 0.0;

    auto integrand = [&](double u) {
        if (y > 0.0) return (j_unit(u, d, a) - jy) / (u - y);
        const double den = u - y;
        return den == 0.0 ? 0.0 : j_unit(u, d, a) / den;
    };
    const auto breaks = panel_breaks(U, d, y);
    quad::Options opts;
    opts.abs_tol = 0.5 * pi * abs_tol;
    opts.max_intervals = 20000;
    double window = quad::integrate(integrand, breaks, opts).value;
    if (y > 0.0) window += jy * std::log((U - y) / y);

    // Tail beyond U: rational part exactly, oscillatory part asymptotically.
    const double a2 = a * a;
    const double den = y * y + a2;
    const double A = y / den;
    const double C = a2 / den;
    const double rational =
        -A * std::log((U - y) / std::hypot(U, a)) + C / a * (0.5 * pi - std::atan(U / a));

    const double p = U * U + a2;
    const double q = U - y;
    const double g = 1.0 / (p * q);
    const double L = -2.0 * U / p - 1.0 / q;
    const double dL = -2.0 / p + 4.0 * U * U / (p * p) + 1.0 / (q * q);
    const double oscill = sin_tail(U, d, g, g * L, g * (L * L + dL));

    const double tail = pi * a2 * (rational - oscill / d);
    return (window + tail) / pi;
}

// F′(0) at unit coupling: −π⁻¹ ∫₀^∞ j(u)/u² du.
double Fprime0_unit(double d, double a, double abs_tol) {
    const double U = 50.0 * a;
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double r = u / a;
        return one_minus_sinc(d * u) / (u * (1.0 + r * r));
    };
    const auto breaks = panel_breaks(U, d, 0.0);
    quad::Options opts;
    opts.abs_tol = 0.5 * abs_tol;
    opts.max_intervals = 20000;
    const double window = quad::integrate(integrand, breaks, opts).value;

    const double a2 = a * a;
    const double p = U * U + a2;
    const double g = 1.0 / (U * U * p);
    const double L = -2.0 / U - 2.0 * U / p;
    const double dL = 2.0 / (U * U) - 2.0 / p + 4.0 * U * U / (p * p);
    const double tail = 0.5 * std::log1p(a2 / (U * U)) - a2 / d * sin_tail(U, d, g, g * L, g * (L * L + dL));
    return -(window + tail);
}

// e^{−x} Ei(x) for x > 0.
double ei_scaled(double x) {
    if (x < 40.0) return std::exp(-x) * std::expint(x);
    double term = 1.0 / x, sum = term;
    for (int k = 1; k < 60; ++k) {
        const double next = term * k / x;
        if (next > term || next < 1e-18 * sum) break;
        term = next;
        sum += term;
    }
    return sum;
}

// e^{x} E₁(x) for x > 0, with E₁(x) = −Ei(−x).
double e1_scaled(double x) {
    if (x < 40.0) return -std::exp(x) * std::expint(-x);
    double term = 1.0 / x, sum = term;
    for (int k = 1; k < 60; ++k) {
        const double next = term * k / x;
        if (next > term || next < 1e-18 * sum) break;
        term = next;
        sum += (k % 2 ? -term : term);
    }
    return sum;
}

// ∫₀^∞ sin(b x)/(x² + a²) dx
double sin_lorentz(double b, double a) {
    if (b == 0.0) return 0.0;
    const double s = b > 0.0 ? 1.0 : -1.0;
    const double x = a * std::abs(b);
    return s * (ei_scaled(x) + e1_scaled(x)) / (2.0 * a);
}

// ∫₀^∞ cos(b x)/(x² + a²) dx
double cos_lorentz(double b, double a) { return pi / (2.0 * a) * std::exp(-a * std::abs(b)); }

std::complex<double> correlation_unit(double tau, double d, double a) {
    const double x = a * tau;
    const double ic = -0.5 * (ei_scaled(x) - e1_scaled(x)); // ∫ ω cos(ωτ)/(ω²+a²)
    const double is = 0.5 * pi * std::exp(-x);               // ∫ ω sin(ωτ)/(ω²+a²)
    const double sc = 0.5 * (sin_lorentz(d + tau, a) + sin_lorentz(d - tau, a));
    const double ss = 0.5 * (cos_lorentz(d - tau, a) - cos_lorentz(d + tau, a));
    const double re = ic - sc / d;
    const double im = -is + ss / d;
    return 0.5 * a * a * std::complex<double>(re, im);
}

double unit_tolerance(const BathSpectrum& bath) {
    return bath.quadrature_tolerance / std::max(1.0, bath.coupling);
}

} // namespace

void BathSpectrum::validate() const {
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
        throw ConfigError("coupling must be finite and >= 0 (got " + std::to_string(coupling) + ")");
    if (!(separation > 0.0) || !std::isfinite(separation))
        throw ConfigError("separation d* must be > 0 (got " + std::to_string(separation) + ")");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw ConfigError("cutoff omega_c* must be > 0 (got " + std::to_string(cutoff) + ")");
    if (!(quadrature_tolerance > 0.0))
        throw ConfigError("quadrature tolerance must be > 0");
}

double sinc(double x) { return 1.0 - one_minus_sinc(x); }

double eval_J(double omega, const BathSpectrum& bath) {
    if (omega >= 0.0) return 0.0;
    return bath.coupling * j_unit(-omega, bath.separation, bath.cutoff);
}

double eval_F(double x, const BathSpectrum& bath) {
    if (!std::isfinite(x)) throw QuadratureFailure("eval_F: non-finite argument");
    if (bath.coupling == 0.0) return 0.0;
    return bath.coupling * F_unit(x, bath.separation, bath.cutoff, unit_tolerance(bath));
}

double eval_Fprime0(const BathSpectrum& bath) {
    if (bath.coupling == 0.0) return 0.0;
    return bath.coupling * Fprime0_unit(bath.separation, bath.cutoff, unit_tolerance(bath));
}

std::complex<double> jhat(Branch sign, double omega, const BathSpectrum& bath) {
    const double s = sign == Branch::Plus ? 1.0 : -1.0;
    return {0.5 * eval_J(omega, bath), 0.5 * s * eval_F(omega, bath)};
}

std::complex<double> bath_correlation(double tau, const BathSpectrum& bath) {
    if (bath.coupling == 0.0) return {0.0, 0.0};
    if (tau == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (tau < 0.0) return std::conj(bath_correlation(-tau, bath));
    return bath.coupling * correlation_unit(tau, bath.separation, bath.cutoff);
}

PiezoSpectrum::PiezoSpectrum(BathSpectrum bath) : bath_(bath) { bath_.validate(); }

double PiezoSpectrum::J(double omega) const { return eval_J(omega, bath_); }

double PiezoSpectrum::F(double x) const {
    const auto key = std::bit_cast<std::uint64_t>(x);
    {
        std::shared_lock lock(mutex_);
        if (auto it = f_cache_.find(key); it != f_cache_.end()) return it->second;
    }
    const double value = eval_F(x, bath_);
    std::unique_lock lock(mutex_);
    f_cache_.emplace(key, value);
    return value;
}

double PiezoSpectrum::Fprime0() const {
    {
        std::shared_lock lock(mutex_);
        if (fprime0_) return *fprime0_;
    }
    const double value = eval_Fprime0(bath_);
    std::unique_lock lock(mutex_);
    fprime0_ = value;
    return value;
}

std::size_t PiezoSpectrum::cache_size() const {
    std::shared_lock lock(mutex_);
    return f_cache_.size();
}

} // namespace dynss
