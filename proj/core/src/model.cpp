// model.cpp — frames, Floquet tables and dispersive coefficients

#include "dynss/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "dynss/errors.hpp"

namespace dynss {

namespace pauli {
Mat2 identity() { return Mat2::Identity(); }
Mat2 sz() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
Mat2 sx() {
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
Mat2 sy() {
    Mat2 m;
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}
Mat2 raising() {
    Mat2 m = Mat2::Zero();
    m(1, 0) = 1.0;
    return m;
}
Mat2 lowering() {
    Mat2 m = Mat2::Zero();
    m(0, 1) = 1.0;
    return m;
}
} // namespace pauli

void DQDParams::validate() const {
    if (!std::isfinite(bias)) throw ConfigError("bias must be finite");
    if (!(tunneling > 0.0) || !std::isfinite(tunneling))
        throw ConfigError("tunneling delta* must be > 0 (got " + std::to_string(tunneling) + ")");
    if (!std::isfinite(drive_angle)) throw ConfigError("drive angle must be finite");
    if (!(drive_amplitude >= 0.0) || !std::isfinite(drive_amplitude))
        throw ConfigError("drive amplitude must be >= 0 (got " + std::to_string(drive_amplitude) + ")");
}

BareFrame bare_frame(const DQDParams& p) {
    p.validate();
    BareFrame b;
    b.theta = std::atan2(p.tunneling, p.bias);
    b.splitting = std::hypot(p.bias, p.tunneling);
    b.detuning = b.splitting - 1.0;
    b.rabi = p.drive_amplitude * std::sin(b.theta - p.drive_angle);
    b.rabi_prime = std::hypot(b.detuning, b.rabi);
    b.angle = std::atan2(b.rabi, b.detuning);
    return b;
}

DressedFrame make_dressed_frame(double eta, double omega) {
    return {eta, omega, std::hypot(eta, omega), std::atan2(omega, eta)};
}

DressedFrame dressed_from_bare(const BareFrame& bare) {
    return make_dressed_frame(bare.detuning, bare.rabi);
}

const TableEntry* CouplingTable::find(FreqLabel label) const {
    for (const auto& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

Mat2 CouplingTable::at(FreqLabel label) const {
    const auto* e = find(label);
    return e ? e->matrix : Mat2::Zero();
}

void check_distinct_frequencies(double rabi_prime, double tol) {
    std::vector<FreqLabel> labels;
    for (int n = -1; n <= 1; ++n)
        for (int m = -1; m <= 1; ++m) labels.push_back({n, m});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const double a = labels[i].value(rabi_prime);
            const double b = labels[j].value(rabi_prime);
            if (std::abs(a - b) < tol) {
                std::ostringstream msg;
                msg << "Floquet labels (" << labels[i].n << "," << labels[i].m << ") and ("
                    << labels[j].n << "," << labels[j].m << ") coincide at Omega'=" << rabi_prime;
                throw DegenerateFrequencies(msg.str());
            }
        }
    }
}

namespace {

struct Alphas {
    double a0, a_rabi, a_sum, a_diff, a_drive; // α₀, α_Ω′, α_{1+Ω′}, α_{1−Ω′}, α₁
};

Alphas alphas(double theta, const DressedFrame& f) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(f.angle), sp = std::sin(f.angle);
    return {ct * cp, -ct * sp, -st * (1.0 + cp) / 2.0, st * (1.0 - cp) / 2.0, -st * sp / 2.0};
}

void push_pair(CouplingTable& t, FreqLabel label, double alpha, const Mat2& m) {
    t.entries.push_back({label, label.value(t.rabi_prime), alpha, m});
    t.entries.push_back({-label, (-label).value(t.rabi_prime), alpha, m.adjoint()});
}

} // namespace

CouplingTable coupling_table(double theta, const DressedFrame& frame) {
    check_distinct_frequencies(frame.rabi_prime);
    const Alphas a = alphas(theta, frame);
    CouplingTable t;
    t.rabi_prime = frame.rabi_prime;
    t.entries.push_back({{0, 0}, 0.0, a.a0, a.a0 * pauli::sz()});
    push_pair(t, {0, 1}, a.a_rabi, a.a_rabi * pauli::raising());
    push_pair(t, {1, 1}, a.a_sum, a.a_sum * pauli::raising());
    push_pair(t, {1, -1}, a.a_diff, a.a_diff * pauli::lowering());
    push_pair(t, {1, 0}, a.a_drive, a.a_drive * pauli::sz());
    return t;
}

CouplingTable observable_table(double theta, const DressedFrame& frame) {
    CouplingTable t = coupling_table(theta, frame);
    for (auto& e : t.entries) {
        if (e.label == FreqLabel{0, 0})
            e.matrix = 0.5 * (pauli::identity() - e.matrix);
        else
            e.matrix = -0.5 * e.matrix;
    }
    return t;
}

double DispersiveCoeffs::consistency_gap() const {
    return std::max({(h0 - f0).norm(), (h_plus - f_plus).norm(), (h_minus - f_minus).norm()});
}

double F_antisym(const SpectralDensity& spec, double x) { return spec.F(x) - spec.F(-x); }

std::array<double, 2> dispersive_pair(double theta, const DressedFrame& frame,
                                      const SpectralDensity& spec) {
    if (spec.vanishing()) return {0.0, 0.0};
    const Alphas a = alphas(theta, frame);
    const double W = frame.rabi_prime;
    const double Fd = F_antisym(spec, 1.0 - W);
    const double Fs = F_antisym(spec, 1.0 + W);
    const double Fr = F_antisym(spec, W);
    const double a0 = 0.5 * (-a.a_diff * a.a_diff * Fd + a.a_sum * a.a_sum * Fs + a.a_rabi * a.a_rabi * Fr);
    const double ar = a.a_drive * (a.a_diff * Fd - a.a_sum * Fs) - a.a0 * a.a_rabi * Fr;
    return {a0, ar};
}

DispersiveCoeffs dispersive_coeffs(double theta, const DressedFrame& frame, const BareFrame& bare,
                                   const SpectralDensity& spec) {
    check_distinct_frequencies(frame.rabi_prime);
    const auto [a0, ar] = dispersive_pair(theta, frame, spec);
    DispersiveCoeffs d;
    d.a0 = a0;
    d.a_rabi = ar;
    d.f0 = 0.5 * a0 * pauli::sz();
    d.f_plus = 0.5 * ar * pauli::raising();
    d.f_minus = d.f_plus.adjoint();

    const double dphi = bare.angle - frame.angle;
    d.h0 = -0.5 * (bare.rabi_prime * std::cos(dphi) - frame.rabi_prime) * pauli::sz();
    d.h_plus = -0.5 * bare.rabi_prime * std::sin(dphi) * pauli::raising();
    d.h_minus = d.h_plus.adjoint();
    return d;
}

DispersiveCoeffs dispersive_coeffs(double theta, const DressedFrame& frame, const BareFrame& bare,
                                   const BathSpectrum& bath) {
    return dispersive_coeffs(theta, frame, bare, PiezoSpectrum(bath));
}

Mat2 dressed_basis(const DressedFrame& frame) {
    const double c = std::cos(0.5 * frame.angle), s = std::sin(0.5 * frame.angle);
    Mat2 u;
    u << c, -s, s, c;
    return u;
}

} // namespace dynss
