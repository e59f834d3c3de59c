// test_model.cpp — frames, Floquet coupling tables, dispersive coefficients

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dynss/errors.hpp"
#include "dynss/model.hpp"

using namespace dynss;
using std::numbers::pi;

namespace {

DQDParams resonant() {
    DQDParams p;
    p.bias = std::sqrt(1.0 - 0.09);
    return p;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("bare_frame examples") {
    const BareFrame b = bare_frame(resonant());
    CHECK(b.splitting == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(b.detuning) < 1e-15);
    CHECK(b.theta == doctest::Approx(std::atan2(0.3, 0.95394)).epsilon(1e-5));
    CHECK(b.theta == doctest::Approx(0.30469).epsilon(1e-4));
    CHECK(b.rabi == doctest::Approx(-0.2 * std::cos(b.theta)).epsilon(1e-14));

    DQDParams undriven = resonant();
    undriven.drive_amplitude = 0.0;
    for (double angle : {0.0, 0.4, pi / 2, 2.0}) {
        undriven.drive_angle = angle;
        CHECK(bare_frame(undriven).rabi == 0.0);
    }
}

TEST_CASE("property: bare_frame is continuous across resonance with theta in (0, pi)") {
    DQDParams p = resonant();
    const double e0 = p.bias;
    double prev_theta = 0.0, prev_det = 0.0;
    for (int k = -50; k <= 50; ++k) {
        p.bias = e0 + 1e-4 * k;
        const BareFrame b = bare_frame(p);
        CHECK(b.theta > 0.0);
        CHECK(b.theta < pi);
        if (k > -50) {
            CHECK(std::abs(b.theta - prev_theta) < 1e-3);
            CHECK(std::abs(b.detuning - prev_det) < 2e-4);
        }
        prev_theta = b.theta;
        prev_det = b.detuning;
    }
}

TEST_CASE("coupling_table alpha examples") {
    const double theta = bare_frame(resonant()).theta;
    const DressedFrame onres = make_dressed_frame(0.0, -0.19);
    const CouplingTable t = coupling_table(theta, onres);
    CHECK(std::abs(t.at({0, 0}).norm()) < 1e-15); // α₀ = 0
    CHECK(t.find({1, 1})->alpha == doctest::Approx(-std::sin(theta) / 2).epsilon(1e-14));
    CHECK(t.find({1, -1})->alpha == doctest::Approx(std::sin(theta) / 2).epsilon(1e-14));
    CHECK(t.find({1, 1})->alpha == doctest::Approx(-0.15).epsilon(0.02));

    const CouplingTable t0 = coupling_table(0.0, make_dressed_frame(0.03, -0.19));
    for (FreqLabel l : {FreqLabel{1, 0}, FreqLabel{1, 1}, FreqLabel{1, -1}}) CHECK(t0.find(l)->alpha == 0.0);
    CHECK(t.entries.size() == 9);
}

TEST_CASE("coupling_table rejects colliding frequencies") {
    CHECK_THROWS_AS(coupling_table(0.3, make_dressed_frame(0.0, 0.5)), DegenerateFrequencies);
    CHECK_THROWS_AS(check_distinct_frequencies(1.0), DegenerateFrequencies);
    CHECK_NOTHROW(check_distinct_frequencies(0.2));
}

TEST_CASE("property: adjoint pairing and Fourier completeness") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> th(0.05, pi - 0.05), eta(-0.3, 0.3), om(-0.4, 0.4);
    for (int i = 0; i < 200; ++i) {
        const double theta = th(rng);
        const DressedFrame f = make_dressed_frame(eta(rng), om(rng));
        if (f.rabi_prime < 1e-3 || std::abs(f.rabi_prime - 0.5) < 1e-3) continue;
        const CouplingTable t = coupling_table(theta, f);
        Mat2 sum = Mat2::Zero();
        for (const auto& e : t.entries) {
            CHECK(t.at(-e.label) == e.matrix.adjoint());
            CHECK(e.frequency == e.label.value(f.rabi_prime));
            sum += e.matrix;
        }
        // t = 0: Z_S in the dressed basis, with σ_z = cos θ σ_z^e − sin θ σ_x^e.
        const Mat2 D = dressed_basis(f);
        const Mat2 Z = std::cos(theta) * pauli::sz() - std::sin(theta) * pauli::sx();
        CHECK(max_abs(sum - D.adjoint() * Z * D) < 1e-12);
    }
}

TEST_CASE("dressed basis orders the lower-energy state first") {
    const DressedFrame f = make_dressed_frame(0.05, -0.17);
    const Mat2 HD = -0.5 * (f.detuning * pauli::sz() + f.rabi * pauli::sx());
    const Mat2 D = dressed_basis(f);
    const Mat2 Hd = D.adjoint() * HD * D;
    CHECK(max_abs(Hd - (-0.5 * f.rabi_prime) * pauli::sz()) < 1e-14);
    CHECK(max_abs(D.adjoint() * D - Mat2::Identity()) < 1e-15);
}

TEST_CASE("observable_table examples") {
    const double theta = bare_frame(resonant()).theta;
    const CouplingTable m = observable_table(theta, make_dressed_frame(0.0, -0.19));
    CHECK(max_abs(m.at({0, 0}) - 0.5 * Mat2::Identity()) < 1e-15);
    for (const auto& e : m.entries) CHECK(m.at(-e.label) == e.matrix.adjoint());

    const DressedFrame f = make_dressed_frame(0.04, -0.19);
    const CouplingTable m0 = observable_table(0.0, f);
    const Mat2 expect = 0.5 * (Mat2::Identity() - std::cos(f.angle) * pauli::sz());
    CHECK(max_abs(m0.at({0, 0}) - expect) < 1e-15);
}

TEST_CASE("dispersive_coeffs examples") {
    const BareFrame bare = bare_frame(resonant());
    const DressedFrame f = make_dressed_frame(0.0, -0.115);
    const BathSpectrum zero{0.0, 20.0, 2.0, 1e-9};
    const DispersiveCoeffs dz = dispersive_coeffs(bare.theta, f, bare, zero);
    CHECK(dz.a0 == 0.0);
    CHECK(dz.a_rabi == 0.0);

    const PiezoSpectrum spec(BathSpectrum{});
    for (double x : {0.1, 0.7, 1.3}) CHECK(F_antisym(spec, -x) == -F_antisym(spec, x));

    // η = 0 kills α₀, leaving the sideband pair in a_Ω′.
    const CouplingTable t = coupling_table(bare.theta, f);
    const double W = f.rabi_prime;
    const double a1 = t.find({1, 0})->alpha, am = t.find({1, -1})->alpha, ap = t.find({1, 1})->alpha;
    const double reduced = a1 * (am * F_antisym(spec, 1.0 - W) - ap * F_antisym(spec, 1.0 + W));
    const DispersiveCoeffs d = dispersive_coeffs(bare.theta, f, bare, spec);
    CHECK(d.a_rabi == doctest::Approx(reduced).epsilon(1e-13));

    CHECK(max_abs(d.f_minus - d.f_plus.adjoint()) == 0.0);
    CHECK(max_abs(d.h_minus - d.h_plus.adjoint()) == 0.0);
    CHECK(max_abs(d.f0 - d.f0.adjoint()) < 1e-15);
    CHECK(max_abs(d.h0 - d.h0.adjoint()) < 1e-15);
}

TEST_CASE("property: dispersive_coeffs is linear in the coupling") {
    const BareFrame bare = bare_frame(resonant());
    const DressedFrame f = make_dressed_frame(0.02, -0.12);
    BathSpectrum b1, b3;
    b1.coupling = 0.1;
    b3.coupling = 0.3;
    const auto d1 = dispersive_coeffs(bare.theta, f, bare, b1);
    const auto d3 = dispersive_coeffs(bare.theta, f, bare, b3);
    CHECK(d3.a0 == doctest::Approx(3.0 * d1.a0).epsilon(1e-13));
    CHECK(d3.a_rabi == doctest::Approx(3.0 * d1.a_rabi).epsilon(1e-13));
    CHECK(max_abs(d3.f_plus - 3.0 * d1.f_plus) < 1e-13);
}

TEST_CASE("DQDParams validation") {
    DQDParams p;
    p.tunneling = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
