// test_renorm.cpp — self-consistent (η, Ω) and the near-resonance closed forms

#include <doctest.h>

#include <cmath>

#include "dynss/errors.hpp"
#include "dynss/renorm.hpp"

using namespace dynss;

namespace {

DQDParams at_bias(double bias) {
    DQDParams p;
    p.bias = bias;
    return p;
}

const double kResonance = std::sqrt(1.0 - 0.09);

const PiezoSpectrum& fig_spec() {
    static const PiezoSpectrum s{BathSpectrum{}};
    return s;
}

} // namespace

TEST_CASE("zero coupling returns the bare frame exactly") {
    const PiezoSpectrum zero(BathSpectrum{0.0, 20.0, 2.0, 1e-9});
    for (double e : {0.8, kResonance, 1.1}) {
        const BareFrame bare = bare_frame(at_bias(e));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, zero);
        CHECK(s.frame.detuning == bare.detuning);
        CHECK(s.frame.rabi == bare.rabi);
        const ApproxRenorm a = approx_renorm(bare, zero);
        CHECK(a.eta == bare.detuning);
        CHECK(a.omega == bare.rabi);
    }
}

TEST_CASE("near resonance: detuning grows and Rabi frequency shrinks") {
    for (int k = -2; k <= 2; ++k) {
        const BareFrame bare = bare_frame(at_bias(kResonance + 0.00125 * k));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, fig_spec());
        if (k != 0) CHECK(std::abs(s.frame.detuning) > std::abs(bare.detuning));
        CHECK(std::abs(s.frame.rabi) < std::abs(bare.rabi));
        CHECK(s.frame.rabi * bare.rabi > 0.0);
        CHECK(s.residual_norm <= 1e-10);
        CHECK(s.consistency_gap <= 1e-8 * std::max(1.0, bare.rabi_prime));
    }
}

TEST_CASE("near resonance: Rabi frequency matches the closed form within 5%") {
    for (int k = -2; k <= 2; ++k) {
        const BareFrame bare = bare_frame(at_bias(kResonance + 0.00125 * k));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, fig_spec());
        const ApproxRenorm a = approx_renorm(bare, fig_spec());
        CHECK(std::abs(s.frame.rabi - a.omega) <= 0.05 * std::abs(a.omega));
    }
}

// Known failure: the sideband Lamb shift α₁(α_{1−Ω′}F_{1−Ω′} − …) offsets η by
// about −0.026 at η̃ = 0, which the linear closed form does not carry.
TEST_CASE("near resonance: detuning matches the closed form within 5%" * doctest::should_fail()) {
    for (int k = -2; k <= 2; ++k) {
        const BareFrame bare = bare_frame(at_bias(kResonance + 0.00125 * k));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, fig_spec());
        const ApproxRenorm a = approx_renorm(bare, fig_spec());
        CHECK(std::abs(s.frame.detuning - a.eta) <= 0.05 * std::abs(a.eta) + 1e-12);
    }
}

TEST_CASE("property: slope of eta against bare detuning exceeds one at resonance") {
    const double h = 1e-3;
    const BareFrame lo = bare_frame(at_bias(kResonance - h)), hi = bare_frame(at_bias(kResonance + h));
    const double eta_lo = solve_self_consistent(lo, lo.theta, fig_spec()).frame.detuning;
    const double eta_hi = solve_self_consistent(hi, hi.theta, fig_spec()).frame.detuning;
    CHECK((eta_hi - eta_lo) / (hi.detuning - lo.detuning) > 1.0);
}

TEST_CASE("approx_renorm with a synthetic F'(0)") {
    const SyntheticSpectrum s([](double) { return 0.0; }, [](double) { return 0.0; }, -0.5);
    const BareFrame bare = bare_frame(at_bias(0.97));
    const ApproxRenorm a = approx_renorm(bare, s);
    CHECK(a.eta == doctest::Approx(2.0 * bare.detuning).epsilon(1e-15));
    CHECK(a.omega == doctest::Approx(bare.rabi / 1.5).epsilon(1e-15));

    const SyntheticSpectrum polaron([](double) { return 0.0; }, [](double) { return 0.0; }, -1.0);
    CHECK_THROWS_AS(approx_renorm(bare, polaron), PolaronDivergence);
}

TEST_CASE("error paths") {
    DQDParams p = at_bias(0.97);
    p.drive_amplitude = 0.0;
    const BareFrame undriven = bare_frame(p);
    CHECK_THROWS_AS(solve_self_consistent(undriven, undriven.theta, fig_spec()), UndrivenDegenerate);

    const BareFrame bare = bare_frame(at_bias(0.97));
    RenormOptions opts;
    opts.max_iterations = 1;
    CHECK_THROWS_AS(solve_self_consistent(bare, bare.theta, fig_spec(), opts), NoConvergence);
}

TEST_CASE("property: fixed-point verification") {
    for (double e : {0.75, 0.9, kResonance, 1.05, 1.18}) {
        const BareFrame bare = bare_frame(at_bias(e));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, fig_spec());
        const auto g = renorm_map(bare, bare.theta, fig_spec(), s.frame.detuning, s.frame.rabi);
        CHECK(std::hypot(g[0] - s.frame.detuning, g[1] - s.frame.rabi) <= 1e-10);
    }
}

TEST_CASE("property: warm-started branch is continuous in bias") {
    std::optional<std::array<double, 2>> seed;
    double prev_eta = 0.0, prev_om = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const BareFrame bare = bare_frame(at_bias(0.90 + 0.0025 * i));
        const RenormSolution s = solve_self_consistent(bare, bare.theta, fig_spec(), {}, seed);
        if (seed) {
            CHECK(std::abs(s.frame.detuning - prev_eta) < 0.02);
            CHECK(std::abs(s.frame.rabi - prev_om) < 0.02);
        }
        prev_eta = s.frame.detuning;
        prev_om = s.frame.rabi;
        seed = std::array<double, 2>{prev_eta, prev_om};
    }
}

// Regression: strong coupling near resonance where none of the direct seeds
// converge; the root is reached by continuation in the coupling.
TEST_CASE("renormalization reaches a root no direct seed converges to") {
    DQDParams p;
    p.bias = 0.991575;
    p.drive_amplitude = 0.182343;
    p.tunneling = 0.162309;
    BathSpectrum b;
    b.coupling = 0.373678;
    b.separation = 19.4234;
    b.cutoff = 1.2372;
    const PiezoSpectrum spec(b);
    const BareFrame bare = bare_frame(p);
    const RenormSolution sol = solve_self_consistent(bare, bare.theta, spec, RenormOptions{});
    CHECK(sol.residual_norm <= 1e-10);
    CHECK(sol.frame.detuning == doctest::Approx(0.0366193).epsilon(1e-4));
    CHECK(sol.frame.rabi == doctest::Approx(-0.0784544).epsilon(1e-4));
}
