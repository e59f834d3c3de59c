// test_spectral.cpp — J, F, F′(0), Ĵ±, C(τ) and the adaptive quadrature underneath

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "dynss/errors.hpp"
#include "dynss/quadrature.hpp"
#include "dynss/spectral.hpp"
#include "pv_oracle.hpp"

using namespace dynss;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {
BathSpectrum fig_bath() { return {0.2, 20.0, 2.0, 1e-9}; }
BathSpectrum zero_bath() { return {0.0, 20.0, 2.0, 1e-9}; }
} // namespace

TEST_CASE("quadrature: smooth integrands and Gauss-Legendre exactness") {
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    const std::vector<double> bp{0.0, 0.5, 1.0, 3.0};
    r = quad::integrate([](double x) { return std::exp(-x); }, std::span<const double>(bp));
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-13));

    const auto gl = quad::gauss_legendre(6);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 10);
    CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("quadrature: budget exhaustion raises QuadratureFailure") {
    quad::Options opts;
    opts.abs_tol = 1e-14;
    opts.max_intervals = 8;
    CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, opts),
                    QuadratureFailure);
}

TEST_CASE("eval_J examples") {
    const auto b = fig_bath();
    CHECK(eval_J(1.0, b) == 0.0);
    CHECK(eval_J(0.0, b) == 0.0);
    const double hand = 0.2 * pi * (1.0 - std::sin(-20.0) / -20.0) / 1.25;
    CHECK(eval_J(-1.0, b) == doctest::Approx(hand).epsilon(1e-14));
    CHECK(eval_J(-1.0, b) == doctest::Approx(0.4797).epsilon(1e-4));
}

TEST_CASE("eval_F examples") {
    const auto b = fig_bath();
    CHECK(eval_F(0.0, b) > 0.0);
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0}) CHECK(eval_F(x, zero_bath()) == 0.0);

    const testing::PVOracle oracle;
    const double ref = oracle.F(-0.5);
    CHECK(std::abs(eval_F(-0.5, b) - ref) < 1e-6);
    // Frozen value of the dense-grid oracle at x = −0.5.
    CHECK(std::abs(ref - 0.747626036) < 1e-8);
    CHECK_THROWS_AS(eval_F(std::nan(""), b), QuadratureFailure);
}

TEST_CASE("eval_Fprime0 examples") {
    CHECK(eval_Fprime0(zero_bath()) == 0.0);
    const double fp = eval_Fprime0(fig_bath());
    CHECK(fp < 0.0);
    const double estimate = -0.2 * std::log(40.0);
    CHECK(fp / estimate > 0.5);
    CHECK(fp / estimate < 2.0);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> P(0.01, 1.0), d(2.0, 40.0), wc(0.5, 5.0);
    for (int i = 0; i < 10; ++i) CHECK(eval_Fprime0({P(rng), d(rng), wc(rng), 1e-9}) < 0.0);
}

TEST_CASE("jhat examples") {
    const auto b = fig_bath();
    for (double w : {-1.3, -0.2, 0.4}) {
        const cplx sum = jhat(Branch::Plus, w, b) + jhat(Branch::Minus, w, b);
        CHECK(sum.real() == doctest::Approx(eval_J(w, b)).epsilon(1e-14));
        CHECK(std::abs(sum.imag()) < 1e-15);
    }
    const cplx jp = jhat(Branch::Plus, 1.0, b);
    CHECK(jp.real() == 0.0);
    CHECK(jp.imag() == doctest::Approx(0.5 * eval_F(1.0, b)).epsilon(1e-14));

    const PiezoSpectrum spec(b);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> w(-4.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        const double x = w(rng);
        CHECK(spec.jhat(Branch::Minus, x) == std::conj(spec.jhat(Branch::Plus, x)));
        CHECK(spec.jhat(Branch::Plus, x).real() >= 0.0);
    }
}

TEST_CASE("bath_correlation examples and symmetries") {
    const auto b = fig_bath();
    CHECK(bath_correlation(0.0, zero_bath()) == cplx(0.0, 0.0));
    const cplx c0 = bath_correlation(0.0, b);
    CHECK(c0.imag() == 0.0);
    CHECK(c0.real() > 0.0); // logarithmically divergent, +∞
    for (double t : {0.3, 2.0, 19.5, 21.0, 70.0})
        CHECK(std::abs(bath_correlation(-t, b) - std::conj(bath_correlation(t, b))) < 1e-15);
    CHECK(std::abs(bath_correlation(500.0, b)) < 1e-5);
    CHECK(std::abs(bath_correlation(500.0, b)) < std::abs(bath_correlation(50.0, b)));
}

TEST_CASE("bath_correlation: Fourier inversion recovers J") {
    // 2 Re ∫₀^∞ C(τ) e^{iντ} dτ = J(−ν); product Gauss rule on a truncated grid.
    const auto b = fig_bath();
    const auto gl = quad::gauss_legendre(8);
    const double h = 0.05, T = 1000.0;
    auto transform = [&](double nu) {
        cplx acc = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) { // first panel, τ = h s²
            const double s = 0.5 * (gl.nodes[q] + 1.0);
            const double tau = h * s * s;
            acc += 0.5 * gl.weights[q] * 2.0 * h * s * bath_correlation(tau, b) * std::exp(cplx(0, nu * tau));
        }
        for (int k = 1; k < static_cast<int>(T / h); ++k)
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double tau = (k + 0.5 * (gl.nodes[q] + 1.0)) * h;
                acc += 0.5 * gl.weights[q] * h * bath_correlation(tau, b) * std::exp(cplx(0, nu * tau));
            }
        return 2.0 * acc.real();
    };
    for (double nu : {0.5, 1.0, 1.5}) {
        const double j = eval_J(-nu, b);
        CHECK(std::abs(transform(nu) - j) < 1e-3 * j);
    }
    CHECK(std::abs(transform(-1.0)) < 1e-3 * eval_J(-1.0, b));
}

TEST_CASE("property: support and positivity of J") {
    const auto b = fig_bath();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> w(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = w(rng);
        const double j = eval_J(x, b);
        CHECK(j >= 0.0);
        if (x >= 0.0) CHECK(j == 0.0);
    }
}

TEST_CASE("property: local maxima of J are spaced by 2pi/d") {
    const auto b = fig_bath();
    std::vector<double> peaks;
    const int n = 20000;
    double prev2 = eval_J(-2.0, b), prev1 = eval_J(-2.0 + 1.5 / n, b);
    for (int i = 2; i <= n; ++i) {
        const double w = -2.0 + 1.5 * i / n;
        const double cur = eval_J(w, b);
        if (prev1 > prev2 && prev1 > cur) peaks.push_back(w - 1.5 / n);
        prev2 = prev1;
        prev1 = cur;
    }
    REQUIRE(peaks.size() >= 3);
    for (std::size_t i = 1; i < peaks.size(); ++i)
        CHECK(std::abs((peaks[i] - peaks[i - 1]) - 2.0 * pi / 20.0) < 0.1 * 2.0 * pi / 20.0);
}

TEST_CASE("property: low-frequency suppression") {
    const auto b = fig_bath();
    double last = 1.0;
    for (double w : {-1e-1, -1e-2, -1e-3, -1e-4}) {
        const double r = eval_J(w, b) / std::abs(w);
        CHECK(r < last);
        last = r;
    }
    CHECK(last < 1e-6);
}

TEST_CASE("property: Kramers-Kronig consistency against the dense-grid oracle") {
    const auto b = fig_bath();
    const testing::PVOracle oracle;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = -4.0 + 8.0 * i / 49.0;
        worst = std::max(worst, std::abs(eval_F(x, b) - oracle.F(x)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("property: exact linearity in the coupling") {
    BathSpectrum a = fig_bath(), b2 = fig_bath();
    a.coupling = 0.1;
    b2.coupling = 0.4;
    for (double x : {-2.5, -0.5, 0.0, 0.3, 1.7}) {
        CHECK(eval_J(x, b2) == 4.0 * eval_J(x, a));
        CHECK(eval_F(x, b2) == 4.0 * eval_F(x, a));
    }
    BathSpectrum c = fig_bath();
    c.coupling = 0.3;
    for (double x : {-1.2, 0.0, 0.9})
        CHECK(eval_F(x, c) == doctest::Approx(1.5 * eval_F(x, fig_bath())).epsilon(1e-14));
}

TEST_CASE("property: Richardson-extrapolated finite difference matches F'(0)") {
    const auto b = fig_bath();
    auto fd = [&](double h) { return (eval_F(h, b) - eval_F(-h, b)) / (2.0 * h); };
    const double h = 2e-3;
    const double rich = (4.0 * fd(h / 2) - fd(h)) / 3.0;
    const double fp = eval_Fprime0(b);
    CHECK(std::abs(rich - fp) < 1e-4 * std::abs(fp));
}

TEST_CASE("PiezoSpectrum cache is exact and thread safe") {
    const PiezoSpectrum spec(fig_bath());
    std::vector<double> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(-2.0 + 0.1 * i);
    std::vector<std::vector<double>> results(4);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t)
            pool.emplace_back([&, t] {
                for (double x : xs) results[t].push_back(spec.F(x));
            });
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(results[0][i] == eval_F(xs[i], fig_bath()));
        for (int t = 1; t < 4; ++t) CHECK(results[t][i] == results[0][i]);
    }
    CHECK(spec.cache_size() == xs.size());
    CHECK(spec.Fprime0() == eval_Fprime0(fig_bath()));
}

TEST_CASE("BathSpectrum validation") {
    CHECK_THROWS_AS(PiezoSpectrum(BathSpectrum{-0.1, 20.0, 2.0, 1e-9}), ConfigError);
    CHECK_THROWS_AS(PiezoSpectrum(BathSpectrum{0.2, 0.0, 2.0, 1e-9}), ConfigError);
    CHECK_THROWS_AS(PiezoSpectrum(BathSpectrum{0.2, 20.0, -1.0, 1e-9}), ConfigError);
}
