// renorm.cpp — damped fixed point with a finite-difference Newton fallback

#include "dynss/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "dynss/errors.hpp"

namespace dynss {
namespace {

using Vec2 = Eigen::Vector2d;

struct Attempt {
    bool ok{false};
    Vec2 x;
    double residual{0.0};
    int iterations{0};
    bool newton{false};
    std::string why;
};

Vec2 residual(const BareFrame& bare, double theta, const SpectralDensity& spec, const Vec2& x) {
    const auto g = renorm_map(bare, theta, spec, x[0], x[1]);
    return Vec2(g[0], g[1]) - x;
}

bool same_sign(double a, double b) { return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0); }

Attempt newton(const BareFrame& bare, double theta, const SpectralDensity& spec,
               const RenormOptions& opts, Vec2 x, int used) {
    Attempt out;
    out.newton = true;
    Vec2 r = residual(bare, theta, spec, x);
    for (int it = used; it < opts.max_iterations; ++it) {
        const double rn = r.norm();
        if (rn <= opts.tol) {
            out.ok = true;
            out.x = x;
            out.residual = rn;
            out.iterations = it;
            return out;
        }
        Eigen::Matrix2d jac;
        for (int k = 0; k < 2; ++k) {
            Vec2 xp = x;
            xp[k] += opts.fd_step;
            jac.col(k) = (residual(bare, theta, spec, xp) - r) / opts.fd_step;
        }
        const Vec2 step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) break;

        // Backtrack on the residual norm; keep Ω on the side of the drive.
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 20; ++ls, lambda *= 0.5) {
            const Vec2 trial = x + lambda * step;
            if (!same_sign(trial[1], bare.rabi)) continue;
            const Vec2 rt = residual(bare, theta, spec, trial);
            if (rt.norm() < rn || rt.norm() <= opts.tol) {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.why = "newton line search failed";
            out.x = x;
            out.residual = rn;
            out.iterations = it;
            return out;
        }
    }
    out.why = "iteration budget exhausted in newton";
    out.x = x;
    out.residual = r.norm();
    out.iterations = opts.max_iterations;
    out.ok = out.residual <= opts.tol;
    return out;
}

// Damped fixed point. Hands over to Newton once the contraction is slower than
// a factor 0.5 per step (the damped map contracts slowly near resonance).
Attempt iterate(const BareFrame& bare, double theta, const SpectralDensity& spec,
                const RenormOptions& opts, Vec2 x) {
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iterations; ++it) {
        const auto g = renorm_map(bare, theta, spec, x[0], x[1]);
        const Vec2 gx(g[0], g[1]);
        const double rn = (gx - x).norm();
        if (!std::isfinite(rn)) return {false, x, rn, it, false, "non-finite residual"};
        if (rn <= opts.tol) return {true, x, rn, it, false, {}};
        if (it >= 3 && rn > 0.5 * prev) return newton(bare, theta, spec, opts, x, it);
        prev = rn;
        x = (1.0 - opts.damping) * x + opts.damping * gx;
    }
    return {false, x, prev, opts.max_iterations, false, "iteration budget exhausted"};
}

// The bath scaled by s. G is linear in F, so s = 0 is the bare frame and the
// root can be followed from there when no direct seed reaches it.
class ScaledSpectrum final : public SpectralDensity {
public:
    ScaledSpectrum(const SpectralDensity& base, double s) : base_(base), s_(s) {}
    double J(double omega) const override { return s_ * base_.J(omega); }
    double F(double x) const override { return s_ * base_.F(x); }
    double Fprime0() const override { return s_ * base_.Fprime0(); }
    bool vanishing() const override { return s_ == 0.0 || base_.vanishing(); }

private:
    const SpectralDensity& base_;
    double s_;
};

// Continuation in the coupling strength, halving the increment on failure.
Attempt continuation(const BareFrame& bare, double theta, const SpectralDensity& spec,
                     const RenormOptions& opts) {
    Vec2 x(bare.detuning, bare.rabi);
    double s = 0.0, ds = 0.125;
    int total = 0;
    while (s < 1.0) {
        const double next = std::min(1.0, s + ds);
        const ScaledSpectrum scaled(spec, next);
        Attempt a;
        try {
            a = iterate(bare, theta, scaled, opts, x);
        } catch (const DegenerateFrequencies& e) {
            a.why = e.what(); // an intermediate path crossed a collision
        }
        total += a.iterations;
        if (a.ok && same_sign(a.x[1], bare.rabi)) {
            x = a.x;
            s = next;
            ds = std::min(2.0 * ds, 0.25);
            continue;
        }
        ds *= 0.5;
        if (ds < 1.0 / 1024) {
            std::ostringstream msg;
            msg << "continuation stalled at coupling fraction " << s << " (" << a.why << ")";
            return {false, x, a.residual, total, true, msg.str()};
        }
    }
    const double rn = residual(bare, theta, spec, x).norm();
    return {rn <= opts.tol, x, rn, total, true, rn <= opts.tol ? std::string{} : "continuation endpoint off tolerance"};
}

} // namespace

std::array<double, 2> renorm_map(const BareFrame& bare, double theta, const SpectralDensity& spec,
                                 double eta, double omega) {
    const DressedFrame f = make_dressed_frame(eta, omega);
    const auto [a0, ar] = dispersive_pair(theta, f, spec);
    const double c = std::cos(f.angle), s = std::sin(f.angle);
    return {bare.detuning + a0 * c - ar * s, bare.rabi + a0 * s + ar * c};
}

RenormSolution solve_self_consistent(const BareFrame& bare, double theta, const SpectralDensity& spec,
                                     const RenormOptions& opts,
                                     std::optional<std::array<double, 2>> seed) {
    if (spec.vanishing()) {
        RenormSolution sol;
        sol.frame = make_dressed_frame(bare.detuning, bare.rabi);
        return sol;
    }
    if (bare.rabi == 0.0)
        throw UndrivenDegenerate("bare Rabi frequency is zero with a non-vanishing bath");

    const ApproxRenorm approx = approx_renorm(bare, spec);
    std::vector<Vec2> seeds;
    if (seed) seeds.emplace_back((*seed)[0], (*seed)[1]);
    seeds.emplace_back(bare.detuning, approx.omega);
    seeds.emplace_back(approx.eta, approx.omega);
    seeds.emplace_back(bare.detuning, bare.rabi);

    std::vector<Attempt> found;
    std::ostringstream why;
    for (const auto& s : seeds) {
        Attempt a = iterate(bare, theta, spec, opts, s);
        if (a.ok && !same_sign(a.x[1], bare.rabi)) {
            a.ok = false;
            a.why = "root has Omega of opposite sign to the bare drive";
        }
        if (a.ok) {
            found.push_back(a);
            if (!opts.explore_seeds) break; // remaining seeds are only fallbacks
            continue;
        }
        why << " [seed (" << s[0] << "," << s[1] << "): " << a.why << ", residual " << a.residual << "]";
    }
    if (found.empty()) {
        Attempt a = continuation(bare, theta, spec, opts);
        if (a.ok) found.push_back(a);
        else why << " [continuation in the coupling: " << a.why << ", residual " << a.residual << "]";
    }
    if (found.empty()) throw NoConvergence("self-consistent renormalization failed:" + why.str());

    // The first accepted seed is the warm start (or the default seed), so it is
    // the root continuous with the previous bias point.
    const Attempt& best = found.front();
    RenormSolution sol;
    for (std::size_t i = 1; i < found.size(); ++i)
        if ((found[i].x - best.x).norm() > 1e-6)
            sol.alternatives.push_back(make_dressed_frame(found[i].x[0], found[i].x[1]));
    sol.frame = make_dressed_frame(best.x[0], best.x[1]);
    sol.residual_norm = best.residual;
    sol.iterations = best.iterations;
    sol.newton = best.newton;
    sol.consistency_gap = dispersive_coeffs(theta, sol.frame, bare, spec).consistency_gap();
    return sol;
}

RenormSolution solve_self_consistent(const BareFrame& bare, double theta, const BathSpectrum& bath,
                                     double tol) {
    RenormOptions opts;
    opts.tol = tol;
    return solve_self_consistent(bare, theta, PiezoSpectrum(bath), opts);
}

ApproxRenorm approx_renorm(const BareFrame& bare, const SpectralDensity& spec) {
    const double fp = spec.vanishing() ? 0.0 : spec.Fprime0();
    if (std::abs(1.0 + fp) < 1e-6) {
        std::ostringstream msg;
        msg << "|1 + F'(0)| = " << std::abs(1.0 + fp) << " is below 1e-6";
        throw PolaronDivergence(msg.str());
    }
    return {bare.detuning / (1.0 + fp), bare.rabi / (1.0 - fp)};
}

ApproxRenorm approx_renorm(const BareFrame& bare, const BathSpectrum& bath) {
    return approx_renorm(bare, PiezoSpectrum(bath));
}

} // namespace dynss
