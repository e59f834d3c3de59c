// oracle.cpp — TC2 integro-differential propagation and time averaging

#include "dynss/oracle.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dynss/errors.hpp"
#include "dynss/quadrature.hpp"

namespace dynss {
namespace {

using std::numbers::pi;
const cplx I(0.0, 1.0);

// Hat-function weights: L_k pairs C on [kΔ, (k+1)Δ] with the left hat,
// R_{k+1} with the right one. The first panel is mapped τ = Δs² to absorb
// the logarithmic singularity of C at τ = 0.
void history_weights(const BathSpectrum& bath, double dt, int n, std::vector<cplx>& L,
                     std::vector<cplx>& R) {
    L.assign(n + 1, 0.0);
    R.assign(n + 1, 0.0);
    const auto gl = quad::gauss_legendre(24);
    for (int k = 0; k < n; ++k) {
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double s = 0.5 * (gl.nodes[q] + 1.0);
            const double ws = 0.5 * gl.weights[q];
            double tau, jac;
            if (k == 0) {
                tau = dt * s * s;
                jac = 2.0 * dt * s;
            } else {
                tau = (k + s) * dt;
                jac = dt;
            }
            const cplx c = bath_correlation(tau, bath);
            const double x = tau / dt - k;
            L[k] += ws * jac * c * (1.0 - x);
            R[k + 1] += ws * jac * c * x;
        }
    }
}

struct Frames {
    Mat2 z_lab;     // σ_z in the σ_z^e eigenbasis
    Mat2 h_resid;   // H_R − H_D (rotating frame, time independent)
    Eigen::Vector2d ev;
    Mat2 evec;

    // U_D(t) = exp(−i H_D t)
    Mat2 u_dressed(double t) const {
        Eigen::Vector2cd ph(std::exp(-I * ev[0] * t), std::exp(-I * ev[1] * t));
        return evec * ph.asDiagonal() * evec.adjoint();
    }
    // Z in the rotating frame at time t: U_R† Z U_R, U_R = diag(e^{it/2}, e^{−it/2}).
    Mat2 z_rot(double t) const {
        const Eigen::Vector2cd ph(std::exp(I * t * 0.5), std::exp(-I * t * 0.5));
        return ph.conjugate().asDiagonal() * z_lab * ph.asDiagonal();
    }
    struct Ops {
        Mat2 z, h, m;
    };
    Ops at(double t) const {
        const Mat2 u = u_dressed(t);
        const Mat2 zr = z_rot(t);
        return {u.adjoint() * zr * u, u.adjoint() * h_resid * u,
                0.5 * u.adjoint() * (Mat2::Identity() - zr) * u};
    }
};

Frames make_frames(const BareFrame& bare, double theta, const DressedFrame& frame) {
    Frames f;
    f.z_lab = std::cos(theta) * pauli::sz() - std::sin(theta) * pauli::sx();
    const Mat2 hr = -0.5 * (bare.detuning * pauli::sz() + bare.rabi * pauli::sx());
    const Mat2 hd = -0.5 * (frame.detuning * pauli::sz() + frame.rabi * pauli::sx());
    f.h_resid = hr - hd;
    Eigen::SelfAdjointEigenSolver<Mat2> es(hd);
    f.ev = es.eigenvalues();
    f.evec = es.eigenvectors();
    return f;
}

int average_samples(const Trajectory& traj, const TrajectoryConfig& cfg) {
    const double step = traj.dt * traj.stride;
    double span = cfg.average_window;
    if (traj.frame.rabi_prime > 0.0) {
        const double period = 2.0 * pi / traj.frame.rabi_prime;
        const double periods = std::floor(cfg.average_window / period);
        if (periods < 1.0) throw ConfigError("average window shorter than one Rabi period");
        span = periods * period;
    }
    return static_cast<int>(std::lround(span / step));
}

double window_mean(const std::vector<double>& v, std::size_t begin, std::size_t count) {
    double s = 0.0;
    for (std::size_t i = begin; i < begin + count; ++i) s += v[i];
    return s / static_cast<double>(count);
}

// Box average over one drive period 2π, evaluated at every sample from the
// cumulative trapezoid integral. Removes the ω₀ component of the lab-frame
// observable, which otherwise leaks into a window cut to whole Rabi periods.
std::vector<double> drive_filtered(const std::vector<double>& v, double step) {
    const double period = 2.0 * pi;
    std::vector<double> cum(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) cum[i] = cum[i - 1] + 0.5 * step * (v[i] + v[i - 1]);
    std::vector<double> out;
    const double lag = period / step;
    const auto first = static_cast<std::size_t>(std::ceil(lag));
    for (std::size_t i = first; i < v.size(); ++i) {
        const double x = static_cast<double>(i) - lag;
        const auto j = static_cast<std::size_t>(std::floor(x));
        const double f = x - static_cast<double>(j);
        const double c = j + 1 < v.size() ? (1.0 - f) * cum[j] + f * cum[j + 1] : cum[j];
        out.push_back((cum[i] - c) / period);
    }
    return out;
}

double settled_mean(const std::vector<double>& raw, double step, int nav, const TrajectoryConfig& cfg) {
    const std::vector<double> series = drive_filtered(raw, step);
    const auto n = static_cast<std::size_t>(nav);
    if (nav < 1 || series.size() < 2 * n)
        throw NotSettled("trajectory shorter than two averaging windows");
    const double last = window_mean(series, series.size() - n, n);
    const double prev = window_mean(series, series.size() - 2 * n, n);
    if (std::abs(last - prev) > cfg.settle_tolerance) {
        std::ostringstream msg;
        msg << "running average drifted by " << std::abs(last - prev) << " over the last window (limit "
            << cfg.settle_tolerance << ")";
        throw NotSettled(msg.str());
    }
    return last;
}

} // namespace

double kernel_window_for(const BathSpectrum& bath, double dt, double ratio) {
    if (bath.coupling == 0.0) return dt;
    const double target = ratio * std::abs(bath_correlation(dt, bath));
    // |C(τ)| ≈ P/(2τ²) asymptotically; scan comfortably past that estimate.
    const double est = std::sqrt(bath.coupling / (2.0 * target));
    const int kmax = static_cast<int>(std::ceil(2.0 * est / dt)) + 1;
    int last = 1;
    for (int k = 1; k <= kmax; ++k)
        if (std::abs(bath_correlation(k * dt, bath)) >= target) last = k;
    return (last + 1) * dt;
}

void TrajectoryConfig::validate(double bare_rabi_prime, const BathSpectrum& bath) const {
    if (!(dt > 0.0) || !(t_max > dt)) throw ConfigError("oracle needs 0 < dt < t_max");
    double dt_max = 0.02 * 2.0 * pi;
    if (bare_rabi_prime > 0.0) dt_max = std::min(dt_max, 0.02 / bare_rabi_prime);
    if (dt > dt_max) {
        std::ostringstream msg;
        msg << "oracle dt=" << dt << " exceeds " << dt_max;
        throw ConfigError(msg.str());
    }
    if (kernel_window < 0.0) throw ConfigError("kernel window must be >= 0");
    if (kernel_window > 0.0 && bath.coupling > 0.0) {
        const double ref = std::abs(bath_correlation(dt, bath));
        if (std::abs(bath_correlation(kernel_window, bath)) >= 1e-6 * ref) {
            std::ostringstream msg;
            msg << "kernel window " << kernel_window << " too short: need at least "
                << kernel_window_for(bath, dt);
            throw ConfigError(msg.str());
        }
    }
    if (!(average_window > 0.0)) throw ConfigError("average window must be > 0");
    if (sample_stride < 1) throw ConfigError("sample stride must be >= 1");
}

Trajectory propagate_tc2(const BareFrame& bare, double theta, const DressedFrame& frame,
                         const BathSpectrum& bath, const TrajectoryConfig& cfg, InitialState init) {
    bath.validate();
    cfg.validate(bare.rabi_prime, bath);
    const double dt = cfg.dt;
    const double window = cfg.kernel_window > 0.0 ? cfg.kernel_window : kernel_window_for(bath, dt);
    const bool coupled = bath.coupling > 0.0;
    const int n = coupled ? std::max(1, static_cast<int>(std::lround(window / dt))) : 0;
    const int steps = static_cast<int>(std::lround(cfg.t_max / dt));

    std::vector<cplx> L, R;
    if (coupled) history_weights(bath, dt, n, L, R);

    const Frames fr = make_frames(bare, theta, frame);
    Mat2 rho;
    if (init == InitialState::DressedGround)
        rho = fr.evec.col(0) * fr.evec.col(0).adjoint();
    else
        rho = 0.5 * Mat2::Identity();

    // A_k = Z(t_k) ρ(t_k) on the step grid.
    std::vector<Mat2> A(static_cast<std::size_t>(steps) + 1);

    // Part of Q(t_m) that does not involve A_m.
    auto history = [&](int m) -> Mat2 {
        Mat2 q = Mat2::Zero();
        if (!coupled || m == 0) return q;
        const int kmax = std::min(m, n);
        for (int k = 1; k < kmax; ++k) q += (L[k] + R[k]) * A[m - k];
        q += R[kmax] * A[m - kmax];
        return q;
    };

    Trajectory traj;
    traj.dt = dt;
    traj.stride = cfg.sample_stride;
    traj.frame = frame;
    traj.theta = theta;

    auto record = [&](int m, const Mat2& r, const Mat2& mop) {
        traj.max_trace_error = std::max(traj.max_trace_error, std::abs(r.trace() - 1.0));
        traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, (r - r.adjoint()).norm());
        if (m % cfg.sample_stride != 0) return;
        traj.times.push_back(m * dt);
        traj.rho.push_back(r);
        traj.observable.push_back((mop * r).trace().real());
    };

    Frames::Ops ops0 = fr.at(0.0);
    A[0] = ops0.z * rho;
    Mat2 q_now = coupled ? Mat2(L[0] * A[0]) : Mat2::Zero();
    Mat2 q_prev = q_now;
    record(0, rho, ops0.m);

    auto rhs = [&](const Frames::Ops& o, const Mat2& r, const Mat2& q) -> Mat2 {
        const Mat2 s = q - q.adjoint();
        return -I * (o.h * r - r * o.h) - (o.z * s - s * o.z);
    };

    for (int m = 0; m < steps; ++m) {
        const double t = m * dt;
        const Frames::Ops o0 = m == 0 ? ops0 : fr.at(t);
        const Frames::Ops oh = fr.at(t + 0.5 * dt);
        const Frames::Ops o1 = fr.at(t + dt);

        // RK4 with the memory term interpolated linearly across the step.
        auto step = [&](const Mat2& qa, const Mat2& qb) -> Mat2 {
            const Mat2 qm = 0.5 * (qa + qb);
            const Mat2 k1 = rhs(o0, rho, qa);
            const Mat2 k2 = rhs(oh, rho + 0.5 * dt * k1, qm);
            const Mat2 k3 = rhs(oh, rho + 0.5 * dt * k2, qm);
            const Mat2 k4 = rhs(o1, rho + dt * k3, qb);
            return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        };

        const Mat2 hist = history(m + 1);
        Mat2 next = step(q_now, 2.0 * q_now - q_prev);
        if (cfg.predictor_corrector && coupled) {
            const Mat2 q_pred = hist + L[0] * (o1.z * next);
            next = step(q_now, q_pred);
        }
        rho = next;
        A[m + 1] = o1.z * rho;
        q_prev = q_now;
        q_now = coupled ? Mat2(hist + L[0] * A[m + 1]) : Mat2::Zero();
        record(m + 1, rho, o1.m);
    }
    return traj;
}

double time_average_observable(const Trajectory& traj, const TrajectoryConfig& cfg) {
    return settled_mean(traj.observable, traj.dt * traj.stride, average_samples(traj, cfg), cfg);
}

double time_average_observable(const Trajectory& traj, const CouplingTable& obs,
                               const TrajectoryConfig& cfg) {
    const Mat2 d = dressed_basis(traj.frame);
    std::vector<double> series;
    series.reserve(traj.rho.size());
    for (std::size_t i = 0; i < traj.rho.size(); ++i) {
        const double t = traj.times[i];
        const Mat2 rd = d.adjoint() * traj.rho[i] * d;
        Mat2 m = Mat2::Zero();
        for (const auto& e : obs.entries) m += e.matrix * std::exp(I * e.frequency * t);
        series.push_back((m * rd).trace().real());
    }
    return settled_mean(series, traj.dt * traj.stride, average_samples(traj, cfg), cfg);
}

OracleResult run_oracle(const BareFrame& bare, double theta, const DressedFrame& frame,
                        const BathSpectrum& bath, TrajectoryConfig cfg, double step_tol,
                        InitialState init) {
    // The coarse step has the smaller reference |C(dt)| and so needs the longer window.
    // Sharing it keeps the two runs on the same history truncation.
    if (cfg.kernel_window <= 0.0) cfg.kernel_window = kernel_window_for(bath, cfg.dt);
    OracleResult out;
    out.kernel_window = cfg.kernel_window;
    out.value = time_average_observable(propagate_tc2(bare, theta, frame, bath, cfg, init), cfg);

    TrajectoryConfig half = cfg;
    half.dt = 0.5 * cfg.dt;
    half.sample_stride = 2 * cfg.sample_stride;
    out.value_half = time_average_observable(propagate_tc2(bare, theta, frame, bath, half, init), half);
    out.step_change = std::abs(out.value - out.value_half);
    if (out.step_change > step_tol) {
        std::ostringstream msg;
        msg << "halving dt moved the time average by " << out.step_change << " (limit " << step_tol << ")";
        throw StepTooCoarse(msg.str());
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,rho00,rho11,re_rho01,im_rho01,observable\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Mat2& r = traj.rho[i];
        os << traj.times[i] << ',' << r(0, 0).real() << ',' << r(1, 1).real() << ',' << r(0, 1).real()
           << ',' << r(0, 1).imag() << ',' << traj.observable[i] << '\n';
    }
}

} // namespace dynss
