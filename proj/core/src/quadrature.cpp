// quadrature.cpp — Gauss–Kronrod 7/15 rule with global bisection

#include "dynss/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dynss/errors.hpp"

namespace dynss::quad {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    resk *= h;
    resg *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err};
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts) {
    const std::array<double, 2> bp{a, b};
    return integrate(f, std::span<const double>(bp), opts);
}

Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& opts) {
    if (breakpoints.size() < 2) throw QuadratureFailure("quad::integrate: need at least two breakpoints");

    std::priority_queue<Segment> heap;
    Result out;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        Segment s = gk15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    auto resum = [&] {
        auto copy = heap;
        total = 0.0;
        total_err = 0.0;
        while (!copy.empty()) {
            total += copy.top().value;
            total_err += copy.top().error;
            copy.pop();
        }
    };

    while (total_err > opts.abs_tol) {
        if (static_cast<int>(heap.size()) >= opts.max_intervals || heap.empty()) {
            throw QuadratureFailure("quad::integrate: error estimate " + std::to_string(total_err) +
                                    " above tolerance " + std::to_string(opts.abs_tol) +
                                    " after " + std::to_string(heap.size()) + " intervals");
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            throw QuadratureFailure("quad::integrate: interval collapsed to machine precision");
        }
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // Running totals drift under cancellation; re-sum now and then.
        if (out.evaluations % 3000 == 0) resum();
    }
    resum();

    out.value = total;
    out.abs_error = total_err;
    out.intervals = static_cast<int>(heap.size());
    return out;
}

Rule gauss_legendre(int n) {
    if (n < 1) throw QuadratureFailure("gauss_legendre: need at least one node");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    Rule r;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(es.eigenvalues()[i]);
        const double v = es.eigenvectors()(0, i);
        r.weights.push_back(2.0 * v * v);
    }
    return r;
}

} // namespace dynss::quad
