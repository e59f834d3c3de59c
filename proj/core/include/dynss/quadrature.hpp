// quadrature.hpp — Globally adaptive Gauss–Kronrod (7/15) integration

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dynss::quad {

struct Result {
    double value{0.0};
    double abs_error{0.0};
    int evaluations{0};
    int intervals{0};
};

struct Options {
    double abs_tol{1e-10};
    int max_intervals{4000};
};

// Integrates f over [a, b]. Bisects the interval with the largest error estimate
// until the summed estimate drops below abs_tol. Throws QuadratureFailure when
// the interval budget is exhausted first.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

// Same, but seeded with the panels between consecutive breakpoints (sorted,
// at least two entries). Useful for oscillatory integrands.
Result integrate(const std::function<double(double)>& f,
                 std::span<const double> breakpoints,
                 const Options& opts = {});

struct Rule {
    std::vector<double> nodes;   // on [−1, 1]
    std::vector<double> weights;
};

// n-point Gauss–Legendre rule (Golub–Welsch).
Rule gauss_legendre(int n);

} // namespace dynss::quad
