// checks.cpp — invariant measurements for a single bias point

#include "dynss/checks.hpp"

#include <cmath>

#include "dynss/errors.hpp"
#include "dynss/poles.hpp"
#include "dynss/renorm.hpp"

namespace dynss {

std::vector<InvariantResult> check_point(double bias, const SweepConfig& cfg, const SpectralDensity& spec) {
    std::vector<InvariantResult> out;
    auto add = [&](std::string name, double value, double limit) {
        out.push_back({std::move(name), value, limit, std::isfinite(value) && value <= limit});
    };

    DQDParams p = cfg.dqd;
    p.bias = bias;
    const BareFrame bare = bare_frame(p);
    RenormOptions opts;
    opts.tol = cfg.tol;
    const RenormSolution sol = solve_self_consistent(bare, bare.theta, spec, opts);
    add("renorm_residual", sol.residual_norm, cfg.tol);
    add("consistency_gap", sol.consistency_gap, 1e-8 * std::max(1.0, bare.rabi_prime));

    const CouplingTable table = coupling_table(bare.theta, sol.frame);
    const DispersiveCoeffs disp = dispersive_coeffs(bare.theta, sol.frame, bare, spec);
    const ResidueSystem sys = assemble_system(table, disp, sol.frame, spec);
    add("kernel_dimension_minus_1", std::abs(sys.kernel_dimension - 1.0), 0.0);
    add("assembly_trace_defect", sys.trace_defect, 1e-12);

    SolveDiagnostics diag;
    const ResidueSet res = solve_residues(sys, &diag);
    add("trace_rho0_minus_1", std::abs(res.at({0, 0}).trace() - 1.0), 1e-12);
    add("dynamic_trace", diag.dynamic_trace, 1e-10);
    add("hermiticity_defect", diag.hermiticity_defect, 1e-8);
    add("system_residual", diag.residual, 1e-8);

    const cplx m = observable_sum(res, observable_table(bare.theta, sol.frame));
    add("observable_imag", std::abs(m.imag()), 1e-10);
    add("observable_below_0", std::max(0.0, -m.real()), 1e-6);
    add("observable_above_1", std::max(0.0, m.real() - 1.0), 1e-6);
    return out;
}

} // namespace dynss
