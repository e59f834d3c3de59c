// poles.cpp — residue system assembly, nullspace solve and Lindblad baseline

#include "dynss/poles.hpp"

#include <cmath>
#include <sstream>

#include "dynss/errors.hpp"

namespace dynss {
namespace {

Mat2 basis(int b) {
    Mat2 e = Mat2::Zero();
    e(b / 2, b % 2) = 1.0;
    return e;
}

Mat2 dressing_term(const DispersiveCoeffs& d, int dm, Dressing mode) {
    const bool cancel = mode == Dressing::Cancelled;
    switch (dm) {
    case 0: return cancel ? d.f0 : d.h0;
    case 1: return cancel ? d.f_plus : d.h_plus;
    case -1: return cancel ? d.f_minus : d.h_minus;
    default: return Mat2::Zero(); // no ±2Ω′ component in H_S
    }
}

int kernel_count(const Eigen::VectorXd& sv) {
    const double cut = 1e-10 * sv.maxCoeff();
    int k = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] < cut) ++k;
    return k;
}

} // namespace

std::vector<CouplingPair> coupling_pairs(const CouplingTable& table, FreqLabel nu, FreqLabel nu_prime) {
    std::vector<CouplingPair> out;
    for (const auto& e : table.entries) {
        const FreqLabel wp{e.label.n + nu.n - nu_prime.n, e.label.m + nu.m - nu_prime.m};
        if (table.find(wp)) out.push_back({e.label, wp});
    }
    return out;
}

std::vector<FreqLabel> default_poles() { return {{0, 0}, {0, 1}, {0, -1}}; }

Mat2 ResidueSet::at(FreqLabel label) const {
    for (std::size_t i = 0; i < poles.size(); ++i)
        if (poles[i] == label) return residues[i];
    return Mat2::Zero();
}

Eigen::Vector4cd vec(const Mat2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

Mat2 unvec(const Eigen::Ref<const Eigen::VectorXcd>& v) {
    Mat2 m;
    m << v[0], v[1], v[2], v[3];
    return m;
}

ResidueSystem assemble_system(const CouplingTable& table, const DispersiveCoeffs& disp,
                              const DressedFrame& frame, const SpectralDensity& spec,
                              const std::vector<FreqLabel>& poles, Dressing dressing) {
    const double W = frame.rabi_prime;
    if (std::abs(W - 0.5) < 1e-6 || std::abs(W - 1.0) < 1e-6) {
        std::ostringstream msg;
        msg << "Omega'=" << W << " is within 1e-6 of a label collision (1/2 or 1)";
        throw DegenerateFrequencies(msg.str());
    }
    check_distinct_frequencies(W);

    const int nv = static_cast<int>(poles.size());
    ResidueSystem sys;
    sys.poles = poles;
    sys.rabi_prime = W;
    sys.matrix = Eigen::MatrixXcd::Zero(4 * nv, 4 * nv);
    Eigen::MatrixXcd coupling = Eigen::MatrixXcd::Zero(4 * nv, 4 * nv);
    const cplx I(0.0, 1.0);

    for (int ip = 0; ip < nv; ++ip) {
        const FreqLabel nup = poles[ip];
        const double nup_w = nup.value(W);
        for (int i = 0; i < nv; ++i) {
            const FreqLabel nu = poles[i];
            const double nu_w = nu.value(W);
            const Mat2 h = dressing_term(disp, nup.m - nu.m, dressing);
            const auto pairs = coupling_pairs(table, nu, nup);
            for (int b = 0; b < 4; ++b) {
                const Mat2 E = basis(b);
                Mat2 out = -I * (h * E - E * h);
                for (const auto& [wl, wpl] : pairs) {
                    const TableEntry& entry = *table.find(wl);
                    const Mat2& Pw = entry.matrix;
                    const Mat2 Ppd = table.find(wpl)->matrix.adjoint();
                    const cplx jp = spec.jhat(Branch::Plus, entry.frequency - nup_w);
                    const cplx jm = spec.jhat(Branch::Minus, entry.frequency + nu_w);
                    out += (jp + jm) * (Pw * E * Ppd) - jp * (E * Ppd * Pw) - jm * (Ppd * Pw * E);
                }
                coupling.block(4 * ip, 4 * i + b, 4, 1) = vec(out);
            }
        }
    }

    sys.coupling = coupling;
    sys.matrix = coupling;
    for (int ip = 0; ip < nv; ++ip)
        sys.matrix.block(4 * ip, 4 * ip, 4, 4) -= I * poles[ip].value(W) * Eigen::Matrix4cd::Identity();

    // Cyclic invariance of the trace: the trace row of every block of the
    // coupling part must vanish.
    const double scale = std::max(1.0, coupling.norm());
    double defect = 0.0;
    for (int ip = 0; ip < nv; ++ip)
        defect = std::max(defect, (coupling.row(4 * ip) + coupling.row(4 * ip + 3)).cwiseAbs().maxCoeff());
    sys.trace_defect = defect / scale;
    if (sys.trace_defect > 1e-12) {
        std::ostringstream msg;
        msg << "assembled residue system is not trace-annihilating (defect " << sys.trace_defect << ")";
        throw Error(msg.str());
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.matrix);
    sys.singular_values = svd.singularValues();
    sys.kernel_dimension = kernel_count(sys.singular_values);
    const Eigen::Index nz = sys.singular_values.size() - std::max(1, sys.kernel_dimension);
    sys.conditioning = sys.singular_values[0] / sys.singular_values[std::max<Eigen::Index>(nz - 1, 0)];
    return sys;
}

ResidueSet solve_residues(const ResidueSystem& system, SolveDiagnostics* diag) {
    if (system.kernel_dimension != 1) {
        std::ostringstream msg;
        msg << "residue system kernel has dimension " << system.kernel_dimension << " (expected 1)";
        throw SingularSystem(msg.str());
    }
    const Eigen::Index n = system.matrix.rows();
    Eigen::MatrixXcd aug(n + 1, n);
    aug.topRows(n) = system.matrix;
    aug.row(n).setZero();
    aug(n, 0) = 1.0;
    aug(n, 3) = 1.0;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
    rhs[n] = 1.0;
    Eigen::VectorXcd x = aug.colPivHouseholderQr().solve(rhs);
    x /= x[0] + x[3]; // remove the least-squares trace residue

    ResidueSet out;
    out.poles = system.poles;
    for (std::size_t i = 0; i < system.poles.size(); ++i) {
        out.frequencies.push_back(system.poles[i].value(system.rabi_prime));
        out.residues.push_back(unvec(x.segment(4 * static_cast<Eigen::Index>(i), 4)));
    }

    if (diag) {
        diag->residual = (system.matrix * x).norm() / (system.matrix.norm() * x.norm());
        diag->ill_conditioned = system.conditioning > 1e12;
        double herm = 0.0, tr = 0.0;
        for (std::size_t i = 0; i < out.poles.size(); ++i) {
            const Mat2 partner = out.at(-out.poles[i]);
            herm = std::max(herm, (partner - out.residues[i].adjoint()).norm());
            if (!(out.poles[i] == FreqLabel{0, 0})) tr = std::max(tr, std::abs(out.residues[i].trace()));
        }
        diag->hermiticity_defect = herm;
        diag->dynamic_trace = tr;
        const Mat2 r0 = out.at({0, 0});
        diag->rho0_eigenvalues = Eigen::SelfAdjointEigenSolver<Mat2>(0.5 * (r0 + r0.adjoint())).eigenvalues();
    }
    return out;
}

ResidueSet markov_steady(const CouplingTable& table, const SpectralDensity& spec) {
    Eigen::Matrix4cd L = Eigen::Matrix4cd::Zero();
    for (int b = 0; b < 4; ++b) {
        const Mat2 E = basis(b);
        Mat2 out = Mat2::Zero();
        for (const auto& e : table.entries) {
            const double j = spec.J(e.frequency);
            if (j == 0.0) continue;
            const Mat2& A = e.matrix;
            const Mat2 AdA = A.adjoint() * A;
            out += j * (A * E * A.adjoint() - 0.5 * (AdA * E + E * AdA));
        }
        L.col(b) = vec(out);
    }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(L, Eigen::ComputeFullV);
    const Eigen::Vector4d sv = svd.singularValues();
    const int k = sv.maxCoeff() == 0.0 ? 4 : kernel_count(sv);
    if (k != 1) {
        std::ostringstream msg;
        msg << "Lindbladian kernel has dimension " << k << " (expected 1)";
        throw SingularSystem(msg.str());
    }
    Mat2 rho = unvec(svd.matrixV().col(3));
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());

    ResidueSet out;
    out.poles = {{0, 0}};
    out.frequencies = {0.0};
    out.residues = {rho};
    return out;
}

cplx observable_sum(const ResidueSet& residues, const CouplingTable& obs) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < residues.poles.size(); ++i)
        sum += (obs.at(residues.poles[i]).adjoint() * residues.residues[i]).trace();
    return sum;
}

double steady_observable(const ResidueSet& residues, const CouplingTable& obs) {
    return observable_sum(residues, obs).real();
}

} // namespace dynss
