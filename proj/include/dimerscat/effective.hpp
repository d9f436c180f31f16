#pragma once

// Dipole-level polarizability of a single dimer, local fields, macroscopic
// susceptibilities and effective constitutive tensors, plus the dominant
// closed-form polarizability blocks with their power-law scalings.
//
// Two routes to the susceptibilities are exposed on purpose: the exact
// per-dimer inverse P = A^-1 and the dominant closed forms; their discrepancy
// is itself an observable of the model.

#include <cmath>
#include <vector>

#include "dimerscat/assembly.hpp"
#include "dimerscat/errors.hpp"
#include "dimerscat/kernels.hpp"
#include "dimerscat/materials.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

/// 6x6 dimer polarizability in 2x2 grid of 3x3 blocks
/// (alpha_HH, alpha_HE; alpha_EH, alpha_EE).
struct Polarizability6 {
    Mat6C m = Mat6C::Zero();

    Mat3C hh() const { return m.block<3, 3>(0, 0); }
    Mat3C he() const { return m.block<3, 3>(0, 3); }
    Mat3C eh() const { return m.block<3, 3>(3, 0); }
    Mat3C ee() const { return m.block<3, 3>(3, 3); }
};

/// P = A^-1 with a singular-value guard and a round-trip check.
inline Polarizability6 dimer_polarizability(const Mat6C& A) {
    Eigen::JacobiSVD<Mat6C> svd(A);
    const auto& sv = svd.singularValues();
    if (!(sv(5) > 1e-12 * sv(0)))
        throw SingularA("reduced diagonal block is numerically singular");
    Polarizability6 p;
    p.m = A.inverse();
    if ((A * p.m - Mat6C::Identity()).norm() > 1e-12 * std::max(1.0, A.norm() * p.m.norm()))
        throw SingularA("inverse failed the round-trip check");
    return p;
}

/// Local field at each dimer: incident source plus the coupling sum
/// F_m^loc = F_m^inc + sum_{j != m} C_mj U_j.
inline std::vector<Vec6C> local_fields(const ReducedMoments& sol, const ReducedSystem& sys) {
    std::vector<Vec6C> loc(sys.n);
    for (std::size_t m = 0; m < sys.n; ++m) {
        Vec6C f = sys.source[m];
        for (std::size_t j = 0; j < sys.n; ++j)
            if (j != m) f += sys.coupling(m, j) * sol.per_dimer[j];
        loc[m] = f;
    }
    return loc;
}

/// Number density of dimers, rho_a = beta0^-3 a^{-3 t2}.
inline double number_density(const ModelParams& p) {
    return std::pow(p.beta0, -3.0) * std::pow(p.a, -3.0 * p.t2);
}

struct SusceptibilitySet {
    Mat3C chiHH = Mat3C::Zero();
    Mat3C chiHE = Mat3C::Zero();
    Mat3C chiEH = Mat3C::Zero();
    Mat3C chiEE = Mat3C::Zero();
    double rho = 0.0;
};

inline SusceptibilitySet susceptibilities(const Polarizability6& p, double rho) {
    SusceptibilitySet s;
    s.rho = rho;
    s.chiHH = rho * p.hh();
    s.chiHE = rho * p.he();
    s.chiEH = rho * p.eh();
    s.chiEE = rho * p.ee();
    return s;
}

struct EffectiveTensors {
    Mat3C eps_eff;
    Mat3C mu_eff;
    Mat3C xi;
    Mat3C zeta;
};

/// Smallest eigenvalue of the Hermitian part (M + M^H)/2; the matrix notion
/// of "Re < 0" used for the negativity flags.
inline double min_hermitian_eigenvalue(const Mat3C& m) {
    const Mat3C herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat3C> es(herm);
    return es.eigenvalues()(0);
}

struct EffectiveMediumReport {
    EffectiveTensors tensors;
    double min_eig_re_eps = 0.0; // min over unit v of Re(v* eps_eff v)
    double min_eig_re_mu = 0.0;
    bool eps_negative = false;
    bool mu_negative = false;
    bool double_negative = false;
};

/// eps_eff = eps0 (I + chi_EE), mu_eff = mu0 (I + chi_HH),
/// xi = eps0 chi_EH, zeta = mu0 chi_HE, with negativity indicators.
inline EffectiveMediumReport effective_tensors(const SusceptibilitySet& chi,
                                               const ModelParams& p) {
    EffectiveMediumReport r;
    r.tensors.eps_eff = p.eps0 * (Mat3C::Identity() + chi.chiEE);
    r.tensors.mu_eff = p.mu0 * (Mat3C::Identity() + chi.chiHH);
    r.tensors.xi = p.eps0 * chi.chiEH;
    r.tensors.zeta = p.mu0 * chi.chiHE;
    r.min_eig_re_eps = min_hermitian_eigenvalue(r.tensors.eps_eff);
    r.min_eig_re_mu = min_hermitian_eigenvalue(r.tensors.mu_eff);
    r.eps_negative = r.min_eig_re_eps < 0.0;
    r.mu_negative = r.min_eig_re_mu < 0.0;
    r.double_negative = r.eps_negative && r.mu_negative;
    return r;
}

/// Dominant closed-form polarizability blocks for a dimer with intra-dimer
/// separation vector d_in_vec = z_m2 - z_m1 (|d_in_vec| = alpha0 a^t1):
///   alpha_HH = (ik eta0 / (sign_c c0)) a^{3-h} P011
///   alpha_EE = (eta2 / (sign_d d0)) a^{3-h} P022
///   alpha_HE = k^2 (eta0 eta2 / (c0 d0)) a^{6-2h} P011 G P022
///   alpha_EH = ik^3 (eta0 eta2 / (c0 d0)) a^{6-2h} P022 G P011
/// with G = (grad Phi_k(z_m1, z_m2) x).
inline Polarizability6 dominant_polarizability(const ModelParams& p,
                                               const PolarizationTensors& t,
                                               const Vec3R& d_in_vec) {
    const Mat3C G = cross_matrix(grad_phi_k(Vec3R::Zero(), d_in_vec, p.k));
    const double a3h = std::pow(p.a, 3.0 - p.h);
    const double a62h = std::pow(p.a, 6.0 - 2.0 * p.h);
    const Complex cross_scale = p.eta0 * p.eta2 / (p.c0 * p.d0) * a62h;

    Polarizability6 alpha;
    alpha.m.block<3, 3>(0, 0) =
        (I_UNIT * p.k * p.eta0 / (static_cast<double>(p.sign_c) * p.c0) * a3h) * t.P011;
    alpha.m.block<3, 3>(3, 3) =
        (p.eta2 / (static_cast<double>(p.sign_d) * p.d0) * a3h) * t.P022;
    alpha.m.block<3, 3>(0, 3) = (p.k * p.k) * cross_scale * (t.P011 * G * t.P022);
    alpha.m.block<3, 3>(3, 0) =
        I_UNIT * std::pow(p.k, 3.0) * cross_scale * (t.P022 * G * t.P011);
    return alpha;
}

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0; // max |log10 norm - fit| over the sample
};

/// Least-squares line through (log10 a, log10 y).
inline ExponentFit fit_log_slope(const std::vector<double>& a_values,
                                 const std::vector<double>& y_values) {
    const auto n = static_cast<double>(a_values.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        const double x = std::log10(a_values[i]);
        const double y = std::log10(y_values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ExponentFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        const double r = std::abs(std::log10(y_values[i]) -
                                  (f.slope * std::log10(a_values[i]) + f.intercept));
        f.max_residual = std::max(f.max_residual, r);
    }
    return f;
}

struct SweepPoint {
    double a = 0.0;
    // spectral norms of the chi blocks, order HH, HE, EH, EE
    double dominant_norm[4] = {0, 0, 0, 0};
    double full_norm[4] = {0, 0, 0, 0};
    double min_eig_re_eps = 0.0; // from the exact-inverse pipeline
    double min_eig_re_mu = 0.0;
    bool eps_negative = false;
    bool mu_negative = false;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    ExponentFit dominant_fit[4]; // HH, HE, EH, EE
    ExponentFit full_fit[4];
    double predicted_diag_slope = 0.0;    // 3 - h - 3 t2
    double predicted_offdiag_slope = 0.0; // 6 - 2h - 2 t1 - 3 t2
};

/// For each a: builds the dominant chi blocks and the exact chi = rho A^-1
/// blocks for one dimer oriented along `orientation`, and fits log-log slopes
/// per block for both pipelines.
inline SweepResult scaling_sweep(const ModelParams& p_template, const PolarizationTensors& t,
                                 const std::vector<double>& a_values, const Vec3R& orientation) {
    if (a_values.size() < 4)
        throw Error("scaling sweep needs at least 4 values of a");
    double lo = a_values.front(), hi = a_values.front();
    for (double a : a_values) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        if (!(a > 0.0)) throw Error("scaling sweep needs positive a");
    }
    if (hi / lo < 10.0) throw Error("scaling sweep must span at least one decade in a");
    {
        const auto regime = check_regime(p_template);
        if (!regime.all_pass())
            throw RegimeViolation("sweep parameters fail the admissibility window");
    }

    const Vec3R axis = orientation.normalized();
    SweepResult result;
    result.predicted_diag_slope = 3.0 - p_template.h - 3.0 * p_template.t2;
    result.predicted_offdiag_slope =
        6.0 - 2.0 * p_template.h - 2.0 * p_template.t1 - 3.0 * p_template.t2;

    std::vector<double> dom_norms[4], full_norms[4];
    for (double a : a_values) {
        ModelParams p = p_template;
        p.a = a;
        const double rho = number_density(p);
        const Vec3R d_vec = p.d_in() * axis;

        const auto dom = susceptibilities(dominant_polarizability(p, t, d_vec), rho);

        // exact route: single dimer centered at the origin
        ClusterGeometry g = make_cluster({DimerSites{-0.5 * d_vec, 0.5 * d_vec}});
        const auto exact =
            susceptibilities(dimer_polarizability(assemble_A(0, g, p, t)), rho);

        SweepPoint pt;
        pt.a = a;
        const Mat3C dom_blocks[4] = {dom.chiHH, dom.chiHE, dom.chiEH, dom.chiEE};
        const Mat3C full_blocks[4] = {exact.chiHH, exact.chiHE, exact.chiEH, exact.chiEE};
        for (int b = 0; b < 4; ++b) {
            pt.dominant_norm[b] = spectral_norm(dom_blocks[b]);
            pt.full_norm[b] = spectral_norm(full_blocks[b]);
            dom_norms[b].push_back(pt.dominant_norm[b]);
            full_norms[b].push_back(pt.full_norm[b]);
        }
        const auto medium = effective_tensors(exact, p);
        pt.min_eig_re_eps = medium.min_eig_re_eps;
        pt.min_eig_re_mu = medium.min_eig_re_mu;
        pt.eps_negative = medium.eps_negative;
        pt.mu_negative = medium.mu_negative;
        result.points.push_back(pt);
    }

    std::vector<double> avec(a_values.begin(), a_values.end());
    for (int b = 0; b < 4; ++b) {
        result.dominant_fit[b] = fit_log_slope(avec, dom_norms[b]);
        result.full_fit[b] = fit_log_slope(avec, full_norms[b]);
    }
    return result;
}

} // namespace dimerscat
