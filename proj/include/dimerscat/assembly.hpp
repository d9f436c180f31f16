#pragma once

// Block assembly of the coupled moment systems.
//
// Full system (12 unknowns per dimer, moments U_m = (Q_m1, R_m1, Q_m2, R_m2)):
//   diagonal blocks B_m carry the intra-dimer coupling, off-diagonal blocks
//   Psi_mj the inter-dimer coupling, and the system matrix is
//   [B_m on the diagonal, -Psi_mj off the diagonal].
//
// Reduced system (6 unknowns per dimer, dominant moments (Q_m1, R_m2)):
//   diagonal blocks A_m, off-diagonal blocks C_mj, matrix [A_m, -C_mj],
//   sources (H^inc(z_m1), E^inc(z_m2)).
//
// All kernels are evaluated at particle centers with gradients in the first
// argument. Note one deliberate asymmetry of the model as specified: the
// magnetic-row cross blocks carry prefactor k^4 eta2 a^5 inside B_m but
// k^2 eta2 a^5 inside Psi_mj.

#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dimerscat/errors.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/incident.hpp"
#include "dimerscat/kernels.hpp"
#include "dimerscat/materials.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

using Block12 = Mat12C;
using Block6 = Mat6C;

/// Per-dimer moment stack; NB is the number of 3-vector slots per dimer.
/// The full model stores (Q1, R1, Q2, R2), the reduced one (Q1, R2).
template <int NB>
struct Moments {
    static_assert(NB == 4 || NB == 2, "moments come in full (4-slot) or reduced (2-slot) form");
    static constexpr int block_dim = 3 * NB;
    using Entry = Eigen::Vector<Complex, block_dim>;

    std::vector<Entry> per_dimer;

    std::size_t size() const { return per_dimer.size(); }

    Eigen::VectorXcd stacked() const {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(per_dimer.size()) * block_dim);
        for (std::size_t m = 0; m < per_dimer.size(); ++m)
            v.segment<block_dim>(static_cast<Eigen::Index>(m) * block_dim) = per_dimer[m];
        return v;
    }

    static Moments from_stacked(const Eigen::VectorXcd& v) {
        Moments out;
        out.per_dimer.resize(static_cast<std::size_t>(v.size() / block_dim));
        for (std::size_t m = 0; m < out.per_dimer.size(); ++m)
            out.per_dimer[m] = v.segment<block_dim>(static_cast<Eigen::Index>(m) * block_dim);
        return out;
    }

    Vec3C slot(std::size_t m, int s) const { return per_dimer[m].template segment<3>(3 * s); }

    Vec3C q1(std::size_t m) const { return slot(m, 0); }
    Vec3C r1(std::size_t m) const requires(NB == 4) { return slot(m, 1); }
    Vec3C q2(std::size_t m) const requires(NB == 4) { return slot(m, 2); }
    Vec3C r2(std::size_t m) const { return slot(m, NB == 4 ? 3 : 1); }
};

using FullMoments = Moments<4>;
using ReducedMoments = Moments<2>;

/// Block linear system (diag - offdiag) x = source with dense per-pair
/// coupling blocks. Off-diagonal blocks are stored for every ordered pair
/// m != j in row-major order with the diagonal slot skipped.
template <int NB>
struct BlockSystem {
    static constexpr int block_dim = 3 * NB;
    using Block = Eigen::Matrix<Complex, block_dim, block_dim>;
    using SourceVec = Eigen::Vector<Complex, block_dim>;

    std::size_t n = 0;
    std::vector<Block> diag;      // n blocks
    std::vector<Block> offdiag;   // n*(n-1) blocks
    std::vector<SourceVec> source; // n entries

    std::size_t unknowns() const { return n * block_dim; }

    std::size_t coupling_index(std::size_t m, std::size_t j) const {
        if (m == j) throw IndexEqual("no coupling block for m == j");
        return m * (n - 1) + (j < m ? j : j - 1);
    }
    const Block& coupling(std::size_t m, std::size_t j) const {
        return offdiag[coupling_index(m, j)];
    }
    Block& coupling(std::size_t m, std::size_t j) { return offdiag[coupling_index(m, j)]; }

    Eigen::VectorXcd stacked_source() const {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(unknowns()));
        for (std::size_t m = 0; m < n; ++m)
            v.segment<block_dim>(static_cast<Eigen::Index>(m) * block_dim) = source[m];
        return v;
    }

    /// Matrix-free product (diag - offdiag) x.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd y(x.size());
        for (std::size_t m = 0; m < n; ++m) {
            const auto row = static_cast<Eigen::Index>(m) * block_dim;
            SourceVec acc = diag[m] * x.segment<block_dim>(row);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == m) continue;
                acc -= coupling(m, j) * x.segment<block_dim>(static_cast<Eigen::Index>(j) * block_dim);
            }
            y.segment<block_dim>(row) = acc;
        }
        return y;
    }

    /// Dense realization, diag blocks on the diagonal and -offdiag elsewhere.
    Eigen::MatrixXcd dense() const {
        const auto N = static_cast<Eigen::Index>(unknowns());
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
        for (std::size_t m = 0; m < n; ++m) {
            const auto row = static_cast<Eigen::Index>(m) * block_dim;
            A.block<block_dim, block_dim>(row, row) = diag[m];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == m) continue;
                A.block<block_dim, block_dim>(row, static_cast<Eigen::Index>(j) * block_dim) =
                    -coupling(m, j);
            }
        }
        return A;
    }
};

using FullSystem = BlockSystem<4>;
using ReducedSystem = BlockSystem<2>;

namespace detail {

struct Prefactors {
    Complex row1; // k^2 eta0 / (sign_c c0) * a^{3-h}
    Complex row2; // k^2 a^3
    Complex row3; // k^2 eta2 a^5
    Complex row4; // k^2 eta2 / (sign_d d0) * a^{3-h}
};

inline Prefactors prefactors(const ModelParams& p) {
    const double k2 = p.k * p.k;
    const double a3h = std::pow(p.a, 3.0 - p.h);
    return {k2 * p.eta0 / (static_cast<double>(p.sign_c) * p.c0) * a3h,
            k2 * std::pow(p.a, 3.0),
            k2 * p.eta2 * std::pow(p.a, 5.0),
            k2 * p.eta2 / (static_cast<double>(p.sign_d) * p.d0) * a3h};
}

inline void require_index(std::size_t m, const ClusterGeometry& g) {
    if (m >= g.size()) throw Error("dimer index " + std::to_string(m) + " out of range");
}

} // namespace detail

/// Intra-dimer block B_m: identity on the 3x3 diagonal, coupling between the
/// (Q_m1, R_m1) and (Q_m2, R_m2) halves through kernels at (z_m1, z_m2).
inline Block12 assemble_B(std::size_t m, const ClusterGeometry& g, const ModelParams& p,
                          const PolarizationTensors& t) {
    detail::require_index(m, g);
    const auto pre = detail::prefactors(p);
    const double k2 = p.k * p.k;
    const Vec3R& z1 = g.dimers[m].z1;
    const Vec3R& z2 = g.dimers[m].z2;

    const Mat3C ups12 = upsilon_k(z1, z2, p.k);
    const Mat3C ups21 = upsilon_k(z2, z1, p.k);
    const Mat3C x12 = cross_matrix(grad_phi_k(z1, z2, p.k));
    const Mat3C x21 = cross_matrix(grad_phi_k(z2, z1, p.k));

    const Mat3C B13 = k2 * pre.row1 * t.P011 * ups12;
    const Mat3C B14 = pre.row1 * t.P011 * x12;
    const Mat3C B23 = pre.row2 * t.P012 * x12;
    const Mat3C B24 = pre.row2 * t.P012 * ups12;
    const Mat3C B31 = k2 * pre.row3 * t.P021 * ups21;
    const Mat3C B32 = k2 * pre.row3 * t.P021 * x21;
    const Mat3C B41 = pre.row4 * t.P022 * x21;
    const Mat3C B42 = pre.row4 * t.P022 * ups21;

    Block12 b = Block12::Identity();
    b.block<3, 3>(0, 6) = -B13;
    b.block<3, 3>(0, 9) = -B14;
    b.block<3, 3>(3, 6) = -B23;
    b.block<3, 3>(3, 9) = -B24;
    b.block<3, 3>(6, 0) = -B31;
    b.block<3, 3>(6, 3) = -B32;
    b.block<3, 3>(9, 0) = -B41;
    b.block<3, 3>(9, 3) = -B42;
    return b;
}

/// Inter-dimer block Psi_mj; rows anchored at (z_m1, z_m2), columns at
/// (z_j1, z_j2).
inline Block12 assemble_Psi(std::size_t m, std::size_t j, const ClusterGeometry& g,
                            const ModelParams& p, const PolarizationTensors& t) {
    if (m == j) throw IndexEqual("Psi_mj requires m != j");
    detail::require_index(m, g);
    detail::require_index(j, g);
    const auto pre = detail::prefactors(p);
    const double k2 = p.k * p.k;

    const Vec3R row_pts[2] = {g.dimers[m].z1, g.dimers[m].z2};
    const Vec3R col_pts[2] = {g.dimers[j].z1, g.dimers[j].z2};

    Mat3C ups[2][2], crs[2][2];
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            ups[r][c] = upsilon_k(row_pts[r], col_pts[c], p.k);
            crs[r][c] = cross_matrix(grad_phi_k(row_pts[r], col_pts[c], p.k));
        }

    Block12 psi;
    // row 1: P011 against fields radiated by (Q_j1, R_j1, Q_j2, R_j2)
    psi.block<3, 3>(0, 0) = k2 * pre.row1 * t.P011 * ups[0][0];
    psi.block<3, 3>(0, 3) = pre.row1 * t.P011 * crs[0][0];
    psi.block<3, 3>(0, 6) = k2 * pre.row1 * t.P011 * ups[0][1];
    psi.block<3, 3>(0, 9) = pre.row1 * t.P011 * crs[0][1];
    // row 2
    psi.block<3, 3>(3, 0) = pre.row2 * t.P012 * crs[0][0];
    psi.block<3, 3>(3, 3) = pre.row2 * t.P012 * ups[0][0];
    psi.block<3, 3>(3, 6) = pre.row2 * t.P012 * crs[0][1];
    psi.block<3, 3>(3, 9) = pre.row2 * t.P012 * ups[0][1];
    // row 3; k^2 on the dyadic columns only
    psi.block<3, 3>(6, 0) = k2 * pre.row3 * t.P021 * ups[1][0];
    psi.block<3, 3>(6, 3) = pre.row3 * t.P021 * crs[1][0];
    psi.block<3, 3>(6, 6) = k2 * pre.row3 * t.P021 * ups[1][1];
    psi.block<3, 3>(6, 9) = pre.row3 * t.P021 * crs[1][1];
    // row 4
    psi.block<3, 3>(9, 0) = pre.row4 * t.P022 * crs[1][0];
    psi.block<3, 3>(9, 3) = pre.row4 * t.P022 * ups[1][0];
    psi.block<3, 3>(9, 6) = pre.row4 * t.P022 * crs[1][1];
    psi.block<3, 3>(9, 9) = pre.row4 * t.P022 * ups[1][1];
    return psi;
}

/// Source stack S_m driven by the incident fields at the particle centers.
inline Vec12C assemble_source(std::size_t m, const ClusterGeometry& g, const ModelParams& p,
                              const PolarizationTensors& t, const IncidentWave& inc) {
    detail::require_index(m, g);
    const auto [e1, h1] = incident_fields(inc, g.dimers[m].z1);
    const auto [e2, h2] = incident_fields(inc, g.dimers[m].z2);

    const double a3h = std::pow(p.a, 3.0 - p.h);
    Vec12C s;
    s.segment<3>(0) =
        (I_UNIT * p.k * p.eta0 / (static_cast<double>(p.sign_c) * p.c0) * a3h) * (t.P011 * h1);
    s.segment<3>(3) = std::pow(p.a, 3.0) * (t.P012 * e1);
    s.segment<3>(6) = (I_UNIT * p.k * std::pow(p.a, 5.0)) * (t.P021 * h2);
    s.segment<3>(9) = (p.eta2 / (static_cast<double>(p.sign_d) * p.d0) * a3h) * (t.P022 * e2);
    return s;
}

inline FullSystem assemble_full_system(const ClusterGeometry& g, const ModelParams& p,
                                       const PolarizationTensors& t, const IncidentWave& inc) {
    FullSystem sys;
    sys.n = g.size();
    sys.diag.reserve(sys.n);
    sys.source.reserve(sys.n);
    sys.offdiag.resize(sys.n * (sys.n - 1));
    for (std::size_t m = 0; m < sys.n; ++m) {
        sys.diag.push_back(assemble_B(m, g, p, t));
        sys.source.push_back(assemble_source(m, g, p, t, inc));
        for (std::size_t j = 0; j < sys.n; ++j)
            if (j != m) sys.coupling(m, j) = assemble_Psi(m, j, g, p, t);
    }
    return sys;
}

namespace detail {

inline Mat3C guarded_inverse(const Mat3C& m, const char* name) {
    Eigen::JacobiSVD<Mat3C> svd(m);
    const auto& sv = svd.singularValues();
    if (!(sv(2) > 1e-12 * sv(0)))
        throw SingularTensor(std::string(name) + " is numerically singular");
    return m.inverse();
}

} // namespace detail

/// Reduced 6x6 diagonal block A_m for the dominant moments (Q_m1, R_m2).
inline Block6 assemble_A(std::size_t m, const ClusterGeometry& g, const ModelParams& p,
                         const PolarizationTensors& t) {
    detail::require_index(m, g);
    const Mat3C inv011 = detail::guarded_inverse(t.P011, "P011");
    const Mat3C inv022 = detail::guarded_inverse(t.P022, "P022");

    const double ah3 = std::pow(p.a, p.h - 3.0);
    const Mat3C x12 = cross_matrix(grad_phi_k(g.dimers[m].z1, g.dimers[m].z2, p.k));

    Block6 A;
    A.block<3, 3>(0, 0) =
        ah3 * (static_cast<double>(p.sign_c) * p.c0 / (I_UNIT * p.k * p.eta0)) * inv011;
    A.block<3, 3>(0, 3) = I_UNIT * p.k * x12;
    A.block<3, 3>(3, 0) = -(p.k * p.k) * x12;
    A.block<3, 3>(3, 3) = ah3 * (static_cast<double>(p.sign_d) * p.d0 / p.eta2) * inv022;
    return A;
}

/// Reduced 6x6 coupling block C_mj.
inline Block6 assemble_C(std::size_t m, std::size_t j, const ClusterGeometry& g,
                         const ModelParams& p) {
    if (m == j) throw IndexEqual("C_mj requires m != j");
    detail::require_index(m, g);
    detail::require_index(j, g);
    const double k2 = p.k * p.k;
    const Vec3R& zm1 = g.dimers[m].z1;
    const Vec3R& zm2 = g.dimers[m].z2;
    const Vec3R& zj1 = g.dimers[j].z1;
    const Vec3R& zj2 = g.dimers[j].z2;

    Block6 C;
    C.block<3, 3>(0, 0) = -I_UNIT * k2 * p.k * upsilon_k(zm1, zj1, p.k);
    C.block<3, 3>(0, 3) = -I_UNIT * p.k * cross_matrix(grad_phi_k(zm1, zj2, p.k));
    C.block<3, 3>(3, 0) = k2 * cross_matrix(grad_phi_k(zm2, zj1, p.k));
    C.block<3, 3>(3, 3) = k2 * upsilon_k(zm2, zj2, p.k);
    return C;
}

inline ReducedSystem assemble_reduced_system(const ClusterGeometry& g, const ModelParams& p,
                                             const PolarizationTensors& t,
                                             const IncidentWave& inc) {
    ReducedSystem sys;
    sys.n = g.size();
    sys.diag.reserve(sys.n);
    sys.source.reserve(sys.n);
    sys.offdiag.resize(sys.n * (sys.n - 1));
    for (std::size_t m = 0; m < sys.n; ++m) {
        sys.diag.push_back(assemble_A(m, g, p, t));
        Vec6C s;
        s.segment<3>(0) = incident_fields(inc, g.dimers[m].z1).second; // H^inc(z_m1)
        s.segment<3>(3) = incident_fields(inc, g.dimers[m].z2).first;  // E^inc(z_m2)
        sys.source.push_back(s);
        for (std::size_t j = 0; j < sys.n; ++j)
            if (j != m) sys.coupling(m, j) = assemble_C(m, j, g, p);
    }
    return sys;
}

/// Dense dump with re/im interleaved per column, for external verification.
template <int NB>
inline void dump_dense_csv(std::ostream& os, const BlockSystem<NB>& sys) {
    const Eigen::MatrixXcd A = sys.dense();
    char buf[64];
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", A(i, j).real(), A(i, j).imag());
            os << buf;
            if (j + 1 < A.cols()) os << ',';
        }
        os << '\n';
    }
}

} // namespace dimerscat
