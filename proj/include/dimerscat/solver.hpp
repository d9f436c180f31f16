#pragma once

// Solvers for the block systems: partial-pivoted dense factorization and the
// classic block splittings (Jacobi / Gauss-Seidel) whose convergence regime
// is exactly the quantitative invertibility window of the model.

#include <string>
#include <utility>
#include <vector>

#include "dimerscat/assembly.hpp"
#include "dimerscat/errors.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

enum class SolveMethod { dense, block_jacobi, block_gauss_seidel };

inline const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::dense: return "dense";
        case SolveMethod::block_jacobi: return "block-jacobi";
        case SolveMethod::block_gauss_seidel: return "block-gauss-seidel";
    }
    return "?";
}

struct SolveReport {
    SolveMethod method = SolveMethod::dense;
    int iterations = 0;
    double relative_residual = 0.0; // ||A x - b|| / ||b||, recomputed post hoc
    bool converged = false;
};

inline constexpr std::size_t default_unknown_cap = 6000;

namespace detail {

template <int NB>
double relative_residual(const BlockSystem<NB>& sys, const Eigen::VectorXcd& x,
                         const Eigen::VectorXcd& b) {
    const double nb = b.norm();
    const double nr = (sys.apply(x) - b).norm();
    return nb > 0.0 ? nr / nb : nr;
}

} // namespace detail

/// Direct solve via partial-pivoted LU of the dense realization.
template <int NB>
std::pair<Moments<NB>, SolveReport> solve_dense(const BlockSystem<NB>& sys,
                                                std::size_t unknown_cap = default_unknown_cap) {
    if (sys.unknowns() > unknown_cap)
        throw SizeCapExceeded("system has " + std::to_string(sys.unknowns()) +
                              " unknowns, cap is " + std::to_string(unknown_cap));
    const Eigen::MatrixXcd A = sys.dense();
    const Eigen::VectorXcd b = sys.stacked_source();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double scale = A.norm();
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot_min > 1e-14 * scale))
        throw SingularMatrix("smallest pivot " + std::to_string(pivot_min) +
                             " below 1e-14 * ||A|| = " + std::to_string(1e-14 * scale));

    const Eigen::VectorXcd x = lu.solve(b);
    SolveReport rep;
    rep.method = SolveMethod::dense;
    rep.iterations = 1;
    rep.relative_residual = detail::relative_residual(sys, x, b);
    rep.converged = true;
    return {Moments<NB>::from_stacked(x), rep};
}

/// Block splitting x_m <- diag_m^{-1} (s_m + sum_{j != m} coupling_mj x_j),
/// with the Jacobi variant reading the previous sweep and Gauss-Seidel the
/// current one, in the fixed order m = 0..n-1. Returns the best iterate seen;
/// a run that never reaches tol reports converged = false rather than throwing.
template <int NB>
std::pair<Moments<NB>, SolveReport> solve_block_iterative(const BlockSystem<NB>& sys,
                                                          SolveMethod scheme, double tol,
                                                          int max_iter) {
    if (scheme != SolveMethod::block_jacobi && scheme != SolveMethod::block_gauss_seidel)
        throw Error("solve_block_iterative expects a block splitting scheme");
    constexpr int bd = BlockSystem<NB>::block_dim;
    using Block = typename BlockSystem<NB>::Block;

    std::vector<Eigen::PartialPivLU<Block>> diag_lu;
    diag_lu.reserve(sys.n);
    for (std::size_t m = 0; m < sys.n; ++m) {
        diag_lu.emplace_back(sys.diag[m]);
        const double pivot_min = diag_lu.back().matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(pivot_min > 1e-14 * sys.diag[m].norm()))
            throw DiagonalBlockSingular("diagonal block " + std::to_string(m) +
                                        " is numerically singular");
    }

    const Eigen::VectorXcd b = sys.stacked_source();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(b.size());
    Eigen::VectorXcd best = x;
    double best_res = detail::relative_residual(sys, x, b);

    SolveReport rep;
    rep.method = scheme;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXcd next = x;
        for (std::size_t m = 0; m < sys.n; ++m) {
            const Eigen::VectorXcd& read =
                (scheme == SolveMethod::block_gauss_seidel) ? next : x;
            typename BlockSystem<NB>::SourceVec rhs = sys.source[m];
            for (std::size_t j = 0; j < sys.n; ++j) {
                if (j == m) continue;
                rhs += sys.coupling(m, j) *
                       read.segment<bd>(static_cast<Eigen::Index>(j) * bd);
            }
            next.segment<bd>(static_cast<Eigen::Index>(m) * bd) = diag_lu[m].solve(rhs);
        }
        x = std::move(next);
        const double res = detail::relative_residual(sys, x, b);
        rep.iterations = it;
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (res <= tol) {
            rep.converged = true;
            break;
        }
    }
    rep.relative_residual = best_res;
    return {Moments<NB>::from_stacked(best), rep};
}

/// Solves two same-shape systems and returns the Euclidean norm of the
/// stacked solution difference.
template <int NB>
double perturbation_gap(const BlockSystem<NB>& sys_a, const BlockSystem<NB>& sys_b,
                        std::size_t unknown_cap = default_unknown_cap) {
    if (sys_a.n != sys_b.n)
        throw Error("perturbation_gap requires systems of the same shape");
    const auto xa = solve_dense(sys_a, unknown_cap).first;
    const auto xb = solve_dense(sys_b, unknown_cap).first;
    return (xa.stacked() - xb.stacked()).norm();
}

} // namespace dimerscat
