/// @file pcg.hpp
/// @brief Preconditioned conjugate gradient with convergence reporting and a
/// Lanczos-based condition estimate.

#ifndef BDDC_PCG_HPP
#define BDDC_PCG_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bddc/csr_matrix.hpp"

namespace bddc {

struct SolverOptions {
    double rel_tolerance = 1e-8;
    double abs_tolerance = 0.0;  // 0 disables the absolute test
    index_t max_iterations = 1000;
    bool record_history = false;
};

struct SolveReport {
    index_t iterations = 0;
    double final_relative_residual = 0.0;
    std::vector<double> residual_history;  // filled when recorded; [0] = 1
    std::optional<double> condition_estimate;
    bool converged = false;
};

/// Preconditioner application z = M^{-1} r; an empty function means identity.
using PreconditionerFn =
    std::function<void(std::span<const double>, std::span<double>)>;

/// Standard preconditioned CG on symmetric positive definite A, zero initial
/// guess. Stops when ||r_k||_2 / ||b||_2 <= rel_tolerance or
/// ||r_k||_2 <= abs_tolerance. When max_iterations is exhausted the best
/// iterate is returned with converged = false.
///
/// Throws "matrix not SPD" when a search direction has nonpositive curvature.
/// Symmetry of A is spot-checked on a few sampled entries only.
SolveReport pcg(const CsrMatrix& A, std::span<const double> b,
                const PreconditionerFn& M, const SolverOptions& opts,
                std::vector<double>& x);

/// Extreme-eigenvalue ratio of the Lanczos tridiagonal built from the CG
/// coefficients; empty when fewer than two iterations are available.
std::optional<double> condition_estimate(std::span<const double> alphas,
                                         std::span<const double> betas);

/// Extreme eigenvalues of a symmetric tridiagonal matrix (diag, offdiag) by
/// Sturm-sequence bisection.
std::pair<double, double> tridiagonal_extreme_eigenvalues(
    std::span<const double> diag, std::span<const double> offdiag);

}  // namespace bddc

#endif
