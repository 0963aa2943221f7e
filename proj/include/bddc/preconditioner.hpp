/// @file preconditioner.hpp
/// @brief BDDC preconditioner: coarse basis setup through local saddle-point
/// solves and the three-part application (coarse, local and static
/// condensation corrections).

#ifndef BDDC_PRECONDITIONER_HPP
#define BDDC_PRECONDITIONER_HPP

#include <span>
#include <vector>

#include "bddc/csr_matrix.hpp"
#include "bddc/decomposition.hpp"
#include "bddc/dense_matrix.hpp"
#include "bddc/pcg.hpp"
#include "bddc/sparse_lu.hpp"

namespace bddc {

/// Per-subdomain setup data.
///
/// coarse_basis solves the saddle-point system
///   [ A_i  C_i^T ] [ Phi_i    ]   [ 0 ]
///   [ C_i    0   ] [ Lambda_i ] = [ I ]
/// column by column, so C_i Phi_i = I and A_i Phi_i + C_i^T Lambda_i = 0.
/// coarse_block is the subdomain's coarse contribution Phi_i^T A_i Phi_i.
struct SubdomainData {
    CsrMatrix matrix;                         // A_i (Neumann)
    CsrMatrix constraints;                    // C_i
    SparseFactorization saddle_factorization; // of [[A_i, C_i^T], [C_i, 0]]
    SparseFactorization interior_factorization;
    DenseMatrix coarse_basis;                 // Phi_i, n_local x n_primal
    DenseMatrix multipliers;                  // Lambda_i, n_primal x n_primal
    DenseMatrix coarse_block;                 // A_ci, n_primal x n_primal
};

/// Assembled coarse problem: sparse symmetric matrix plus the subdomain
/// primal maps and the configuration of its inner CG solve.
struct CoarseProblem {
    CsrMatrix matrix;
    std::vector<std::vector<index_t>> primal_maps;
    SolverOptions solver{1e-12, 0.0, 500, false};
};

/// Factors the subdomain saddle system (equilibrate, AMD, threshold LU),
/// extracts the coarse basis and multipliers, forms the coarse block, and
/// factors the interior block. interior_count is the length of the
/// interior prefix of the local dof order.
SubdomainData setup_subdomain(const CsrMatrix& A_i, const CsrMatrix& C_i,
                              index_t interior_count);

/// A_c = sum over subdomains of the coarse blocks scattered through the
/// primal maps.
CoarseProblem assemble_coarse(const std::vector<SubdomainData>& subdomains,
                              const std::vector<std::vector<index_t>>& primal_maps,
                              index_t n_coarse);

/// Two-level BDDC preconditioner. Immutable after construction; apply() can
/// run concurrently on distinct vectors. Per-subdomain work runs on a worker
/// pool, and all cross-subdomain sums are taken in ascending subdomain order
/// so results are identical for any worker count.
class Preconditioner {
public:
    Preconditioner(CsrMatrix global_matrix, std::vector<CsrMatrix> local_matrices,
                   Decomposition decomp, const ConstraintSet& constraints,
                   index_t worker_count = 1,
                   SolverOptions coarse_options = SolverOptions{1e-12, 0.0, 500, false});

    /// Preconditioned residual. The interface corrections see the statically
    /// condensed residual: the interior pre-solve u0 is applied first and its
    /// counterpart v3 last, which keeps the operator symmetric.
    std::vector<double> apply(std::span<const double> r) const;

    /// Coarse grid correction v1: restrict the residual to the primal space
    /// through the weighted coarse bases, solve the coarse problem with CG,
    /// and prolong back.
    std::vector<double> coarse_correction(std::span<const double> r) const;

    /// Local subdomain correction v2 from the constrained saddle solves.
    std::vector<double> local_correction(std::span<const double> r) const;

    /// Static condensation correction v3: interior Dirichlet solves of the
    /// updated residual r - A (v1 + v2).
    std::vector<double> static_condensation_correction(
        std::span<const double> r, std::span<const double> v1,
        std::span<const double> v2) const;

    /// Interior-block solve u0 with zero interface values (multiplicity-one
    /// dofs belong to a single subdomain, so no weighting appears).
    std::vector<double> interior_correction(std::span<const double> r) const;

    const std::vector<SubdomainData>& subdomains() const { return subdomains_; }
    const CoarseProblem& coarse() const { return coarse_; }
    const Decomposition& decomposition() const { return decomp_; }
    const CsrMatrix& global_matrix() const { return global_matrix_; }
    index_t worker_count() const { return worker_count_; }

private:
    CsrMatrix global_matrix_;
    Decomposition decomp_;
    std::vector<SubdomainData> subdomains_;
    CoarseProblem coarse_;
    index_t worker_count_;
};

}  // namespace bddc

#endif
