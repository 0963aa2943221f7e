#include "bddc/preconditioner.hpp"

#include <stdexcept>
#include <string>

#include "bddc/parallel.hpp"
#include "bddc/vector_ops.hpp"

namespace bddc {
namespace {

CsrMatrix saddle_matrix(const CsrMatrix& A, const CsrMatrix& C) {
    const index_t n = A.nrows;
    const index_t nc = C.nrows;
    std::vector<Triplet> entries;
    entries.reserve(A.nnz() + 2 * C.nnz());
    for (index_t i = 0; i < n; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            entries.push_back({i, A.col_indices[p], A.values[p]});
        }
    }
    for (index_t r = 0; r < nc; ++r) {
        for (index_t p = C.row_offsets[r]; p < C.row_offsets[r + 1]; ++p) {
            const index_t l = C.col_indices[p];
            entries.push_back({n + r, l, C.values[p]});
            entries.push_back({l, n + r, C.values[p]});
        }
    }
    return CsrMatrix::from_triplets(n + nc, n + nc, std::move(entries));
}

}  // namespace

SubdomainData setup_subdomain(const CsrMatrix& A_i, const CsrMatrix& C_i,
                              index_t interior_count) {
    if (A_i.nrows != A_i.ncols || C_i.ncols != A_i.nrows) {
        throw std::invalid_argument("setup_subdomain: dimension mismatch");
    }
    if (interior_count < 0 || interior_count > A_i.nrows) {
        throw std::invalid_argument("setup_subdomain: interior count out of range");
    }
    const index_t n_local = A_i.nrows;
    const index_t n_primal = C_i.nrows;

    SubdomainData data;
    data.matrix = A_i;
    data.constraints = C_i;
    data.saddle_factorization = factorize(saddle_matrix(A_i, C_i));

    // Solve the saddle system once per primal dof with rhs [0; e_j].
    data.coarse_basis = DenseMatrix(n_local, n_primal);
    data.multipliers = DenseMatrix(n_primal, n_primal);
    std::vector<double> rhs(n_local + n_primal, 0.0);
    for (index_t j = 0; j < n_primal; ++j) {
        rhs[n_local + j] = 1.0;
        const std::vector<double> sol = lu_solve(data.saddle_factorization, rhs);
        rhs[n_local + j] = 0.0;
        for (index_t l = 0; l < n_local; ++l) data.coarse_basis(l, j) = sol[l];
        for (index_t r = 0; r < n_primal; ++r) {
            data.multipliers(r, j) = sol[n_local + r];
        }
    }
    data.coarse_block = dense_triple_product(data.coarse_basis, A_i, data.coarse_basis);
    data.interior_factorization = factorize(principal_submatrix(A_i, interior_count));
    return data;
}

CoarseProblem assemble_coarse(const std::vector<SubdomainData>& subdomains,
                              const std::vector<std::vector<index_t>>& primal_maps,
                              index_t n_coarse) {
    if (subdomains.size() != primal_maps.size()) {
        throw std::invalid_argument("assemble_coarse: map count mismatch");
    }
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < subdomains.size(); ++i) {
        const DenseMatrix& block = subdomains[i].coarse_block;
        const auto& map = primal_maps[i];
        if (static_cast<index_t>(map.size()) != block.nrows) {
            throw std::invalid_argument("assemble_coarse: primal map size mismatch at subdomain " +
                                        std::to_string(i));
        }
        for (index_t r = 0; r < block.nrows; ++r) {
            for (index_t c = 0; c < block.ncols; ++c) {
                if (map[r] < 0 || map[r] >= n_coarse || map[c] < 0 || map[c] >= n_coarse) {
                    throw std::out_of_range("assemble_coarse: primal index out of range at subdomain " +
                                            std::to_string(i));
                }
                if (block(r, c) != 0.0) {
                    entries.push_back({map[r], map[c], block(r, c)});
                }
            }
        }
    }
    CoarseProblem coarse;
    coarse.matrix = CsrMatrix::from_triplets(n_coarse, n_coarse, std::move(entries));
    coarse.primal_maps = primal_maps;
    return coarse;
}

Preconditioner::Preconditioner(CsrMatrix global_matrix,
                               std::vector<CsrMatrix> local_matrices,
                               Decomposition decomp,
                               const ConstraintSet& constraints,
                               index_t worker_count, SolverOptions coarse_options)
    : global_matrix_(std::move(global_matrix)),
      decomp_(std::move(decomp)),
      worker_count_(worker_count < 1 ? 1 : worker_count) {
    const index_t n_sub = decomp_.n_subdomains;
    if (static_cast<index_t>(local_matrices.size()) != n_sub ||
        static_cast<index_t>(constraints.constraint_matrices.size()) != n_sub) {
        throw std::invalid_argument("bddc setup: subdomain count mismatch");
    }
    subdomains_.resize(n_sub);
    parallel_for(n_sub, worker_count_, [&](index_t i) {
        try {
            subdomains_[i] = setup_subdomain(local_matrices[i],
                                             constraints.constraint_matrices[i],
                                             decomp_.interior_counts[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("bddc setup: subdomain " + std::to_string(i) +
                                     ": " + e.what());
        }
    });
    coarse_ = assemble_coarse(subdomains_, constraints.primal_maps,
                              constraints.n_coarse);
    coarse_.solver = coarse_options;
}

std::vector<double> Preconditioner::coarse_correction(
    std::span<const double> r) const {
    const index_t n_sub = decomp_.n_subdomains;

    // Coarsened residual through the weighted bases.
    std::vector<std::vector<double>> contributions(n_sub);
    parallel_for(n_sub, worker_count_, [&](index_t i) {
        std::vector<double> local = restrict_to_subdomain(decomp_, i, r);
        const auto& w = decomp_.weights[i];
        for (std::size_t l = 0; l < local.size(); ++l) local[l] *= w[l];
        contributions[i] = dense_apply_transposed(subdomains_[i].coarse_basis, local);
    });
    std::vector<double> coarse_residual(coarse_.matrix.nrows, 0.0);
    for (index_t i = 0; i < n_sub; ++i) {
        const auto& map = coarse_.primal_maps[i];
        for (std::size_t j = 0; j < map.size(); ++j) {
            coarse_residual[map[j]] += contributions[i][j];
        }
    }

    std::vector<double> coarse_solution;
    const SolveReport report =
        pcg(coarse_.matrix, coarse_residual, {}, coarse_.solver, coarse_solution);
    if (!report.converged) {
        throw std::runtime_error(
            "coarse CG did not converge: " + std::to_string(report.iterations) +
            " iterations, relative residual " +
            std::to_string(report.final_relative_residual));
    }

    std::vector<std::vector<double>> locals(n_sub);
    parallel_for(n_sub, worker_count_, [&](index_t i) {
        const auto& map = coarse_.primal_maps[i];
        std::vector<double> primal(map.size());
        for (std::size_t j = 0; j < map.size(); ++j) primal[j] = coarse_solution[map[j]];
        locals[i] = dense_apply(subdomains_[i].coarse_basis, primal);
        const auto& w = decomp_.weights[i];
        for (std::size_t l = 0; l < locals[i].size(); ++l) locals[i][l] *= w[l];
    });
    std::vector<double> v1(decomp_.global_dofs, 0.0);
    for (index_t i = 0; i < n_sub; ++i) prolong_add(decomp_, i, locals[i], v1);
    return v1;
}

std::vector<double> Preconditioner::local_correction(
    std::span<const double> r) const {
    const index_t n_sub = decomp_.n_subdomains;
    std::vector<std::vector<double>> locals(n_sub);
    parallel_for(n_sub, worker_count_, [&](index_t i) {
        const SubdomainData& sub = subdomains_[i];
        const index_t n_local = sub.matrix.nrows;
        const index_t n_primal = sub.constraints.nrows;
        std::vector<double> rhs(n_local + n_primal, 0.0);
        const auto& dofs = decomp_.subdomain_dofs[i];
        const auto& w = decomp_.weights[i];
        for (index_t l = 0; l < n_local; ++l) rhs[l] = w[l] * r[dofs[l]];
        const std::vector<double> sol = lu_solve(sub.saddle_factorization, rhs);
        locals[i].resize(n_local);
        for (index_t l = 0; l < n_local; ++l) locals[i][l] = w[l] * sol[l];
    });
    std::vector<double> v2(decomp_.global_dofs, 0.0);
    for (index_t i = 0; i < n_sub; ++i) prolong_add(decomp_, i, locals[i], v2);
    return v2;
}

std::vector<double> Preconditioner::interior_correction(
    std::span<const double> r) const {
    const index_t n_sub = decomp_.n_subdomains;
    std::vector<std::vector<double>> locals(n_sub);
    parallel_for(n_sub, worker_count_, [&](index_t i) {
        const index_t n_interior = decomp_.interior_counts[i];
        const auto& dofs = decomp_.subdomain_dofs[i];
        std::vector<double> rhs(n_interior);
        for (index_t l = 0; l < n_interior; ++l) rhs[l] = r[dofs[l]];
        locals[i] = lu_solve(subdomains_[i].interior_factorization, rhs);
    });
    std::vector<double> u(decomp_.global_dofs, 0.0);
    for (index_t i = 0; i < n_sub; ++i) {
        const auto& dofs = decomp_.subdomain_dofs[i];
        for (index_t l = 0; l < decomp_.interior_counts[i]; ++l) {
            u[dofs[l]] += locals[i][l];
        }
    }
    return u;
}

std::vector<double> Preconditioner::static_condensation_correction(
    std::span<const double> r, std::span<const double> v1,
    std::span<const double> v2) const {
    std::vector<double> combined(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) combined[i] = v1[i] + v2[i];
    std::vector<double> updated = spmv(global_matrix_, combined);
    for (std::size_t i = 0; i < r.size(); ++i) updated[i] = r[i] - updated[i];
    return interior_correction(updated);
}

std::vector<double> Preconditioner::apply(std::span<const double> r) const {
    if (static_cast<index_t>(r.size()) != decomp_.global_dofs) {
        throw std::invalid_argument("bddc apply: residual size mismatch");
    }
    ensure_finite(r, "bddc apply");

    // Interior pre-solve, then the three corrections on the statically
    // condensed residual. The pre/post pair keeps the operator symmetric.
    const std::vector<double> u0 = interior_correction(r);
    std::vector<double> condensed = spmv(global_matrix_, u0);
    for (std::size_t i = 0; i < condensed.size(); ++i) {
        condensed[i] = r[i] - condensed[i];
    }

    const std::vector<double> v1 = coarse_correction(condensed);
    const std::vector<double> v2 = local_correction(condensed);
    const std::vector<double> v3 =
        static_condensation_correction(condensed, v1, v2);

    std::vector<double> result(r.size());
    for (std::size_t i = 0; i < result.size(); ++i) {
        result[i] = u0[i] + v1[i] + v2[i] + v3[i];
    }
    return result;
}

}  // namespace bddc
