#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bddc/decomposition.hpp"
#include "bddc/grid.hpp"
#include "bddc/vector_ops.hpp"
#include "oracle_helpers.hpp"

using namespace bddc;
using namespace bddc::testing;

TEST_CASE("q1 element stiffness equals the hand-derived matrix") {
    // frozen from the quadrature derivation: (1/6) * [[4,-1,-2,-1], ...]
    const double expected[4][4] = {{4, -1, -2, -1},
                                   {-1, 4, -1, -2},
                                   {-2, -1, 4, -1},
                                   {-1, -2, -1, 4}};
    const DenseMatrix K = q1_element_matrix();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            CHECK(K(a, b) == doctest::Approx(expected[a][b] / 6.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("assembled interior stencil is (1/3)[-1..8..-1]") {
    const StructuredGrid grid(4);  // 3x3 free dofs, center row is a full stencil
    const PoissonProblem problem = assemble_poisson(grid, 2);
    const index_t center = grid.dof(2, 2);
    for (index_t dy = -1; dy <= 1; ++dy) {
        for (index_t dx = -1; dx <= 1; ++dx) {
            const double want = (dx == 0 && dy == 0) ? 8.0 / 3.0 : -1.0 / 3.0;
            CHECK(csr_entry(problem.global_matrix, center, grid.dof(2 + dx, 2 + dy)) ==
                  doctest::Approx(want).epsilon(1e-14));
        }
    }
}

TEST_CASE("global matrix equals the subdomain scatter-add, k=2 m=4") {
    const StructuredGrid grid(8);
    const PoissonProblem problem = assemble_poisson(grid, 2);
    const Decomposition& d = problem.decomposition;
    DenseMatrix sum(grid.free_dofs, grid.free_dofs);
    for (index_t i = 0; i < d.n_subdomains; ++i) {
        const CsrMatrix& A_i = problem.local_matrices[i];
        const auto& dofs = d.subdomain_dofs[i];
        for (index_t r = 0; r < A_i.nrows; ++r) {
            for (index_t p = A_i.row_offsets[r]; p < A_i.row_offsets[r + 1]; ++p) {
                sum(dofs[r], dofs[A_i.col_indices[p]]) += A_i.values[p];
            }
        }
    }
    const DenseMatrix global = densify(problem.global_matrix);
    for (index_t i = 0; i < grid.free_dofs; ++i) {
        for (index_t j = 0; j < grid.free_dofs; ++j) {
            CHECK(std::abs(sum(i, j) - global(i, j)) <= 1e-14);
        }
    }
}

TEST_CASE("classification of the 2x2 layout, m=4") {
    const StructuredGrid grid(8);
    const Decomposition d = build_decomposition(grid, 2);
    // single cross point at (1/2, 1/2)
    const index_t cross = grid.dof(4, 4);
    CHECK(d.classes[cross].kind == DofKind::corner);
    CHECK(d.multiplicity[cross] == 4);
    // vertical interface dof away from the cross point
    const index_t edge_dof = grid.dof(4, 2);
    CHECK(d.classes[edge_dof].kind == DofKind::edge);
    CHECK(d.multiplicity[edge_dof] == 2);
    // strictly inside the first subdomain
    const index_t inner = grid.dof(2, 2);
    CHECK(d.classes[inner].kind == DofKind::interior);
    CHECK(d.multiplicity[inner] == 1);
    CHECK(d.weights[0][0] == 1.0);  // interior prefix carries weight 1
}

TEST_CASE("class counts match the enumeration formulas") {
    for (index_t k : {2, 3, 4}) {
        for (index_t m : {2, 4, 5}) {
            const StructuredGrid grid(k * m);
            const Decomposition d = build_decomposition(grid, k);
            index_t corners = 0, edge_dofs = 0;
            std::vector<bool> edge_seen(2 * k * (k - 1), false);
            for (const DofClass& c : d.classes) {
                if (c.kind == DofKind::corner) ++corners;
                if (c.kind == DofKind::edge) {
                    ++edge_dofs;
                    edge_seen[c.entity] = true;
                }
            }
            CHECK(corners == (k - 1) * (k - 1));
            CHECK(edge_dofs == 2 * k * (k - 1) * (m - 1));
            for (bool seen : edge_seen) CHECK(seen);
        }
    }
}

TEST_CASE("weights follow 1/multiplicity") {
    const StructuredGrid grid(12);
    const Decomposition d = build_decomposition(grid, 3);
    for (index_t i = 0; i < d.n_subdomains; ++i) {
        const auto& dofs = d.subdomain_dofs[i];
        for (std::size_t l = 0; l < dofs.size(); ++l) {
            const DofClass& c = d.classes[dofs[l]];
            if (c.kind == DofKind::interior) CHECK(d.weights[i][l] == 1.0);
            if (c.kind == DofKind::edge) CHECK(d.weights[i][l] == 0.5);
            if (c.kind == DofKind::corner) CHECK(d.weights[i][l] == 0.25);
        }
    }
}

TEST_CASE("partition of unity reconstructs any vector") {
    std::mt19937 rng(3);
    for (index_t k : {2, 3}) {
        const StructuredGrid grid(4 * k);
        const Decomposition d = build_decomposition(grid, k);
        const std::vector<double> x = random_vector(grid.free_dofs, rng);
        std::vector<double> sum(grid.free_dofs, 0.0);
        for (index_t i = 0; i < d.n_subdomains; ++i) {
            std::vector<double> local = restrict_to_subdomain(d, i, x);
            for (std::size_t l = 0; l < local.size(); ++l) local[l] *= d.weights[i][l];
            prolong_add(d, i, local, sum);
        }
        for (index_t j = 0; j < grid.free_dofs; ++j) {
            CHECK(std::abs(sum[j] - x[j]) <= 1e-14);
        }
    }
}

TEST_CASE("splitting identity: A x equals the local scatter-add") {
    std::mt19937 rng(7);
    for (index_t k : {2, 3}) {
        const StructuredGrid grid(4 * k);
        const PoissonProblem problem = assemble_poisson(grid, k);
        const Decomposition& d = problem.decomposition;
        const std::vector<double> x = random_vector(grid.free_dofs, rng);
        const std::vector<double> ax = spmv(problem.global_matrix, x);
        std::vector<double> sum(grid.free_dofs, 0.0);
        for (index_t i = 0; i < d.n_subdomains; ++i) {
            const std::vector<double> local = restrict_to_subdomain(d, i, x);
            const std::vector<double> applied = spmv(problem.local_matrices[i], local);
            prolong_add(d, i, applied, sum);
        }
        const double scale = norm_inf(ax);
        for (index_t j = 0; j < grid.free_dofs; ++j) {
            CHECK(std::abs(sum[j] - ax[j]) <= 1e-13 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("local matrices are symmetric and PSD; constants only for floating") {
    const StructuredGrid grid(6);  // k=3, m=2: small enough for the eigen oracle
    const PoissonProblem problem = assemble_poisson(grid, 3);
    for (index_t i = 0; i < 9; ++i) {
        const DenseMatrix A = densify(problem.local_matrices[i]);
        for (index_t r = 0; r < A.nrows; ++r) {
            for (index_t c = 0; c < A.ncols; ++c) {
                CHECK(std::abs(A(r, c) - A(c, r)) <= 1e-15);
            }
        }
        const std::vector<double> eig = jacobi_eigenvalues(A);
        CHECK(eig.front() >= -1e-12);
        const bool floating = i == 4;  // center subdomain touches no boundary
        if (floating) {
            CHECK(std::abs(eig.front()) <= 1e-12);  // constants in the null space
            CHECK(eig[1] > 1e-8);
            std::vector<double> ones(A.nrows, 1.0);
            const std::vector<double> r = spmv(problem.local_matrices[i], ones);
            CHECK(norm_inf(r) <= 1e-13);
        } else {
            CHECK(eig.front() > 1e-8);
        }
    }
}

TEST_CASE("constraint dimensions and rows") {
    for (index_t k : {2, 3}) {
        const StructuredGrid grid(4 * k);
        const Decomposition d = build_decomposition(grid, k);
        const ConstraintSet cs = build_constraints(d);
        const index_t expected = (k - 1) * (k - 1) + 2 * k * (k - 1);
        CHECK(cs.n_coarse == expected);  // k=2: 5, k=3: 16
        for (index_t i = 0; i < d.n_subdomains; ++i) {
            const CsrMatrix& C = cs.constraint_matrices[i];
            C.validate();
            REQUIRE(static_cast<index_t>(cs.primal_maps[i].size()) == C.nrows);
            // primal ids strictly increasing
            for (std::size_t r = 1; r < cs.primal_maps[i].size(); ++r) {
                CHECK(cs.primal_maps[i][r] > cs.primal_maps[i][r - 1]);
            }
            // corner rows are unit coordinate vectors; edge rows average to 1
            const std::vector<double> ones(C.ncols, 1.0);
            const std::vector<double> row_sums = spmv(C, ones);
            for (index_t r = 0; r < C.nrows; ++r) {
                CHECK(row_sums[r] == doctest::Approx(1.0).epsilon(1e-14));
                const index_t nnz_row = C.row_offsets[r + 1] - C.row_offsets[r];
                const bool corner_row =
                    cs.primal_maps[i][r] < (k - 1) * (k - 1);
                if (corner_row) {
                    CHECK(nnz_row == 1);
                    CHECK(C.values[C.row_offsets[r]] == 1.0);
                } else {
                    CHECK(nnz_row == 4 * k - 1 - 4 * k + 4);  // m - 1 = 3
                }
            }
        }
    }
}

TEST_CASE("restrict and prolong behave like gather and scatter-add") {
    const StructuredGrid grid(8);
    const Decomposition d = build_decomposition(grid, 2);

    // restrict-then-prolong of ones counts multiplicities
    std::vector<double> counts(grid.free_dofs, 0.0);
    const std::vector<double> ones(grid.free_dofs, 1.0);
    for (index_t i = 0; i < d.n_subdomains; ++i) {
        prolong_add(d, i, restrict_to_subdomain(d, i, ones), counts);
    }
    for (index_t j = 0; j < grid.free_dofs; ++j) {
        CHECK(counts[j] == static_cast<double>(d.multiplicity[j]));
    }

    // basis-vector gather
    std::vector<double> e(grid.free_dofs, 0.0);
    const index_t target = d.subdomain_dofs[0][3];
    e[target] = 1.0;
    const std::vector<double> local = restrict_to_subdomain(d, 0, e);
    for (std::size_t l = 0; l < local.size(); ++l) {
        CHECK(local[l] == (d.subdomain_dofs[0][l] == target ? 1.0 : 0.0));
    }

    CHECK_THROWS(restrict_to_subdomain(d, 0, std::vector<double>(3)));
    std::vector<double> wrong(grid.free_dofs);
    CHECK_THROWS(prolong_add(d, 0, std::vector<double>(3), wrong));
}

TEST_CASE("interior prefix holds exactly the multiplicity-one dofs") {
    const StructuredGrid grid(12);
    const Decomposition d = build_decomposition(grid, 3);
    for (index_t i = 0; i < d.n_subdomains; ++i) {
        const auto& dofs = d.subdomain_dofs[i];
        for (index_t l = 0; l < static_cast<index_t>(dofs.size()); ++l) {
            const bool interior = l < d.interior_counts[i];
            CHECK((d.multiplicity[dofs[l]] == 1) == interior);
        }
    }
}

TEST_CASE("degenerate layouts are rejected") {
    CHECK_THROWS(StructuredGrid(1));
    const StructuredGrid grid(8);
    CHECK_THROWS(build_decomposition(grid, 1));   // no interface
    CHECK_THROWS(build_decomposition(grid, 3));   // indivisible
    CHECK_THROWS(build_decomposition(grid, 8));   // quotient < 2
    CHECK_THROWS(assemble_poisson(grid, 5));
}

TEST_CASE("quadrature load reproduces second-order convergence") {
    // smoke sizes here; the full refinement study runs in the acceptance suite
    const auto forcing = [](double x, double y) {
        const double pi = 3.14159265358979323846;
        return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
    };
    double previous_error = -1.0;
    for (index_t n : {8, 16}) {
        const StructuredGrid grid(n);
        const PoissonProblem problem = assemble_poisson(grid, 2);
        const std::vector<double> b = quadrature_load(grid, forcing);
        const std::vector<double> x = dense_solve(densify(problem.global_matrix), b);
        const std::vector<double> exact = manufactured_solution(grid);
        double err = 0.0;
        for (index_t j = 0; j < grid.free_dofs; ++j) {
            err = std::max(err, std::abs(x[j] - exact[j]));
        }
        if (previous_error > 0.0) {
            CHECK(previous_error / err == doctest::Approx(4.0).epsilon(0.15));
        }
        previous_error = err;
    }
}
