// Acceptance suite: end-to-end gates for the solver stack, one pass/fail
// line per criterion. Exit code is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bddc/decomposition.hpp"
#include "bddc/pcg.hpp"
#include "bddc/preconditioner.hpp"
#include "bddc/sparse_lu.hpp"
#include "bddc/study.hpp"
#include "bddc/vector_ops.hpp"
#include "bddc_dense_oracle.hpp"
#include "oracle_helpers.hpp"

using namespace bddc;
using namespace bddc::testing;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s: %s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    if (!pass) ++failures;
}

struct SweepResult {
    std::vector<index_t> ks;
    std::vector<index_t> bddc_iterations;
    std::vector<index_t> plain_iterations;
    std::vector<std::vector<double>> bddc_histories;
    // worst saddle-point identity residuals over all subdomains (criterion 4)
    double worst_cphi = 0.0;
    double worst_first_block = 0.0;
    // worst direct-solve residual over all saddle/interior systems (criterion 5)
    double worst_solve_residual = 0.0;
    // worst splitting / partition-of-unity defects (criterion 6)
    double worst_partition = 0.0;
    double worst_splitting = 0.0;
};

double matrix_inf_norm(const CsrMatrix& A) {
    double norm = 0.0;
    for (index_t i = 0; i < A.nrows; ++i) {
        double row = 0.0;
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            row += std::abs(A.values[p]);
        }
        norm = std::max(norm, row);
    }
    return norm;
}

double relative_solve_residual(const CsrMatrix& A, std::span<const double> x,
                               std::span<const double> b) {
    const std::vector<double> Ax = spmv(A, x);
    double err = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        err = std::max(err, std::abs(Ax[i] - b[i]));
    }
    return err / (matrix_inf_norm(A) * norm_inf(x) + norm_inf(b));
}

CsrMatrix saddle_matrix(const CsrMatrix& A, const CsrMatrix& C) {
    std::vector<Triplet> entries;
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            entries.push_back({i, A.col_indices[p], A.values[p]});
        }
    }
    for (index_t r = 0; r < C.nrows; ++r) {
        for (index_t p = C.row_offsets[r]; p < C.row_offsets[r + 1]; ++p) {
            entries.push_back({A.nrows + r, C.col_indices[p], C.values[p]});
            entries.push_back({C.col_indices[p], A.nrows + r, C.values[p]});
        }
    }
    const index_t n = A.nrows + C.nrows;
    return CsrMatrix::from_triplets(n, n, std::move(entries));
}

// Saddle-point identities of one subdomain, via sparse products.
void check_subdomain(const SubdomainData& sub, SweepResult& sweep,
                     std::mt19937& rng) {
    const index_t nl = sub.matrix.nrows;
    const index_t nc = sub.constraints.nrows;
    const CsrMatrix constraints_t = transpose(sub.constraints);
    std::vector<double> phi_col(nl), lambda_col(nc);
    for (index_t j = 0; j < nc; ++j) {
        for (index_t l = 0; l < nl; ++l) phi_col[l] = sub.coarse_basis(l, j);
        for (index_t r = 0; r < nc; ++r) lambda_col[r] = sub.multipliers(r, j);
        const std::vector<double> cphi = spmv(sub.constraints, phi_col);
        for (index_t r = 0; r < nc; ++r) {
            sweep.worst_cphi = std::max(
                sweep.worst_cphi, std::abs(cphi[r] - (r == j ? 1.0 : 0.0)));
        }
        const std::vector<double> a_phi = spmv(sub.matrix, phi_col);
        const std::vector<double> ct_lambda = spmv(constraints_t, lambda_col);
        const double scale = matrix_inf_norm(sub.matrix);
        for (index_t l = 0; l < nl; ++l) {
            sweep.worst_first_block = std::max(
                sweep.worst_first_block, std::abs(a_phi[l] + ct_lambda[l]) / scale);
        }
    }

    // direct-solve residual gates on the systems this subdomain owns
    const CsrMatrix saddle = saddle_matrix(sub.matrix, sub.constraints);
    const std::vector<double> bs = random_vector(saddle.nrows, rng);
    sweep.worst_solve_residual =
        std::max(sweep.worst_solve_residual,
                 relative_solve_residual(saddle, lu_solve(sub.saddle_factorization, bs), bs));
    const index_t ni = sub.interior_factorization.size();
    if (ni > 0) {
        const CsrMatrix interior = principal_submatrix(sub.matrix, ni);
        const std::vector<double> bi = random_vector(ni, rng);
        sweep.worst_solve_residual =
            std::max(sweep.worst_solve_residual,
                     relative_solve_residual(interior, lu_solve(sub.interior_factorization, bi), bi));
    }
}

SweepResult run_sweep(index_t workers) {
    SweepResult sweep;
    sweep.ks = {2, 3, 4, 5, 6, 8};
    const index_t m = 32;
    std::mt19937 check_rng(12345);
    for (index_t k : sweep.ks) {
        const StructuredGrid grid(k * m);
        const PoissonProblem problem = assemble_poisson(grid, k);
        const ConstraintSet cs = build_constraints(problem.decomposition);
        const Preconditioner preconditioner(problem.global_matrix,
                                            problem.local_matrices,
                                            problem.decomposition, cs, workers);
        for (const SubdomainData& sub : preconditioner.subdomains()) {
            check_subdomain(sub, sweep, check_rng);
        }

        // splitting and partition-of-unity identities at this (k, m)
        {
            const Decomposition& d = problem.decomposition;
            const std::vector<double> x = random_vector(grid.free_dofs, check_rng);
            std::vector<double> partition(grid.free_dofs, 0.0);
            std::vector<double> scattered(grid.free_dofs, 0.0);
            for (index_t i = 0; i < d.n_subdomains; ++i) {
                std::vector<double> local = restrict_to_subdomain(d, i, x);
                const std::vector<double> applied = spmv(problem.local_matrices[i], local);
                prolong_add(d, i, applied, scattered);
                for (std::size_t l = 0; l < local.size(); ++l) local[l] *= d.weights[i][l];
                prolong_add(d, i, local, partition);
            }
            const std::vector<double> ax = spmv(problem.global_matrix, x);
            for (index_t j = 0; j < grid.free_dofs; ++j) {
                sweep.worst_partition =
                    std::max(sweep.worst_partition, std::abs(partition[j] - x[j]));
                sweep.worst_splitting = std::max(
                    sweep.worst_splitting,
                    std::abs(scattered[j] - ax[j]) / std::max(1.0, norm_inf(ax)));
            }
        }

        const std::vector<double> b = study_rhs(grid.free_dofs, 1);
        SolverOptions opts;
        opts.rel_tolerance = 1e-8;
        opts.max_iterations = 10000;
        opts.record_history = true;

        std::vector<double> x;
        const SolveReport bddc_report =
            pcg(problem.global_matrix, b,
                [&](std::span<const double> r, std::span<double> z) {
                    const std::vector<double> result = preconditioner.apply(r);
                    std::copy(result.begin(), result.end(), z.begin());
                },
                opts, x);
        const SolveReport plain_report = pcg(problem.global_matrix, b, {}, opts, x);
        sweep.bddc_iterations.push_back(bddc_report.iterations);
        sweep.plain_iterations.push_back(plain_report.iterations);
        sweep.bddc_histories.push_back(bddc_report.residual_history);
    }
    return sweep;
}

std::string join(const std::vector<index_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

DenseMatrix densify_apply(const Preconditioner& p, index_t n) {
    DenseMatrix M(n, n);
    std::vector<double> e(n, 0.0);
    for (index_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = p.apply(e);
        e[j] = 0.0;
        for (index_t i = 0; i < n; ++i) M(i, j) = col[i];
    }
    return M;
}

struct SmallSetup {
    PoissonProblem problem;
    ConstraintSet constraints;
    Preconditioner preconditioner;
    SmallSetup(index_t k, index_t m)
        : problem(assemble_poisson(StructuredGrid(k * m), k)),
          constraints(build_constraints(problem.decomposition)),
          preconditioner(problem.global_matrix, problem.local_matrices,
                         problem.decomposition, constraints, 1) {}
};

}  // namespace

int main() {
    // ---- criterion 1: iteration flatness, plus data for criteria 4-6, 8 ----
    const SweepResult sweep = run_sweep(1);
    {
        bool flat = true, small = true, increasing = true;
        index_t lo = sweep.bddc_iterations[0], hi = sweep.bddc_iterations[0];
        for (index_t it : sweep.bddc_iterations) {
            lo = std::min(lo, it);
            hi = std::max(hi, it);
            if (it > 5) small = false;
        }
        if (hi - lo > 4) flat = false;  // "constant within +-2"
        for (std::size_t i = 1; i < sweep.plain_iterations.size(); ++i) {
            if (sweep.plain_iterations[i] <= sweep.plain_iterations[i - 1]) {
                increasing = false;
            }
        }
        const bool ratio =
            sweep.plain_iterations.back() >= 10 * sweep.bddc_iterations.back();
        report(1, flat && small && increasing && ratio,
               "iteration flatness at m=32, tol 1e-8",
               "bddc={" + join(sweep.bddc_iterations) + "} (<=5: " +
                   (small ? "yes" : "no") + ", within +-2: " + (flat ? "yes" : "no") +
                   "), plain={" + join(sweep.plain_iterations) +
                   "} (strictly increasing: " + (increasing ? "yes" : "no") +
                   ", >=10x at k=8: " + (ratio ? "yes" : "no") + ")");
    }

    // ---- criterion 2: oracle equivalence at k=2, m=4 ----
    try {
        const SmallSetup s(2, 4);
        const index_t n = s.problem.decomposition.global_dofs;
        const DenseMatrix M = densify_apply(s.preconditioner, n);
        const DenseMatrix expected = DenseOracle(s.problem, s.constraints).full();
        double worst = 0.0;
        for (index_t i = 0; i < n; ++i) {
            for (index_t j = 0; j < n; ++j) {
                worst = std::max(worst, std::abs(M(i, j) - expected(i, j)));
            }
        }
        char detail[96];
        std::snprintf(detail, sizeof detail, "max entrywise gap %.3e (gate 1e-9)", worst);
        report(2, worst <= 1e-9, "matrix-free apply equals the dense-assembled operator", detail);
    } catch (const std::exception& e) {
        report(2, false, "matrix-free apply equals the dense-assembled operator", e.what());
    }

    // ---- criterion 3: symmetry and definiteness ----
    try {
        double worst_asym = 0.0, min_eig = 1e300;
        for (index_t k : {2, 3}) {
            const SmallSetup s(k, 4);
            const index_t n = s.problem.decomposition.global_dofs;
            const DenseMatrix M = densify_apply(s.preconditioner, n);
            for (index_t i = 0; i < n; ++i) {
                for (index_t j = 0; j < n; ++j) {
                    worst_asym = std::max(worst_asym, std::abs(M(i, j) - M(j, i)));
                }
            }
            min_eig = std::min(min_eig, jacobi_eigenvalues(M).front());
        }

        const SmallSetup big(6, 16);
        const index_t n = big.problem.decomposition.global_dofs;
        // crude largest-eigenvalue estimate of the preconditioner
        std::mt19937 rng(77);
        std::vector<double> v = random_vector(n, rng);
        double lambda_max = 1.0;
        for (int step = 0; step < 20; ++step) {
            std::vector<double> w = big.preconditioner.apply(v);
            lambda_max = norm2(w) / norm2(v);
            const double scale = 1.0 / norm2(w);
            for (double& value : w) value *= scale;
            v = std::move(w);
        }
        double worst_bilinear = 0.0;
        for (int pair = 0; pair < 20; ++pair) {
            const std::vector<double> r = random_vector(n, rng);
            const std::vector<double> q = random_vector(n, rng);
            const double gap = std::abs(dot(q, big.preconditioner.apply(r)) -
                                        dot(r, big.preconditioner.apply(q)));
            worst_bilinear =
                std::max(worst_bilinear, gap / (norm2(r) * norm2(q) * lambda_max));
        }
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "densified asym %.3e (gate 1e-8), min eig %.4f, bilinear %.3e (gate 1e-8)",
                      worst_asym, min_eig, worst_bilinear);
        report(3, worst_asym <= 1e-8 && min_eig > 0.0 && worst_bilinear <= 1e-8,
               "preconditioner symmetry and definiteness", detail);
    } catch (const std::exception& e) {
        report(3, false, "preconditioner symmetry and definiteness", e.what());
    }

    // ---- criterion 4: saddle-point identities on every acceptance subdomain ----
    {
        char detail[128];
        std::snprintf(detail, sizeof detail,
                      "max |C phi - I| = %.3e, max |A phi + C^T lambda|/|A| = %.3e (gates 1e-10)",
                      sweep.worst_cphi, sweep.worst_first_block);
        report(4, sweep.worst_cphi <= 1e-10 && sweep.worst_first_block <= 1e-10,
               "coarse-basis saddle identities", detail);
    }

    // ---- criterion 5: direct solver residual gate ----
    try {
        double worst = sweep.worst_solve_residual;
        std::mt19937 rng(4242);
        for (int trial = 0; trial < 100; ++trial) {
            const CsrMatrix S = random_saddle_matrix(8 + trial % 12, 2 + trial % 4, rng);
            const std::vector<double> b = random_vector(S.nrows, rng);
            const std::vector<double> x = lu_solve(factorize(S), b);
            worst = std::max(worst, relative_solve_residual(S, x, b));
        }
        char detail[96];
        std::snprintf(detail, sizeof detail, "worst relative residual %.3e (gate 1e-10)", worst);
        report(5, worst <= 1e-10, "sparse LU residuals on saddle and interior systems", detail);
    } catch (const std::exception& e) {
        report(5, false, "sparse LU residuals on saddle and interior systems", e.what());
    }

    // ---- criterion 6: splitting and partition-of-unity identities ----
    {
        char detail[96];
        std::snprintf(detail, sizeof detail,
                      "partition defect %.3e, splitting defect %.3e (gates 1e-13)",
                      sweep.worst_partition, sweep.worst_splitting);
        report(6, sweep.worst_partition <= 1e-13 && sweep.worst_splitting <= 1e-13,
               "restriction/weight identities at m=32", detail);
    }

    // ---- criterion 7: Q1 second-order convergence ----
    try {
        const auto forcing = [](double x, double y) {
            const double pi = 3.14159265358979323846;
            return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
        };
        std::vector<double> errors;
        for (index_t n : {16, 32, 64, 128}) {
            const StructuredGrid grid(n);
            const PoissonProblem problem = assemble_poisson(grid, 2);
            const std::vector<double> b = quadrature_load(grid, forcing);
            const std::vector<double> u = lu_solve(factorize(problem.global_matrix), b);
            const std::vector<double> exact = manufactured_solution(grid);
            double err = 0.0;
            for (index_t j = 0; j < grid.free_dofs; ++j) {
                err = std::max(err, std::abs(u[j] - exact[j]));
            }
            errors.push_back(err);
        }
        bool ok = true;
        std::string ratios;
        for (std::size_t i = 1; i < errors.size(); ++i) {
            const double ratio = errors[i - 1] / errors[i];
            char buf[16];
            std::snprintf(buf, sizeof buf, "%s%.3f", i > 1 ? "," : "", ratio);
            ratios += buf;
            if (ratio < 3.5 || ratio > 4.5) ok = false;
        }
        report(7, ok, "Q1 discretization converges at second order",
               "refinement ratios {" + ratios + "} (gate [3.5, 4.5])");
    } catch (const std::exception& e) {
        report(7, false, "Q1 discretization converges at second order", e.what());
    }

    // ---- criterion 8: determinism across worker counts ----
    try {
        const SweepResult threaded = run_sweep(4);
        bool identical = threaded.bddc_iterations == sweep.bddc_iterations &&
                         threaded.plain_iterations == sweep.plain_iterations;
        for (std::size_t i = 0; identical && i < sweep.bddc_histories.size(); ++i) {
            identical = threaded.bddc_histories[i] == sweep.bddc_histories[i];
        }
        report(8, identical, "worker count never changes iterations or residuals",
               identical ? "workers {1,4} produced bit-identical histories"
                         : "histories diverged between worker counts");
    } catch (const std::exception& e) {
        report(8, false, "worker count never changes iterations or residuals", e.what());
    }

    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures;
}
