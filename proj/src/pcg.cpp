#include "bddc/pcg.hpp"

#include <cmath>
#include <stdexcept>

#include "bddc/vector_ops.hpp"

namespace bddc {
namespace {

void check_options(const SolverOptions& opts) {
    if (!(opts.rel_tolerance > 0.0) || opts.abs_tolerance < 0.0) {
        throw std::invalid_argument("pcg: tolerances must be positive");
    }
    if (opts.max_iterations < 1) {
        throw std::invalid_argument("pcg: max_iterations must be at least 1");
    }
}

// Spot check a handful of entries of A against their transposed partners.
void sampled_symmetry_check(const CsrMatrix& A) {
    if (A.nrows != A.ncols) {
        throw std::invalid_argument("pcg: matrix must be square");
    }
    const index_t stride = std::max<index_t>(1, A.nrows / 16);
    for (index_t i = 0; i < A.nrows; i += stride) {
        if (A.row_offsets[i] == A.row_offsets[i + 1]) continue;
        const index_t p = A.row_offsets[i];
        const index_t j = A.col_indices[p];
        const double a = A.values[p];
        const double b = csr_entry(A, j, i);
        if (std::abs(a - b) > 1e-12 * (std::abs(a) + std::abs(b)) + 1e-300) {
            throw std::invalid_argument("pcg: matrix is not symmetric");
        }
    }
}

}  // namespace

SolveReport pcg(const CsrMatrix& A, std::span<const double> b,
                const PreconditionerFn& M, const SolverOptions& opts,
                std::vector<double>& x) {
    check_options(opts);
    sampled_symmetry_check(A);
    if (static_cast<index_t>(b.size()) != A.nrows) {
        throw std::invalid_argument("pcg: right-hand side size mismatch");
    }
    ensure_finite(b, "pcg rhs");

    const index_t n = A.nrows;
    SolveReport report;
    x.assign(n, 0.0);

    const double norm_b = norm2(b);
    if (opts.record_history) report.residual_history.push_back(1.0);
    if (norm_b == 0.0) {
        report.converged = true;
        return report;
    }

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), p(n), q(n);
    if (M) {
        M(r, z);
    } else {
        z.assign(r.begin(), r.end());
    }
    p = z;
    double rho = dot(r, z);

    std::vector<double> alphas, betas;
    double rel = 1.0;
    for (index_t it = 1; it <= opts.max_iterations; ++it) {
        spmv(A, p, q);
        const double curvature = dot(p, q);
        if (curvature <= 0.0) {
            throw std::runtime_error("matrix not SPD");
        }
        const double alpha = rho / curvature;
        alphas.push_back(alpha);
        axpy(alpha, p, x);
        axpy(-alpha, q, r);

        rel = norm2(r) / norm_b;
        if (opts.record_history) report.residual_history.push_back(rel);
        report.iterations = it;
        if (rel <= opts.rel_tolerance ||
            (opts.abs_tolerance > 0.0 && rel * norm_b <= opts.abs_tolerance)) {
            report.converged = true;
            break;
        }
        if (it == opts.max_iterations) break;

        if (M) {
            M(r, z);
        } else {
            z.assign(r.begin(), r.end());
        }
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        betas.push_back(beta);
        rho = rho_next;
        for (index_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    report.final_relative_residual = rel;
    report.condition_estimate = condition_estimate(alphas, betas);
    return report;
}

std::optional<double> condition_estimate(std::span<const double> alphas,
                                         std::span<const double> betas) {
    const std::size_t k = alphas.size();
    if (k < 2 || betas.size() + 1 < k) return std::nullopt;
    // Lanczos tridiagonal recovered from the CG coefficients.
    std::vector<double> diag(k), off(k - 1);
    for (std::size_t i = 0; i < k; ++i) {
        diag[i] = 1.0 / alphas[i];
        if (i > 0) diag[i] += betas[i - 1] / alphas[i - 1];
        if (i + 1 < k) off[i] = std::sqrt(betas[i]) / alphas[i];
    }
    const auto [lo, hi] = tridiagonal_extreme_eigenvalues(diag, off);
    if (!(lo > 0.0)) return std::nullopt;
    return hi / lo;
}

std::pair<double, double> tridiagonal_extreme_eigenvalues(
    std::span<const double> diag, std::span<const double> offdiag) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("tridiagonal: empty matrix");
    if (offdiag.size() + 1 != n) {
        throw std::invalid_argument("tridiagonal: offdiagonal size mismatch");
    }
    if (n == 1) return {diag[0], diag[0]};

    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(offdiag[i - 1]);
        if (i + 1 < n) radius += std::abs(offdiag[i]);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }

    // Number of eigenvalues below x, by Sturm sequence.
    auto count_below = [&](double x) {
        std::size_t count = 0;
        double q = 1.0;
        const double tiny = 1e-300;
        for (std::size_t i = 0; i < n; ++i) {
            const double off2 = i > 0 ? offdiag[i - 1] * offdiag[i - 1] : 0.0;
            q = diag[i] - x - off2 / q;
            if (q == 0.0) q = tiny;
            if (q < 0.0) ++count;
        }
        return count;
    };

    auto bisect = [&](std::size_t target) {
        double a = lo, b = hi;
        for (int step = 0; step < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++step) {
            const double mid = 0.5 * (a + b);
            if (count_below(mid) >= target) {
                b = mid;
            } else {
                a = mid;
            }
        }
        return 0.5 * (a + b);
    };

    return {bisect(1), bisect(n)};
}

}  // namespace bddc
