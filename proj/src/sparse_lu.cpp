#include "bddc/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bddc/amd.hpp"
#include "bddc/equilibrate.hpp"

namespace bddc {
namespace {

// Column-major working factor: parallel index/value arrays per column.
struct ColumnFactor {
    std::vector<std::vector<index_t>> idx;
    std::vector<std::vector<double>> val;
};

// Depth-first search over the column graph of L, marking everything
// reachable from seed. Finished nodes are appended to topo (postorder), so
// topo reversed is a valid processing order for the triangular solve.
void reach_from(index_t seed, const ColumnFactor& L,
                std::span<const index_t> pinv, index_t stamp_value,
                std::vector<index_t>& stamp, std::vector<index_t>& topo,
                std::vector<std::pair<index_t, index_t>>& dfs_stack) {
    if (stamp[seed] == stamp_value) return;
    stamp[seed] = stamp_value;
    dfs_stack.clear();
    dfs_stack.emplace_back(seed, 0);
    while (!dfs_stack.empty()) {
        auto& [node, pos] = dfs_stack.back();
        const index_t col = pinv[node];
        const index_t deg =
            col >= 0 ? static_cast<index_t>(L.idx[col].size()) : 0;
        bool descended = false;
        while (pos < deg) {
            const index_t child = L.idx[col][pos++];
            if (stamp[child] != stamp_value) {
                stamp[child] = stamp_value;
                dfs_stack.emplace_back(child, 0);
                descended = true;
                break;
            }
        }
        if (!descended && pos >= deg) {
            topo.push_back(node);
            dfs_stack.pop_back();
        }
    }
}

CsrMatrix columns_to_csr(const ColumnFactor& C, index_t nrows) {
    const index_t ncols = static_cast<index_t>(C.idx.size());
    CsrMatrix M;
    M.nrows = nrows;
    M.ncols = ncols;
    M.row_offsets.assign(nrows + 1, 0);
    index_t total = 0;
    for (const auto& col : C.idx) total += static_cast<index_t>(col.size());
    M.col_indices.resize(total);
    M.values.resize(total);
    for (index_t k = 0; k < ncols; ++k) {
        for (index_t i : C.idx[k]) M.row_offsets[i + 1]++;
    }
    for (index_t i = 0; i < nrows; ++i) M.row_offsets[i + 1] += M.row_offsets[i];
    std::vector<index_t> next(M.row_offsets.begin(), M.row_offsets.end() - 1);
    for (index_t k = 0; k < ncols; ++k) {
        for (std::size_t p = 0; p < C.idx[k].size(); ++p) {
            const index_t q = next[C.idx[k][p]]++;
            M.col_indices[q] = k;
            M.values[q] = C.val[k][p];
        }
    }
    return M;
}

}  // namespace

SparseFactorization lu_factor(const CsrMatrix& A, const Permutation& fill_order,
                              double pivot_threshold,
                              std::span<const double> row_scale,
                              std::span<const double> col_scale) {
    if (A.nrows != A.ncols) {
        throw std::invalid_argument("lu_factor: matrix must be square");
    }
    if (!(pivot_threshold > 0.0) || pivot_threshold > 1.0) {
        throw std::invalid_argument("lu_factor: pivot_threshold must be in (0, 1]");
    }
    const index_t n = A.nrows;
    if (fill_order.size() != n ||
        static_cast<index_t>(row_scale.size()) != n ||
        static_cast<index_t>(col_scale.size()) != n) {
        throw std::invalid_argument("lu_factor: argument size mismatch");
    }

    // Columns of A: rows of the transpose.
    const CsrMatrix At = transpose(A);

    ColumnFactor L, U;
    L.idx.resize(n);
    L.val.resize(n);
    U.idx.resize(n);
    U.val.resize(n);

    std::vector<index_t> pinv(n, -1);       // original row -> pivot step
    std::vector<index_t> pivot_rows(n, -1); // pivot step -> original row
    std::vector<double> x(n, 0.0);          // dense accumulator
    std::vector<index_t> stamp(n, -1);
    std::vector<index_t> topo;
    std::vector<std::pair<index_t, index_t>> dfs_stack;
    index_t fallbacks = 0;

    for (index_t k = 0; k < n; ++k) {
        const index_t col = fill_order.forward[k];

        // Reach of the column pattern through the current L.
        topo.clear();
        for (index_t p = At.row_offsets[col]; p < At.row_offsets[col + 1]; ++p) {
            reach_from(At.col_indices[p], L, pinv, k, stamp, topo, dfs_stack);
        }
        // Scatter the scaled column, then eliminate in topological order.
        for (index_t i : topo) x[i] = 0.0;
        for (index_t p = At.row_offsets[col]; p < At.row_offsets[col + 1]; ++p) {
            const index_t i = At.col_indices[p];
            x[i] = At.values[p] * row_scale[i] * col_scale[col];
        }
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            const index_t i = *it;
            const index_t c = pinv[i];
            if (c < 0) continue;
            const double xi = x[i];
            if (xi == 0.0) continue;
            for (std::size_t p = 0; p < L.idx[c].size(); ++p) {
                x[L.idx[c][p]] -= L.val[c][p] * xi;
            }
        }

        // Threshold pivoting: keep the fill-order diagonal when large enough.
        double col_max = 0.0;
        index_t arg_max = -1;
        for (index_t i : topo) {
            if (pinv[i] >= 0) continue;
            const double a = std::abs(x[i]);
            if (a > col_max || (a == col_max && arg_max >= 0 && i < arg_max)) {
                col_max = a;
                arg_max = i;
            }
        }
        if (arg_max < 0 || col_max == 0.0) {
            throw std::runtime_error("lu_factor: singular matrix at elimination step " +
                                     std::to_string(k));
        }
        index_t pivot_row = arg_max;
        if (pinv[col] < 0 && std::abs(x[col]) >= pivot_threshold * col_max) {
            pivot_row = col;
        } else {
            ++fallbacks;
        }

        const double pivot = x[pivot_row];
        pinv[pivot_row] = k;
        pivot_rows[k] = pivot_row;

        // Split the worked column into U (pivotal rows) and L (the rest).
        U.idx[k].reserve(topo.size());
        for (index_t i : topo) {
            if (i == pivot_row || x[i] == 0.0) continue;
            if (pinv[i] >= 0) {
                U.idx[k].push_back(pinv[i]);
                U.val[k].push_back(x[i]);
            } else {
                L.idx[k].push_back(i);
                L.val[k].push_back(x[i] / pivot);
            }
        }
        U.idx[k].push_back(k);
        U.val[k].push_back(pivot);
    }

    // Remap L's row indices into pivot coordinates.
    for (index_t k = 0; k < n; ++k) {
        for (index_t& i : L.idx[k]) i = pinv[i];
    }

    SparseFactorization F;
    F.lower = columns_to_csr(L, n);
    F.upper = columns_to_csr(U, n);
    F.row_perm = Permutation::from_forward(std::move(pivot_rows));
    F.col_perm = fill_order;
    F.row_scale.assign(row_scale.begin(), row_scale.end());
    F.col_scale.assign(col_scale.begin(), col_scale.end());
    F.pivot_fallbacks = fallbacks;
    return F;
}

SparseFactorization lu_factor(const CsrMatrix& A, const Permutation& fill_order,
                              double pivot_threshold) {
    const std::vector<double> ones(A.nrows, 1.0);
    return lu_factor(A, fill_order, pivot_threshold, ones, ones);
}

std::vector<double> lu_solve(const SparseFactorization& F,
                             std::span<const double> b) {
    const index_t n = F.size();
    if (static_cast<index_t>(b.size()) != n) {
        throw std::invalid_argument("lu_solve: right-hand side size mismatch");
    }
    // Forward: L y = P_r D_r b (unit diagonal).
    std::vector<double> y(n);
    for (index_t k = 0; k < n; ++k) {
        const index_t orig = F.row_perm.forward[k];
        double acc = b[orig] * F.row_scale[orig];
        for (index_t p = F.lower.row_offsets[k]; p < F.lower.row_offsets[k + 1]; ++p) {
            acc -= F.lower.values[p] * y[F.lower.col_indices[p]];
        }
        y[k] = acc;
    }
    // Backward: U z = y; the diagonal is the first entry of each sorted row.
    std::vector<double> z(n);
    for (index_t k = n - 1; k >= 0; --k) {
        const index_t begin = F.upper.row_offsets[k];
        const index_t end = F.upper.row_offsets[k + 1];
        double acc = y[k];
        for (index_t p = begin + 1; p < end; ++p) {
            acc -= F.upper.values[p] * z[F.upper.col_indices[p]];
        }
        z[k] = acc / F.upper.values[begin];
    }
    // Undo column order and scaling: x = D_c P_c z.
    std::vector<double> xres(n);
    for (index_t k = 0; k < n; ++k) {
        const index_t col = F.col_perm.forward[k];
        xres[col] = F.col_scale[col] * z[k];
    }
    return xres;
}

SparseFactorization factorize(const CsrMatrix& A, double pivot_threshold) {
    const Scaling s = equilibrate(A);
    const Permutation order = amd_order(A);
    return lu_factor(A, order, pivot_threshold, s.row_scale, s.col_scale);
}

}  // namespace bddc
