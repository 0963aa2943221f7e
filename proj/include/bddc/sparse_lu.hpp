/// @file sparse_lu.hpp
/// @brief Sparse LU factorization with threshold partial pivoting, used for
/// every direct solve in the preconditioner (saddle-point and interior
/// systems).

#ifndef BDDC_SPARSE_LU_HPP
#define BDDC_SPARSE_LU_HPP

#include <span>
#include <vector>

#include "bddc/csr_matrix.hpp"
#include "bddc/permutation.hpp"

namespace bddc {

/// Factorization P_r D_r A D_c P_c = L U.
///
/// lower is strictly lower triangular with an implicit unit diagonal, upper
/// is upper triangular with nonzero diagonal; both live in the pivot-ordered
/// coordinates. row_perm.forward[k] is the original row pivoting step k,
/// col_perm is the fill-reducing column order.
struct SparseFactorization {
    CsrMatrix lower;
    CsrMatrix upper;
    Permutation row_perm;
    Permutation col_perm;
    std::vector<double> row_scale;
    std::vector<double> col_scale;
    /// Columns where the fill-order diagonal failed the threshold test and an
    /// off-diagonal partial pivot was taken instead.
    index_t pivot_fallbacks = 0;

    index_t size() const { return lower.nrows; }
};

/// Left-looking column LU of the unscaled matrix. Columns are processed in
/// fill_order; within a column the fill-order diagonal is kept when its
/// magnitude is at least pivot_threshold times the column maximum, otherwise
/// the column falls back to plain partial pivoting.
///
/// Throws std::invalid_argument on bad arguments and std::runtime_error
/// naming the elimination step when no nonzero pivot exists.
SparseFactorization lu_factor(const CsrMatrix& A, const Permutation& fill_order,
                              double pivot_threshold);

/// Same with explicit row/column scaling applied to A first.
SparseFactorization lu_factor(const CsrMatrix& A, const Permutation& fill_order,
                              double pivot_threshold,
                              std::span<const double> row_scale,
                              std::span<const double> col_scale);

/// x with A x = b for the original matrix.
std::vector<double> lu_solve(const SparseFactorization& F,
                             std::span<const double> b);

/// Full pipeline: equilibrate, AMD order, factor with threshold 0.1.
SparseFactorization factorize(const CsrMatrix& A, double pivot_threshold = 0.1);

}  // namespace bddc

#endif
