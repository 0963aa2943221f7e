#include "bddc/dense_matrix.hpp"

#include <stdexcept>

namespace bddc {

std::vector<double> dense_apply(const DenseMatrix& P, std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != P.ncols) {
        throw std::invalid_argument("dense_apply: dimension mismatch");
    }
    std::vector<double> y(P.nrows, 0.0);
    for (index_t i = 0; i < P.nrows; ++i) {
        double acc = 0.0;
        for (index_t j = 0; j < P.ncols; ++j) acc += P(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> dense_apply_transposed(const DenseMatrix& P,
                                           std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != P.nrows) {
        throw std::invalid_argument("dense_apply_transposed: dimension mismatch");
    }
    std::vector<double> y(P.ncols, 0.0);
    for (index_t i = 0; i < P.nrows; ++i) {
        for (index_t j = 0; j < P.ncols; ++j) y[j] += P(i, j) * x[i];
    }
    return y;
}

DenseMatrix dense_triple_product(const DenseMatrix& P, const CsrMatrix& A,
                                 const DenseMatrix& Q) {
    if (P.nrows != A.nrows || A.ncols != Q.nrows) {
        throw std::invalid_argument("dense_triple_product: dimension mismatch");
    }
    // T = A Q, then P^T T
    DenseMatrix T(A.nrows, Q.ncols);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            const index_t k = A.col_indices[p];
            const double a = A.values[p];
            for (index_t j = 0; j < Q.ncols; ++j) T(i, j) += a * Q(k, j);
        }
    }
    DenseMatrix R(P.ncols, Q.ncols);
    for (index_t i = 0; i < P.nrows; ++i) {
        for (index_t r = 0; r < P.ncols; ++r) {
            const double p = P(i, r);
            if (p == 0.0) continue;
            for (index_t j = 0; j < Q.ncols; ++j) R(r, j) += p * T(i, j);
        }
    }
    return R;
}

}  // namespace bddc
