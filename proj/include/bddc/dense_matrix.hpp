/// @file dense_matrix.hpp
/// @brief Row-major dense matrix; carrier for coarse bases and coarse blocks.

#ifndef BDDC_DENSE_MATRIX_HPP
#define BDDC_DENSE_MATRIX_HPP

#include <span>
#include <vector>

#include "bddc/csr_matrix.hpp"

namespace bddc {

/// Dense row-major matrix. The per-subdomain primal dimension is small, so
/// coarse bases and coarse blocks stay dense.
struct DenseMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<double> values;  // row-major, nrows * ncols

    DenseMatrix() = default;
    DenseMatrix(index_t r, index_t c) : nrows(r), ncols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(index_t i, index_t j) { return values[static_cast<std::size_t>(i) * ncols + j]; }
    double operator()(index_t i, index_t j) const { return values[static_cast<std::size_t>(i) * ncols + j]; }
};

/// y = P x
std::vector<double> dense_apply(const DenseMatrix& P, std::span<const double> x);
/// y = P^T x
std::vector<double> dense_apply_transposed(const DenseMatrix& P, std::span<const double> x);

/// P^T A Q with sparse middle factor.
DenseMatrix dense_triple_product(const DenseMatrix& P, const CsrMatrix& A,
                                 const DenseMatrix& Q);

}  // namespace bddc

#endif
