/// @file csr_matrix.hpp
/// @brief Compressed-row sparse matrix storage and kernels.

#ifndef BDDC_CSR_MATRIX_HPP
#define BDDC_CSR_MATRIX_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace bddc {

using index_t = std::int32_t;

/// One (row, col, value) entry; duplicates are summed on assembly.
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Sparse matrix in compressed-row storage with owned buffers.
///
/// Invariants: row_offsets is non-decreasing with row_offsets[0] = 0 and
/// row_offsets[nrows] = nnz; within each row the column indices are strictly
/// increasing and < ncols; no explicit duplicates.
struct CsrMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_offsets;  // size nrows + 1
    std::vector<index_t> col_indices;
    std::vector<double> values;

    CsrMatrix() : row_offsets(1, 0) {}

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    /// Checks the storage invariants; throws std::invalid_argument on the
    /// first violation.
    void validate() const;

    static CsrMatrix identity(index_t n);

    /// Builds a matrix from unordered triplets, summing duplicates.
    static CsrMatrix from_triplets(index_t nrows, index_t ncols,
                                   std::vector<Triplet> entries);
};

/// y = A x.
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);

CsrMatrix transpose(const CsrMatrix& A);

/// Leading size x size principal block (local dofs are ordered interior
/// first, so this extracts interior blocks).
CsrMatrix principal_submatrix(const CsrMatrix& A, index_t size);

/// Entry lookup by binary search within the row; zero when absent.
double csr_entry(const CsrMatrix& A, index_t row, index_t col);

}  // namespace bddc

#endif
