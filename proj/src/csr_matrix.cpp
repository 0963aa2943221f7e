#include "bddc/csr_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bddc {

void CsrMatrix::validate() const {
    if (nrows < 0 || ncols < 0) {
        throw std::invalid_argument("csr: negative dimension");
    }
    if (static_cast<index_t>(row_offsets.size()) != nrows + 1) {
        throw std::invalid_argument("csr: row_offsets size mismatch");
    }
    if (row_offsets.front() != 0 || row_offsets.back() != nnz()) {
        throw std::invalid_argument("csr: row_offsets endpoints invalid");
    }
    if (col_indices.size() != values.size()) {
        throw std::invalid_argument("csr: col/value length mismatch");
    }
    for (index_t i = 0; i < nrows; ++i) {
        if (row_offsets[i] > row_offsets[i + 1]) {
            throw std::invalid_argument("csr: row_offsets decreasing at row " +
                                        std::to_string(i));
        }
        for (index_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
            if (col_indices[p] < 0 || col_indices[p] >= ncols) {
                throw std::invalid_argument("csr: column out of range in row " +
                                            std::to_string(i));
            }
            if (p > row_offsets[i] && col_indices[p - 1] >= col_indices[p]) {
                throw std::invalid_argument(
                    "csr: columns not strictly increasing in row " +
                    std::to_string(i));
            }
        }
    }
}

CsrMatrix CsrMatrix::identity(index_t n) {
    CsrMatrix A;
    A.nrows = A.ncols = n;
    A.row_offsets.resize(n + 1);
    A.col_indices.resize(n);
    A.values.assign(n, 1.0);
    for (index_t i = 0; i <= n; ++i) A.row_offsets[i] = i;
    for (index_t i = 0; i < n; ++i) A.col_indices[i] = i;
    return A;
}

CsrMatrix CsrMatrix::from_triplets(index_t nrows, index_t ncols,
                                   std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
            throw std::invalid_argument("from_triplets: entry out of range");
        }
    }
    // stable: equal (row, col) keys are summed in input order, so identical
    // triplet sequences produce bit-identical matrices
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Triplet& a, const Triplet& b) {
                         return a.row != b.row ? a.row < b.row : a.col < b.col;
                     });
    CsrMatrix A;
    A.nrows = nrows;
    A.ncols = ncols;
    A.row_offsets.assign(nrows + 1, 0);
    A.col_indices.reserve(entries.size());
    A.values.reserve(entries.size());
    for (std::size_t p = 0; p < entries.size();) {
        std::size_t q = p;
        double sum = 0.0;
        while (q < entries.size() && entries[q].row == entries[p].row &&
               entries[q].col == entries[p].col) {
            sum += entries[q].value;
            ++q;
        }
        A.col_indices.push_back(entries[p].col);
        A.values.push_back(sum);
        A.row_offsets[entries[p].row + 1]++;
        p = q;
    }
    for (index_t i = 0; i < nrows; ++i) {
        A.row_offsets[i + 1] += A.row_offsets[i];
    }
    return A;
}

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    if (static_cast<index_t>(x.size()) != A.ncols ||
        static_cast<index_t>(y.size()) != A.nrows) {
        throw std::invalid_argument("spmv: dimension mismatch");
    }
    for (index_t i = 0; i < A.nrows; ++i) {
        double acc = 0.0;
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            acc += A.values[p] * x[A.col_indices[p]];
        }
        y[i] = acc;
    }
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) {
    std::vector<double> y(A.nrows);
    spmv(A, x, y);
    return y;
}

CsrMatrix transpose(const CsrMatrix& A) {
    CsrMatrix T;
    T.nrows = A.ncols;
    T.ncols = A.nrows;
    T.row_offsets.assign(A.ncols + 1, 0);
    T.col_indices.resize(A.nnz());
    T.values.resize(A.nnz());
    for (index_t p = 0; p < A.nnz(); ++p) {
        T.row_offsets[A.col_indices[p] + 1]++;
    }
    for (index_t j = 0; j < A.ncols; ++j) {
        T.row_offsets[j + 1] += T.row_offsets[j];
    }
    std::vector<index_t> next(T.row_offsets.begin(), T.row_offsets.end() - 1);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            const index_t q = next[A.col_indices[p]]++;
            T.col_indices[q] = i;
            T.values[q] = A.values[p];
        }
    }
    return T;
}

CsrMatrix principal_submatrix(const CsrMatrix& A, index_t size) {
    if (size < 0 || size > A.nrows || size > A.ncols) {
        throw std::invalid_argument("principal_submatrix: size out of range");
    }
    CsrMatrix S;
    S.nrows = S.ncols = size;
    S.row_offsets.assign(size + 1, 0);
    for (index_t i = 0; i < size; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            if (A.col_indices[p] < size) {
                S.col_indices.push_back(A.col_indices[p]);
                S.values.push_back(A.values[p]);
            }
        }
        S.row_offsets[i + 1] = static_cast<index_t>(S.values.size());
    }
    return S;
}

double csr_entry(const CsrMatrix& A, index_t row, index_t col) {
    const auto begin = A.col_indices.begin() + A.row_offsets[row];
    const auto end = A.col_indices.begin() + A.row_offsets[row + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return A.values[it - A.col_indices.begin()];
}

}  // namespace bddc
