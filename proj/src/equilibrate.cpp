#include "bddc/equilibrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bddc {

Scaling equilibrate(const CsrMatrix& A) {
    if (A.nrows != A.ncols) {
        throw std::invalid_argument("equilibrate: matrix must be square");
    }
    const index_t n = A.nrows;
    Scaling s;
    s.row_scale.assign(n, 1.0);
    s.col_scale.assign(n, 1.0);

    std::vector<double> row_max(n), col_max(n);
    auto scan = [&]() {
        row_max.assign(n, 0.0);
        col_max.assign(n, 0.0);
        for (index_t i = 0; i < n; ++i) {
            for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
                const index_t j = A.col_indices[p];
                const double v =
                    std::abs(A.values[p]) * s.row_scale[i] * s.col_scale[j];
                if (v > row_max[i]) row_max[i] = v;
                if (v > col_max[j]) col_max[j] = v;
            }
        }
    };

    scan();
    for (index_t i = 0; i < n; ++i) {
        if (row_max[i] == 0.0) {
            throw std::invalid_argument("equilibrate: structurally zero row " +
                                        std::to_string(i));
        }
        if (col_max[i] == 0.0) {
            throw std::invalid_argument("equilibrate: structurally zero column " +
                                        std::to_string(i));
        }
    }

    const double lo = 1.0 / std::sqrt(2.0);
    const double hi = std::sqrt(2.0);
    for (int sweep = 0; sweep < 10; ++sweep) {
        bool balanced = true;
        for (index_t i = 0; i < n && balanced; ++i) {
            balanced = row_max[i] >= lo && row_max[i] <= hi &&
                       col_max[i] >= lo && col_max[i] <= hi;
        }
        if (balanced) break;
        for (index_t i = 0; i < n; ++i) s.row_scale[i] /= std::sqrt(row_max[i]);
        // column maxima change once rows move; rescan before the column pass
        scan();
        for (index_t j = 0; j < n; ++j) s.col_scale[j] /= std::sqrt(col_max[j]);
        scan();
    }

    // Exact row pass: every row max becomes 1; with maxima already in
    // [1/sqrt(2), sqrt(2)] this lands all column maxima in [1/2, 1].
    for (index_t i = 0; i < n; ++i) s.row_scale[i] /= row_max[i];
    return s;
}

}  // namespace bddc
