/// @file equilibrate.hpp
/// @brief Symmetric iterative max-abs equilibration.

#ifndef BDDC_EQUILIBRATE_HPP
#define BDDC_EQUILIBRATE_HPP

#include <vector>

#include "bddc/csr_matrix.hpp"

namespace bddc {

struct Scaling {
    std::vector<double> row_scale;
    std::vector<double> col_scale;
};

/// Alternating row/column max-abs scaling (at most 10 sweeps) followed by an
/// exact row normalization. After applying D_r A D_c the largest absolute
/// entry of every row and column lies in [1/2, 1].
///
/// Throws on non-square input and on structurally zero rows or columns,
/// naming the offending index.
Scaling equilibrate(const CsrMatrix& A);

}  // namespace bddc

#endif
