/// @file amd.hpp
/// @brief Approximate minimum degree fill-reducing ordering.

#ifndef BDDC_AMD_HPP
#define BDDC_AMD_HPP

#include "bddc/csr_matrix.hpp"
#include "bddc/permutation.hpp"

namespace bddc {

/// Fill-reducing elimination order for the pattern of A + A^T (values and
/// diagonal ignored). Quotient-graph minimum degree with approximate external
/// degrees and element absorption; ties broken by smallest node index so the
/// order is deterministic.
///
/// forward[k] is the node eliminated at step k. Throws on non-square input.
Permutation amd_order(const CsrMatrix& pattern);

}  // namespace bddc

#endif
