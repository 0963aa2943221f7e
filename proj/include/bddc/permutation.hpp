/// @file permutation.hpp
/// @brief Index permutation with both directions stored.

#ifndef BDDC_PERMUTATION_HPP
#define BDDC_PERMUTATION_HPP

#include <vector>

#include "bddc/csr_matrix.hpp"

namespace bddc {

/// Bijection on [0, n). Applying it to a vector x yields y with
/// y[k] = x[forward[k]]; inverse[forward[k]] = k.
struct Permutation {
    std::vector<index_t> forward;
    std::vector<index_t> inverse;

    index_t size() const { return static_cast<index_t>(forward.size()); }

    static Permutation identity(index_t n);

    /// Builds inverse from the forward map; throws if not a bijection.
    static Permutation from_forward(std::vector<index_t> forward);
};

}  // namespace bddc

#endif
