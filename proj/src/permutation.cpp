#include "bddc/permutation.hpp"

#include <stdexcept>
#include <string>

namespace bddc {

Permutation Permutation::identity(index_t n) {
    Permutation p;
    p.forward.resize(n);
    p.inverse.resize(n);
    for (index_t i = 0; i < n; ++i) p.forward[i] = p.inverse[i] = i;
    return p;
}

Permutation Permutation::from_forward(std::vector<index_t> forward) {
    const index_t n = static_cast<index_t>(forward.size());
    Permutation p;
    p.inverse.assign(n, -1);
    for (index_t k = 0; k < n; ++k) {
        const index_t v = forward[k];
        if (v < 0 || v >= n || p.inverse[v] != -1) {
            throw std::invalid_argument("permutation: forward map is not a bijection at position " +
                                        std::to_string(k));
        }
        p.inverse[v] = k;
    }
    p.forward = std::move(forward);
    return p;
}

}  // namespace bddc
