#include "bddc/amd.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bddc {
namespace {

// Adjacency of A + A^T without the diagonal.
std::vector<std::vector<index_t>> symmetrized_adjacency(const CsrMatrix& A) {
    std::vector<std::vector<index_t>> adj(A.nrows);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            const index_t j = A.col_indices[p];
            if (j == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

}  // namespace

Permutation amd_order(const CsrMatrix& pattern) {
    if (pattern.nrows != pattern.ncols) {
        throw std::invalid_argument("amd_order: pattern must be square");
    }
    const index_t n = pattern.nrows;

    // Quotient graph: per node the adjacent variables (var_adj) and adjacent
    // elements (elem_adj). An eliminated pivot p turns into element p with
    // member list members[p]; absorbed elements are marked dead.
    std::vector<std::vector<index_t>> var_adj = symmetrized_adjacency(pattern);
    std::vector<std::vector<index_t>> elem_adj(n);
    std::vector<std::vector<index_t>> members(n);
    std::vector<bool> is_element(n, false);
    std::vector<bool> dead_element(n, false);
    std::vector<index_t> degree(n);

    // (degree, node) ordered set gives the deterministic minimum.
    std::set<std::pair<index_t, index_t>> queue;
    for (index_t i = 0; i < n; ++i) {
        degree[i] = static_cast<index_t>(var_adj[i].size());
        queue.emplace(degree[i], i);
    }

    std::vector<index_t> order;
    order.reserve(n);
    std::vector<index_t> stamp(n, -1);     // membership marker for Lp
    std::vector<index_t> w(n, 0);          // |L_e \ Lp| accumulator
    std::vector<index_t> w_stamp(n, -1);

    for (index_t step = 0; step < n; ++step) {
        const index_t p = queue.begin()->second;
        queue.erase(queue.begin());

        // Lp = (A_p  U  union of member lists of adjacent elements) \ {p}
        std::vector<index_t> lp;
        stamp[p] = step;
        for (index_t i : var_adj[p]) {
            if (!is_element[i] && stamp[i] != step) {
                stamp[i] = step;
                lp.push_back(i);
            }
        }
        for (index_t e : elem_adj[p]) {
            if (dead_element[e]) continue;
            for (index_t i : members[e]) {
                if (i != p && stamp[i] != step) {
                    stamp[i] = step;
                    lp.push_back(i);
                }
            }
            dead_element[e] = true;  // absorbed into the new element p
        }
        std::sort(lp.begin(), lp.end());

        order.push_back(p);
        is_element[p] = true;
        members[p] = lp;
        var_adj[p].clear();
        elem_adj[p].clear();

        // First pass: w[e] = |L_e \ Lp| for every element touching Lp.
        for (index_t i : lp) {
            for (index_t e : elem_adj[i]) {
                if (dead_element[e]) continue;
                if (w_stamp[e] != step) {
                    w_stamp[e] = step;
                    w[e] = static_cast<index_t>(members[e].size());
                }
                --w[e];
            }
        }

        // Second pass: prune adjacency and recompute approximate degrees.
        const index_t lp_size = static_cast<index_t>(lp.size());
        for (index_t i : lp) {
            // Variable-variable edges inside Lp (and to p) are now carried by
            // element p.
            auto& av = var_adj[i];
            av.erase(std::remove_if(av.begin(), av.end(),
                                    [&](index_t j) {
                                        return j == p || is_element[j] ||
                                               stamp[j] == step;
                                    }),
                     av.end());

            auto& ae = elem_adj[i];
            index_t elem_degree = 0;
            ae.erase(std::remove_if(ae.begin(), ae.end(),
                                    [&](index_t e) {
                                        if (dead_element[e]) return true;
                                        if (w_stamp[e] == step && w[e] == 0) {
                                            // L_e subset of Lp: absorb.
                                            dead_element[e] = true;
                                            return true;
                                        }
                                        return false;
                                    }),
                     ae.end());
            for (index_t e : ae) {
                elem_degree += (w_stamp[e] == step)
                                   ? w[e]
                                   : static_cast<index_t>(members[e].size());
            }
            ae.push_back(p);

            index_t d = static_cast<index_t>(av.size()) + (lp_size - 1) + elem_degree;
            d = std::min(d, degree[i] + lp_size - 1);
            d = std::min(d, n - step - 1);
            d = std::max<index_t>(d, 0);
            queue.erase({degree[i], i});
            degree[i] = d;
            queue.emplace(d, i);
        }
    }

    return Permutation::from_forward(std::move(order));
}

}  // namespace bddc
