#include "bddc/decomposition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace bddc {
namespace {

void check_layout(const StructuredGrid& grid, index_t k) {
    if (k < 2) {
        throw std::invalid_argument(
            "decomposition: k must be at least 2 (k = 1 has no interface and "
            "no coarse space; use a direct solve)");
    }
    if (grid.cells_per_side % k != 0) {
        throw std::invalid_argument("decomposition: cells_per_side " +
                                    std::to_string(grid.cells_per_side) +
                                    " not divisible by k = " + std::to_string(k));
    }
    if (grid.cells_per_side / k < 2) {
        throw std::invalid_argument(
            "decomposition: subdomains need at least 2 cells per side");
    }
}

}  // namespace

std::vector<DofClass> classify_dofs(const StructuredGrid& grid, index_t k) {
    check_layout(grid, k);
    const index_t m = grid.cells_per_side / k;
    std::vector<DofClass> classes(grid.free_dofs);
    for (index_t iy = 1; iy <= grid.free_per_side; ++iy) {
        for (index_t ix = 1; ix <= grid.free_per_side; ++ix) {
            const bool on_x = ix % m == 0;
            const bool on_y = iy % m == 0;
            DofClass& c = classes[grid.dof(ix, iy)];
            if (on_x && on_y) {
                const index_t gx = ix / m, gy = iy / m;
                c.kind = DofKind::corner;
                c.entity = (gy - 1) * (k - 1) + (gx - 1);
            } else if (on_x) {
                // vertical interface segment between two horizontal neighbors
                const index_t gx = ix / m, sy = iy / m;
                c.kind = DofKind::edge;
                c.entity = sy * (k - 1) + (gx - 1);
            } else if (on_y) {
                const index_t gy = iy / m, sx = ix / m;
                c.kind = DofKind::edge;
                c.entity = k * (k - 1) + (gy - 1) * k + sx;
            } else {
                c.kind = DofKind::interior;
                c.entity = -1;
            }
        }
    }
    return classes;
}

std::vector<std::vector<double>> build_weights(const Decomposition& decomp) {
    std::vector<std::vector<double>> weights(decomp.n_subdomains);
    for (index_t i = 0; i < decomp.n_subdomains; ++i) {
        const auto& dofs = decomp.subdomain_dofs[i];
        weights[i].resize(dofs.size());
        for (std::size_t l = 0; l < dofs.size(); ++l) {
            weights[i][l] = 1.0 / decomp.multiplicity[dofs[l]];
        }
    }
    return weights;
}

Decomposition build_decomposition(const StructuredGrid& grid, index_t k) {
    check_layout(grid, k);
    const index_t m = grid.cells_per_side / k;

    Decomposition d;
    d.k = k;
    d.n_subdomains = k * k;
    d.global_dofs = grid.free_dofs;
    d.classes = classify_dofs(grid, k);
    d.subdomain_dofs.resize(d.n_subdomains);
    d.interior_counts.resize(d.n_subdomains);
    d.multiplicity.assign(grid.free_dofs, 0);

    for (index_t sy = 0; sy < k; ++sy) {
        for (index_t sx = 0; sx < k; ++sx) {
            const index_t si = sy * k + sx;
            std::vector<index_t> interior, interface;
            for (index_t iy = sy * m; iy <= (sy + 1) * m; ++iy) {
                for (index_t ix = sx * m; ix <= (sx + 1) * m; ++ix) {
                    const index_t dof = grid.dof(ix, iy);
                    if (dof < 0) continue;
                    d.multiplicity[dof]++;
                    if (d.classes[dof].kind == DofKind::interior) {
                        interior.push_back(dof);
                    } else {
                        interface.push_back(dof);
                    }
                }
            }
            // lexicographic scan already yields ascending global ids
            d.interior_counts[si] = static_cast<index_t>(interior.size());
            interior.insert(interior.end(), interface.begin(), interface.end());
            d.subdomain_dofs[si] = std::move(interior);
        }
    }
    d.weights = build_weights(d);
    return d;
}

ConstraintSet build_constraints(const Decomposition& decomp) {
    // Global primal numbering: corner entities first, then edge entities,
    // each in ascending entity order.
    std::map<index_t, index_t> corner_primal, edge_primal;
    for (const DofClass& c : decomp.classes) {
        if (c.kind == DofKind::corner) corner_primal.emplace(c.entity, 0);
        if (c.kind == DofKind::edge) edge_primal.emplace(c.entity, 0);
    }
    index_t next = 0;
    for (auto& [entity, id] : corner_primal) id = next++;
    for (auto& [entity, id] : edge_primal) id = next++;

    ConstraintSet cs;
    cs.n_coarse = next;
    cs.constraint_matrices.resize(decomp.n_subdomains);
    cs.primal_maps.resize(decomp.n_subdomains);

    for (index_t i = 0; i < decomp.n_subdomains; ++i) {
        const auto& dofs = decomp.subdomain_dofs[i];
        const index_t n_local = static_cast<index_t>(dofs.size());
        // primal id -> local dofs it involves
        std::map<index_t, std::vector<index_t>> rows;
        for (index_t l = 0; l < n_local; ++l) {
            const DofClass& c = decomp.classes[dofs[l]];
            if (c.kind == DofKind::corner) {
                rows[corner_primal.at(c.entity)].push_back(l);
            } else if (c.kind == DofKind::edge) {
                rows[edge_primal.at(c.entity)].push_back(l);
            }
        }
        if (rows.empty()) {
            throw std::runtime_error(
                "constraints: subdomain " + std::to_string(i) +
                " has no interface constraints; the saddle system would be singular");
        }
        std::vector<Triplet> entries;
        index_t row = 0;
        for (const auto& [primal, locals] : rows) {
            cs.primal_maps[i].push_back(primal);
            const double value = 1.0 / static_cast<double>(locals.size());
            for (index_t l : locals) entries.push_back({row, l, value});
            ++row;
        }
        cs.constraint_matrices[i] =
            CsrMatrix::from_triplets(row, n_local, std::move(entries));
    }
    return cs;
}

PoissonProblem assemble_poisson(const StructuredGrid& grid, index_t k) {
    check_layout(grid, k);
    const index_t m = grid.cells_per_side / k;
    const DenseMatrix K = q1_element_matrix();

    PoissonProblem problem{grid, build_decomposition(grid, k), {}, {}};
    const Decomposition& d = problem.decomposition;

    // Per-subdomain Neumann matrices: each element contributes only to its
    // owning subdomain.
    problem.local_matrices.resize(d.n_subdomains);
    std::vector<index_t> global_to_local(grid.free_dofs, -1);
    for (index_t si = 0; si < d.n_subdomains; ++si) {
        const auto& dofs = d.subdomain_dofs[si];
        for (std::size_t l = 0; l < dofs.size(); ++l) {
            global_to_local[dofs[l]] = static_cast<index_t>(l);
        }
        const index_t sx = si % k, sy = si / k;
        std::vector<Triplet> entries;
        entries.reserve(static_cast<std::size_t>(m) * m * 16);
        for (index_t cy = sy * m; cy < (sy + 1) * m; ++cy) {
            for (index_t cx = sx * m; cx < (sx + 1) * m; ++cx) {
                const index_t vids[4] = {grid.dof(cx, cy), grid.dof(cx + 1, cy),
                                         grid.dof(cx + 1, cy + 1),
                                         grid.dof(cx, cy + 1)};
                for (int a = 0; a < 4; ++a) {
                    if (vids[a] < 0) continue;
                    for (int b = 0; b < 4; ++b) {
                        if (vids[b] < 0) continue;
                        entries.push_back({global_to_local[vids[a]],
                                           global_to_local[vids[b]], K(a, b)});
                    }
                }
            }
        }
        const index_t n_local = static_cast<index_t>(dofs.size());
        problem.local_matrices[si] =
            CsrMatrix::from_triplets(n_local, n_local, std::move(entries));
        for (index_t dof : dofs) global_to_local[dof] = -1;
    }
    problem.global_matrix = global_from_locals(d, problem.local_matrices);
    return problem;
}

CsrMatrix global_from_locals(const Decomposition& decomp,
                             const std::vector<CsrMatrix>& local_matrices) {
    if (static_cast<index_t>(local_matrices.size()) != decomp.n_subdomains) {
        throw std::invalid_argument("global_from_locals: subdomain count mismatch");
    }
    std::vector<Triplet> entries;
    for (index_t i = 0; i < decomp.n_subdomains; ++i) {
        const CsrMatrix& A_i = local_matrices[i];
        const auto& dofs = decomp.subdomain_dofs[i];
        for (index_t row = 0; row < A_i.nrows; ++row) {
            for (index_t p = A_i.row_offsets[row]; p < A_i.row_offsets[row + 1]; ++p) {
                entries.push_back({dofs[row], dofs[A_i.col_indices[p]], A_i.values[p]});
            }
        }
    }
    return CsrMatrix::from_triplets(decomp.global_dofs, decomp.global_dofs,
                                    std::move(entries));
}

std::vector<double> restrict_to_subdomain(const Decomposition& decomp, index_t i,
                                          std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != decomp.global_dofs) {
        throw std::invalid_argument("restrict: global vector size mismatch");
    }
    const auto& dofs = decomp.subdomain_dofs[i];
    std::vector<double> local(dofs.size());
    for (std::size_t l = 0; l < dofs.size(); ++l) local[l] = x[dofs[l]];
    return local;
}

void prolong_add(const Decomposition& decomp, index_t i,
                 std::span<const double> local, std::span<double> global) {
    const auto& dofs = decomp.subdomain_dofs[i];
    if (local.size() != dofs.size() ||
        static_cast<index_t>(global.size()) != decomp.global_dofs) {
        throw std::invalid_argument("prolong: vector size mismatch");
    }
    for (std::size_t l = 0; l < dofs.size(); ++l) global[dofs[l]] += local[l];
}

}  // namespace bddc
