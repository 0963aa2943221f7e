#include "bddc/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bddc {

StructuredGrid::StructuredGrid(index_t cells)
    : cells_per_side(cells),
      mesh_width(1.0 / cells),
      free_per_side(cells - 1),
      free_dofs((cells - 1) * (cells - 1)) {
    if (cells < 2) {
        throw std::invalid_argument("grid: needs at least 2 cells per side");
    }
}

DenseMatrix q1_element_matrix() {
    // 2x2 Gauss quadrature of grad(N_a).grad(N_b) over the reference square.
    const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
    const double g1 = 0.5 + 0.5 / std::sqrt(3.0);
    const double pts[4][2] = {{g0, g0}, {g1, g0}, {g1, g1}, {g0, g1}};
    DenseMatrix K(4, 4);
    for (const auto& pt : pts) {
        const double x = pt[0], y = pt[1];
        // gradients of (1-x)(1-y), x(1-y), xy, (1-x)y
        const double dN[4][2] = {{-(1 - y), -(1 - x)},
                                 {1 - y, -x},
                                 {y, x},
                                 {-y, 1 - x}};
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                K(a, b) += 0.25 * (dN[a][0] * dN[b][0] + dN[a][1] * dN[b][1]);
            }
        }
    }
    return K;
}

std::vector<double> manufactured_solution(const StructuredGrid& grid) {
    std::vector<double> u(grid.free_dofs);
    const double pi = std::numbers::pi;
    for (index_t iy = 1; iy <= grid.free_per_side; ++iy) {
        for (index_t ix = 1; ix <= grid.free_per_side; ++ix) {
            u[grid.dof(ix, iy)] = std::sin(pi * ix * grid.mesh_width) *
                                  std::sin(pi * iy * grid.mesh_width);
        }
    }
    return u;
}

std::vector<double> quadrature_load(const StructuredGrid& grid,
                                    const std::function<double(double, double)>& f) {
    std::vector<double> b(grid.free_dofs, 0.0);
    const double h = grid.mesh_width;
    const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
    const double g1 = 0.5 + 0.5 / std::sqrt(3.0);
    const double pts[4][2] = {{g0, g0}, {g1, g0}, {g1, g1}, {g0, g1}};
    for (index_t cy = 0; cy < grid.cells_per_side; ++cy) {
        for (index_t cx = 0; cx < grid.cells_per_side; ++cx) {
            const index_t vids[4] = {grid.dof(cx, cy), grid.dof(cx + 1, cy),
                                     grid.dof(cx + 1, cy + 1), grid.dof(cx, cy + 1)};
            for (const auto& pt : pts) {
                const double gx = pt[0], gy = pt[1];
                const double shape[4] = {(1 - gx) * (1 - gy), gx * (1 - gy),
                                         gx * gy, (1 - gx) * gy};
                const double fv =
                    f((cx + gx) * h, (cy + gy) * h) * h * h * 0.25;
                for (int a = 0; a < 4; ++a) {
                    if (vids[a] >= 0) b[vids[a]] += shape[a] * fv;
                }
            }
        }
    }
    return b;
}

}  // namespace bddc
