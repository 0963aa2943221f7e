/// @file grid.hpp
/// @brief Structured unit-square grid and Q1 Poisson assembly.

#ifndef BDDC_GRID_HPP
#define BDDC_GRID_HPP

#include <functional>
#include <vector>

#include "bddc/csr_matrix.hpp"
#include "bddc/dense_matrix.hpp"

namespace bddc {

/// Uniform grid on the unit square with homogeneous Dirichlet boundary.
/// Free dofs are the interior vertices, numbered lexicographically with x
/// running fastest.
struct StructuredGrid {
    index_t cells_per_side;
    double mesh_width;
    index_t free_per_side;  // cells_per_side - 1
    index_t free_dofs;      // free_per_side^2

    explicit StructuredGrid(index_t cells);

    /// Free-dof id of vertex (ix, iy), or -1 on the boundary / outside.
    index_t dof(index_t ix, index_t iy) const {
        if (ix < 1 || ix > free_per_side || iy < 1 || iy > free_per_side) return -1;
        return (iy - 1) * free_per_side + (ix - 1);
    }
};

/// 4x4 element stiffness of the Laplacian on a square bilinear element,
/// local node order SW, SE, NE, NW. Scale-free in 2D.
DenseMatrix q1_element_matrix();

/// Vertex samples of u(x, y) = sin(pi x) sin(pi y) at the free dofs.
std::vector<double> manufactured_solution(const StructuredGrid& grid);

/// Consistent load vector for a forcing term, assembled element by element
/// with 2x2 Gauss quadrature.
std::vector<double> quadrature_load(const StructuredGrid& grid,
                                    const std::function<double(double, double)>& f);

}  // namespace bddc

#endif
