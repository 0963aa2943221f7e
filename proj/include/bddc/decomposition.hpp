/// @file decomposition.hpp
/// @brief k x k subdomain layout: dof classification, restriction maps,
/// partition-of-unity weights, and primal constraints.

#ifndef BDDC_DECOMPOSITION_HPP
#define BDDC_DECOMPOSITION_HPP

#include <span>
#include <vector>

#include "bddc/csr_matrix.hpp"
#include "bddc/grid.hpp"

namespace bddc {

enum class DofKind : std::uint8_t { interior, edge, corner };

/// Classification of one global dof. For interface dofs, entity identifies
/// the shared edge segment or cross point so constraints can be numbered
/// consistently across subdomains.
struct DofClass {
    DofKind kind = DofKind::interior;
    index_t entity = -1;
};

/// Subdomain layout with local-to-global maps. Local dofs are ordered
/// interior first, so the interior restriction is a prefix of length
/// interior_counts[i].
struct Decomposition {
    index_t k = 0;            // subdomains per side
    index_t n_subdomains = 0; // k * k
    index_t global_dofs = 0;
    std::vector<std::vector<index_t>> subdomain_dofs;
    std::vector<index_t> interior_counts;
    std::vector<DofClass> classes;       // per global dof
    std::vector<index_t> multiplicity;   // sharing count per global dof
    std::vector<std::vector<double>> weights;  // 1/multiplicity per local dof
};

/// Per-subdomain primal constraints. Row r of constraint_matrices[i] is the
/// constraint with global primal index primal_maps[i][r] (strictly
/// increasing): a unit coordinate vector at a corner dof, or equal weights
/// summing to one over an edge's dofs.
struct ConstraintSet {
    std::vector<CsrMatrix> constraint_matrices;
    std::vector<std::vector<index_t>> primal_maps;
    index_t n_coarse = 0;
};

/// Assembled Poisson model problem split into subdomain contributions. The
/// local matrices are unassembled Neumann stiffness blocks: each element
/// contributes to exactly its owning subdomain, and the global matrix equals
/// the weighted scatter-add of the local ones.
struct PoissonProblem {
    StructuredGrid grid;
    Decomposition decomposition;
    CsrMatrix global_matrix;
    std::vector<CsrMatrix> local_matrices;
};

/// Classifies each free dof of a k x k decomposition: multiplicity one is
/// interior; subdomain-corner vertices shared by several subdomains are
/// corners; remaining shared dofs lie on an interface edge.
std::vector<DofClass> classify_dofs(const StructuredGrid& grid, index_t k);

/// Weight of a local dof is 1/multiplicity of its global dof.
std::vector<std::vector<double>> build_weights(const Decomposition& decomp);

/// Subdomain dof lists, multiplicities, classes and weights for a k x k
/// split; cells_per_side must be divisible by k with quotient >= 2.
Decomposition build_decomposition(const StructuredGrid& grid, index_t k);

/// Builds primal constraints (one per interface corner, one average per
/// interface edge) from the classes stored in the decomposition. Throws if a
/// subdomain ends up with no constraints.
ConstraintSet build_constraints(const Decomposition& decomp);

/// Assembles the global matrix and the per-subdomain Neumann matrices.
PoissonProblem assemble_poisson(const StructuredGrid& grid, index_t k);

/// Global matrix as the scatter-add of the subdomain matrices through the
/// local-to-global maps. assemble_poisson and the bundle reader both build
/// the global operator this way, with the same summation order.
CsrMatrix global_from_locals(const Decomposition& decomp,
                             const std::vector<CsrMatrix>& local_matrices);

/// Gather x at subdomain i's dofs (local order).
std::vector<double> restrict_to_subdomain(const Decomposition& decomp, index_t i,
                                          std::span<const double> x);
/// Scatter-add a local vector into the global one.
void prolong_add(const Decomposition& decomp, index_t i,
                 std::span<const double> local, std::span<double> global);

}  // namespace bddc

#endif
