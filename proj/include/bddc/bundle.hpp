/// @file bundle.hpp
/// @brief On-disk interchange format for per-subdomain problems: a text
/// manifest, Matrix Market stiffness blocks, dof maps, a class file and the
/// right-hand side. Lets externally assembled stiffness matrices run through
/// the same solver stack as the generated model problem.

#ifndef BDDC_BUNDLE_HPP
#define BDDC_BUNDLE_HPP

#include <string>
#include <vector>

#include "bddc/decomposition.hpp"

namespace bddc {

/// In-memory result of reading a bundle; mirrors what assemble_poisson
/// produces, with classification taken from the class file and weights
/// rebuilt from multiplicities.
struct IngestedProblem {
    Decomposition decomposition;
    ConstraintSet constraints;
    CsrMatrix global_matrix;
    std::vector<CsrMatrix> local_matrices;
    std::vector<double> rhs;
};

/// Writes manifest.txt plus per-subdomain matrix and map files, the class
/// file and the rhs into directory. Values are written with 17 significant
/// digits so a round trip is bit-exact. Returns the manifest path.
std::string export_bundle(const Decomposition& decomp,
                          const std::vector<CsrMatrix>& local_matrices,
                          std::span<const double> rhs,
                          const std::string& directory);

/// Reads and validates a bundle. Local dofs are reordered interior-first
/// (stable), with the local matrices permuted to match, so bundles written by
/// export_bundle reproduce the original problem exactly.
///
/// Throws naming the missing file or the offending dof: uncovered global
/// dofs, class/multiplicity mismatches, and malformed maps are rejected.
IngestedProblem ingest_bundle(const std::string& manifest_path);

}  // namespace bddc

#endif
