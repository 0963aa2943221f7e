/// @file study.hpp
/// @brief Experiment runner: builds model problems, runs BDDC-preconditioned
/// and plain CG studies, and emits CSV rows.

#ifndef BDDC_STUDY_HPP
#define BDDC_STUDY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bddc/bundle.hpp"
#include "bddc/csr_matrix.hpp"

namespace bddc {

enum class StudyMode { weak, strong, compare, single };

StudyMode parse_study_mode(const std::string& name);
std::string study_mode_name(StudyMode mode);

struct ExperimentConfig {
    StudyMode mode = StudyMode::compare;
    std::vector<index_t> k_list;
    /// Cells per subdomain side in weak/compare/single mode; the fixed global
    /// cell count in strong mode.
    index_t cells = 32;
    double tolerance = 1e-8;
    index_t worker_count = 1;
    std::uint64_t seed = 1;
    std::string output_path;

    void validate() const;
};

/// One CSV row. Plain-CG rows carry coarse_dim 0 and setup_seconds 0 since no
/// preconditioner is built.
struct StudyRow {
    std::string mode;
    index_t k = 0;
    index_t n_subdomains = 0;
    index_t global_dofs = 0;
    index_t coarse_dim = 0;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
    index_t iterations = 0;
    double final_relative_residual = 0.0;
    std::optional<double> condition_estimate;
    std::string error;
    bool converged = false;
};

/// Seeded standard-normal right-hand side used by the studies. The smooth
/// manufactured solution is an exact eigenvector of the assembled operator,
/// which collapses unpreconditioned CG to a single iteration, so iteration
/// studies need a generic vector.
std::vector<double> study_rhs(index_t n, std::uint64_t seed);

/// One row per run (two per k in compare mode: preconditioned then plain).
/// Build or solve failures populate the row's error column instead of
/// propagating.
std::vector<StudyRow> run_study(const ExperimentConfig& config);

/// Runs BDDC-CG on an ingested bundle with its stored right-hand side.
std::vector<StudyRow> run_bundle_study(const std::string& manifest_path,
                                       const ExperimentConfig& config);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<StudyRow>& rows);
void write_csv_file(const std::string& path, const std::vector<StudyRow>& rows);

}  // namespace bddc

#endif
