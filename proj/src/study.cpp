#include "bddc/study.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "bddc/decomposition.hpp"
#include "bddc/pcg.hpp"
#include "bddc/preconditioner.hpp"

namespace bddc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverOptions outer_options(double tolerance) {
    SolverOptions opts;
    opts.rel_tolerance = tolerance;
    opts.max_iterations = 10000;
    return opts;
}

void fill_solve_fields(StudyRow& row, const SolveReport& report) {
    row.iterations = report.iterations;
    row.final_relative_residual = report.final_relative_residual;
    row.condition_estimate = report.condition_estimate;
    row.converged = report.converged;
    if (!report.converged) row.error = "not converged";
}

}  // namespace

StudyMode parse_study_mode(const std::string& name) {
    if (name == "weak") return StudyMode::weak;
    if (name == "strong") return StudyMode::strong;
    if (name == "compare") return StudyMode::compare;
    if (name == "single") return StudyMode::single;
    throw std::invalid_argument("unknown study mode: " + name);
}

std::string study_mode_name(StudyMode mode) {
    switch (mode) {
        case StudyMode::weak: return "weak";
        case StudyMode::strong: return "strong";
        case StudyMode::compare: return "compare";
        case StudyMode::single: return "single";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (k_list.empty()) throw std::invalid_argument("config: k list is empty");
    for (index_t k : k_list) {
        if (k < 2) throw std::invalid_argument("config: every k must be at least 2");
    }
    if (worker_count < 1) throw std::invalid_argument("config: worker_count must be at least 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be positive");
    if (cells < 2) throw std::invalid_argument("config: cells must be at least 2");
}

std::vector<double> study_rhs(index_t n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> b(n);
    for (double& v : b) v = normal(engine);
    return b;
}

std::vector<StudyRow> run_study(const ExperimentConfig& config) {
    config.validate();
    const std::string mode = study_mode_name(config.mode);
    std::vector<index_t> ks = config.k_list;
    if (config.mode == StudyMode::single) ks.resize(1);

    std::vector<StudyRow> rows;
    for (index_t k : ks) {
        StudyRow row;
        row.mode = mode;
        row.k = k;
        row.n_subdomains = k * k;
        try {
            const index_t cells =
                config.mode == StudyMode::strong ? config.cells : k * config.cells;
            if (config.mode == StudyMode::strong && cells % k != 0) {
                throw std::invalid_argument("strong mode: global cells " +
                                            std::to_string(cells) +
                                            " not divisible by k = " + std::to_string(k));
            }
            const StructuredGrid grid(cells);
            const PoissonProblem problem = assemble_poisson(grid, k);
            row.global_dofs = grid.free_dofs;
            const std::vector<double> b = study_rhs(grid.free_dofs, config.seed);

            const auto setup_start = Clock::now();
            const Preconditioner preconditioner(problem.global_matrix,
                                                problem.local_matrices,
                                                problem.decomposition,
                                                build_constraints(problem.decomposition),
                                                config.worker_count);
            row.setup_seconds = seconds_since(setup_start);
            row.coarse_dim = preconditioner.coarse().matrix.nrows;

            std::vector<double> x;
            const auto solve_start = Clock::now();
            const SolveReport report =
                pcg(problem.global_matrix, b,
                    [&](std::span<const double> r, std::span<double> z) {
                        const std::vector<double> result = preconditioner.apply(r);
                        std::copy(result.begin(), result.end(), z.begin());
                    },
                    outer_options(config.tolerance), x);
            row.solve_seconds = seconds_since(solve_start);
            fill_solve_fields(row, report);
            rows.push_back(row);

            if (config.mode == StudyMode::compare) {
                StudyRow plain = row;
                plain.coarse_dim = 0;
                plain.setup_seconds = 0.0;
                std::vector<double> xp;
                const auto plain_start = Clock::now();
                const SolveReport plain_report =
                    pcg(problem.global_matrix, b, {}, outer_options(config.tolerance), xp);
                plain.solve_seconds = seconds_since(plain_start);
                fill_solve_fields(plain, plain_report);
                plain.error = plain_report.converged ? "" : "not converged";
                rows.push_back(plain);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            row.converged = false;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<StudyRow> run_bundle_study(const std::string& manifest_path,
                                       const ExperimentConfig& config) {
    StudyRow row;
    row.mode = "single";
    std::vector<StudyRow> rows;
    try {
        const IngestedProblem problem = ingest_bundle(manifest_path);
        row.k = problem.decomposition.k;
        row.n_subdomains = problem.decomposition.n_subdomains;
        row.global_dofs = problem.decomposition.global_dofs;

        const auto setup_start = Clock::now();
        const Preconditioner preconditioner(problem.global_matrix,
                                            problem.local_matrices,
                                            problem.decomposition, problem.constraints,
                                            config.worker_count);
        row.setup_seconds = seconds_since(setup_start);
        row.coarse_dim = preconditioner.coarse().matrix.nrows;

        std::vector<double> x;
        const auto solve_start = Clock::now();
        const SolveReport report =
            pcg(problem.global_matrix, problem.rhs,
                [&](std::span<const double> r, std::span<double> z) {
                    const std::vector<double> result = preconditioner.apply(r);
                    std::copy(result.begin(), result.end(), z.begin());
                },
                outer_options(config.tolerance), x);
        row.solve_seconds = seconds_since(solve_start);
        fill_solve_fields(row, report);
    } catch (const std::exception& e) {
        row.error = e.what();
        row.converged = false;
    }
    rows.push_back(row);
    return rows;
}

const char* const kCsvHeader =
    "mode,k,n_subdomains,global_dofs,coarse_dim,setup_seconds,solve_seconds,"
    "iterations,final_relative_residual,condition_estimate,error";

void write_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
    out << kCsvHeader << "\n";
    char buf[128];
    for (const StudyRow& row : rows) {
        out << row.mode << "," << row.k << "," << row.n_subdomains << ","
            << row.global_dofs << "," << row.coarse_dim << ",";
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,", row.setup_seconds,
                      row.solve_seconds);
        out << buf << row.iterations << ",";
        std::snprintf(buf, sizeof buf, "%.17g", row.final_relative_residual);
        out << buf << ",";
        if (row.condition_estimate) {
            std::snprintf(buf, sizeof buf, "%.17g", *row.condition_estimate);
            out << buf;
        }
        // keep the error message inside its single cell
        std::string error = row.error;
        for (char& c : error) {
            if (c == ',' || c == '\n') c = ';';
        }
        out << "," << error << "\n";
    }
}

void write_csv_file(const std::string& path, const std::vector<StudyRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(out, rows);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace bddc
