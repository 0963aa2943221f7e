#include "bddc/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bddc/matrix_market.hpp"
#include "bddc/vector_ops.hpp"

namespace fs = std::filesystem;

namespace bddc {
namespace {

void write_values(const std::string& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[32];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    return values;
}

std::vector<index_t> read_indices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::vector<index_t> values;
    long v;
    while (in >> v) values.push_back(static_cast<index_t>(v));
    return values;
}

const char* kind_name(DofKind kind) {
    switch (kind) {
        case DofKind::interior: return "interior";
        case DofKind::edge: return "edge";
        case DofKind::corner: return "corner";
    }
    return "?";
}

}  // namespace

std::string export_bundle(const Decomposition& decomp,
                          const std::vector<CsrMatrix>& local_matrices,
                          std::span<const double> rhs,
                          const std::string& directory) {
    if (static_cast<index_t>(local_matrices.size()) != decomp.n_subdomains) {
        throw std::invalid_argument("export_bundle: subdomain count mismatch");
    }
    if (static_cast<index_t>(rhs.size()) != decomp.global_dofs) {
        throw std::invalid_argument("export_bundle: rhs size mismatch");
    }
    fs::create_directories(directory);

    write_values((fs::path(directory) / "rhs.txt").string(), rhs);

    {
        std::ofstream out(fs::path(directory) / "classes.txt");
        if (!out) throw std::runtime_error("cannot write classes.txt in " + directory);
        for (const DofClass& c : decomp.classes) {
            out << kind_name(c.kind);
            if (c.kind != DofKind::interior) out << " " << c.entity;
            out << "\n";
        }
    }

    for (index_t i = 0; i < decomp.n_subdomains; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "A_%03d.mtx", i);
        write_matrix_market_file((fs::path(directory) / name).string(),
                                 local_matrices[i]);
        std::snprintf(name, sizeof name, "map_%03d.txt", i);
        std::ofstream out(fs::path(directory) / name);
        if (!out) throw std::runtime_error("cannot write map file in " + directory);
        for (index_t dof : decomp.subdomain_dofs[i]) out << dof << "\n";
    }

    const std::string manifest_path = (fs::path(directory) / "manifest.txt").string();
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("cannot write " + manifest_path);
    out << "bddc-bundle 1\n";
    out << "subdomains " << decomp.n_subdomains << "\n";
    out << "global_dofs " << decomp.global_dofs << "\n";
    out << "rhs rhs.txt\n";
    out << "classes classes.txt\n";
    for (index_t i = 0; i < decomp.n_subdomains; ++i) {
        char a[32], m[32];
        std::snprintf(a, sizeof a, "A_%03d.mtx", i);
        std::snprintf(m, sizeof m, "map_%03d.txt", i);
        out << "matrix " << i << " " << a << "\n";
        out << "map " << i << " " << m << "\n";
    }
    if (!out.good()) throw std::runtime_error("write failed: " + manifest_path);
    return manifest_path;
}

IngestedProblem ingest_bundle(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("missing file: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    std::string line;
    if (!std::getline(in, line) || line.rfind("bddc-bundle", 0) != 0) {
        throw std::runtime_error(manifest_path + ": not a bundle manifest");
    }
    index_t n_subdomains = -1, global_dofs = -1;
    std::string rhs_file, classes_file;
    std::vector<std::string> matrix_files, map_files;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "subdomains") {
            fields >> n_subdomains;
            matrix_files.resize(n_subdomains);
            map_files.resize(n_subdomains);
        } else if (key == "global_dofs") {
            fields >> global_dofs;
        } else if (key == "rhs") {
            fields >> rhs_file;
        } else if (key == "classes") {
            fields >> classes_file;
        } else if (key == "matrix" || key == "map") {
            index_t i = -1;
            std::string file;
            fields >> i >> file;
            if (i < 0 || i >= n_subdomains) {
                throw std::runtime_error(manifest_path + ": subdomain index " +
                                         std::to_string(i) + " out of range");
            }
            (key == "matrix" ? matrix_files : map_files)[i] = file;
        } else {
            throw std::runtime_error(manifest_path + ": unknown manifest key '" + key + "'");
        }
    }
    if (n_subdomains <= 0 || global_dofs <= 0 || rhs_file.empty() || classes_file.empty()) {
        throw std::runtime_error(manifest_path + ": incomplete manifest");
    }
    for (index_t i = 0; i < n_subdomains; ++i) {
        if (matrix_files[i].empty() || map_files[i].empty()) {
            throw std::runtime_error(manifest_path + ": subdomain " + std::to_string(i) +
                                     " lacks a matrix or map entry");
        }
    }

    IngestedProblem problem;
    problem.rhs = read_values((base / rhs_file).string());
    if (static_cast<index_t>(problem.rhs.size()) != global_dofs) {
        throw std::runtime_error(rhs_file + ": expected " + std::to_string(global_dofs) +
                                 " values, found " + std::to_string(problem.rhs.size()));
    }
    ensure_finite(problem.rhs, "bundle rhs");

    // Classes.
    std::vector<DofClass> classes(global_dofs);
    {
        std::ifstream cin((base / classes_file).string());
        if (!cin) throw std::runtime_error("missing file: " + (base / classes_file).string());
        for (index_t d = 0; d < global_dofs; ++d) {
            std::string kind;
            if (!(cin >> kind)) {
                throw std::runtime_error(classes_file + ": truncated at dof " + std::to_string(d));
            }
            if (kind == "interior") {
                classes[d] = {DofKind::interior, -1};
            } else if (kind == "edge" || kind == "corner") {
                index_t entity = -1;
                if (!(cin >> entity) || entity < 0) {
                    throw std::runtime_error(classes_file + ": missing entity id at dof " +
                                             std::to_string(d));
                }
                classes[d] = {kind == "edge" ? DofKind::edge : DofKind::corner, entity};
            } else {
                throw std::runtime_error(classes_file + ": unknown class '" + kind +
                                         "' at dof " + std::to_string(d));
            }
        }
    }

    // Maps and matrices, reordered interior-first.
    Decomposition& d = problem.decomposition;
    d.n_subdomains = n_subdomains;
    const double root = std::sqrt(static_cast<double>(n_subdomains));
    d.k = static_cast<index_t>(root + 0.5);
    if (d.k * d.k != n_subdomains) d.k = 0;  // layout unknown, informational only
    d.global_dofs = global_dofs;
    d.classes = classes;
    d.multiplicity.assign(global_dofs, 0);
    d.subdomain_dofs.resize(n_subdomains);
    d.interior_counts.resize(n_subdomains);
    problem.local_matrices.resize(n_subdomains);

    std::vector<std::vector<index_t>> raw_maps(n_subdomains);
    for (index_t i = 0; i < n_subdomains; ++i) {
        raw_maps[i] = read_indices((base / map_files[i]).string());
        for (index_t dof : raw_maps[i]) {
            if (dof < 0 || dof >= global_dofs) {
                throw std::runtime_error(map_files[i] + ": dof " + std::to_string(dof) +
                                         " out of range");
            }
            d.multiplicity[dof]++;
        }
    }
    for (index_t dof = 0; dof < global_dofs; ++dof) {
        if (d.multiplicity[dof] == 0) {
            throw std::runtime_error("bundle validation: global dof " + std::to_string(dof) +
                                     " is covered by no subdomain");
        }
        const DofClass& c = classes[dof];
        if (c.kind == DofKind::interior && d.multiplicity[dof] != 1) {
            throw std::runtime_error("bundle validation: dof " + std::to_string(dof) +
                                     " has multiplicity " + std::to_string(d.multiplicity[dof]) +
                                     " but is classified interior");
        }
        if (c.kind == DofKind::edge && d.multiplicity[dof] != 2) {
            throw std::runtime_error("bundle validation: dof " + std::to_string(dof) +
                                     " has multiplicity " + std::to_string(d.multiplicity[dof]) +
                                     " but is classified as an interface edge");
        }
        if (c.kind == DofKind::corner && d.multiplicity[dof] < 2) {
            throw std::runtime_error("bundle validation: dof " + std::to_string(dof) +
                                     " has multiplicity 1 but is classified as a corner");
        }
    }

    for (index_t i = 0; i < n_subdomains; ++i) {
        const auto& raw = raw_maps[i];
        const index_t n_local = static_cast<index_t>(raw.size());
        const CsrMatrix raw_matrix =
            read_matrix_market_file((base / matrix_files[i]).string());
        if (raw_matrix.nrows != n_local || raw_matrix.ncols != n_local) {
            throw std::runtime_error(matrix_files[i] + ": size " +
                                     std::to_string(raw_matrix.nrows) + "x" +
                                     std::to_string(raw_matrix.ncols) +
                                     " does not match map length " + std::to_string(n_local));
        }
        ensure_finite(raw_matrix.values, "bundle matrix");

        // Stable interior-first reorder; old local index -> new local index.
        std::vector<index_t> new_of_old(n_local);
        std::vector<index_t> ordered;
        ordered.reserve(n_local);
        for (index_t l = 0; l < n_local; ++l) {
            if (classes[raw[l]].kind == DofKind::interior) {
                new_of_old[l] = static_cast<index_t>(ordered.size());
                ordered.push_back(raw[l]);
            }
        }
        d.interior_counts[i] = static_cast<index_t>(ordered.size());
        for (index_t l = 0; l < n_local; ++l) {
            if (classes[raw[l]].kind != DofKind::interior) {
                new_of_old[l] = static_cast<index_t>(ordered.size());
                ordered.push_back(raw[l]);
            }
        }
        d.subdomain_dofs[i] = std::move(ordered);

        std::vector<Triplet> entries;
        entries.reserve(raw_matrix.nnz());
        for (index_t row = 0; row < n_local; ++row) {
            for (index_t p = raw_matrix.row_offsets[row]; p < raw_matrix.row_offsets[row + 1]; ++p) {
                entries.push_back({new_of_old[row], new_of_old[raw_matrix.col_indices[p]],
                                   raw_matrix.values[p]});
            }
        }
        problem.local_matrices[i] = CsrMatrix::from_triplets(n_local, n_local, std::move(entries));
    }

    d.weights = build_weights(d);
    problem.constraints = build_constraints(d);
    problem.global_matrix = global_from_locals(d, problem.local_matrices);
    return problem;
}

}  // namespace bddc
