#include "bddc/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bddc {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(name + ": empty matrix market stream");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" ||
        lower(format) != "coordinate" || lower(field) != "real") {
        throw std::runtime_error(name + ": unsupported matrix market header: " + line);
    }
    symmetry = lower(symmetry);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general") {
        throw std::runtime_error(name + ": unsupported symmetry kind: " + symmetry);
    }

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sizes(line);
    long nrows = -1, ncols = -1, nentries = -1;
    sizes >> nrows >> ncols >> nentries;
    if (nrows < 0 || ncols < 0 || nentries < 0) {
        throw std::runtime_error(name + ": malformed size line: " + line);
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nentries));
    for (long e = 0; e < nentries; ++e) {
        long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) {
            throw std::runtime_error(name + ": truncated entry list at entry " +
                                     std::to_string(e + 1));
        }
        if (i < 1 || i > nrows || j < 1 || j > ncols) {
            throw std::runtime_error(name + ": entry index out of range at entry " +
                                     std::to_string(e + 1));
        }
        entries.push_back({static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v});
        if (symmetric && i != j) {
            entries.push_back({static_cast<index_t>(j - 1), static_cast<index_t>(i - 1), v});
        }
    }
    return CsrMatrix::from_triplets(static_cast<index_t>(nrows),
                                    static_cast<index_t>(ncols), std::move(entries));
}

CsrMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
    char buf[64];
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1,
                          A.col_indices[p] + 1, A.values[p]);
            out << buf;
        }
    }
}

void write_matrix_market_file(const std::string& path, const CsrMatrix& A) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open matrix file for writing: " + path);
    write_matrix_market(out, A);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace bddc
