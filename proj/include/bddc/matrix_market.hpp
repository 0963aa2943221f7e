/// @file matrix_market.hpp
/// @brief Matrix Market coordinate reader/writer.

#ifndef BDDC_MATRIX_MARKET_HPP
#define BDDC_MATRIX_MARKET_HPP

#include <iosfwd>
#include <string>

#include "bddc/csr_matrix.hpp"

namespace bddc {

/// Reads a coordinate-format real matrix, general or symmetric kind.
/// Symmetric files are expanded (off-diagonal entries mirrored). Indices are
/// 1-based on disk, 0-based in memory.
CsrMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");
CsrMatrix read_matrix_market_file(const std::string& path);

/// Writes `%%MatrixMarket matrix coordinate real general`, entries sorted
/// row-major, values with 17 significant digits so doubles round-trip.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);
void write_matrix_market_file(const std::string& path, const CsrMatrix& A);

}  // namespace bddc

#endif
