#pragma once

// Text formats for matrices and sample batches.
//
//   hpd p            followed by p rows of 2p numbers (re im pairs)
//   batch p n        followed by n rows of 2p numbers, one sample per row
//
// Blank lines and lines starting with '#' are ignored. Numbers are written in
// shortest round-trip form, so write/read is bit-exact.

#include <iosfwd>
#include <string>
#include <vector>

#include "cesgeom/ces_models.hpp"
#include "cesgeom/matrix_core.hpp"

namespace cesgeom::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Every `hpd` block in order, unvalidated. Throws ParseError with a line number.
std::vector<CMatrix> parse_matrix_blocks(const std::string& text);
/// Validates every block; errors name the 0-based block index.
std::vector<HpdMatrix> parse_hpd_matrices(const std::string& text);
SampleBatch parse_batch(const std::string& text);

std::string format_hpd(const HpdMatrix& m);
std::string format_batch(const SampleBatch& batch);

/// Writes through a temporary file and renames, so a failed run never leaves
/// a partial file behind. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace cesgeom::cli
