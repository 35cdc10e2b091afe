#pragma once

/*
 * io.hpp — on-disk containers.
 *
 * Field container (.nclf): little-endian binary, bit-exact round trip.
 *
 *   bytes 0..3   magic "NCLF"
 *   u32          format version (1)
 *   u32          d, u32 K, u32 matdim, u32 boundary (0 torus, 1 zero)
 *   u64          cell count
 *   then cell_count * matdim^2 entries as (re, im) double pairs, cells in
 *   row-major order, entries row-major within each cell.
 *
 * Decomposition dump: a directory of field containers (f, g, b_###, q_###,
 * p_###, zeta) plus manifest.json recording lambda, grid parameters, the
 * invariant residuals and the bound checks. Files are written to a temporary
 * name and renamed into place.
 */

#include <string>

#include "nclab/czd.hpp"
#include "nclab/field.hpp"

namespace nclab {

void        save_field(const MatrixField& f, const std::string& path);
MatrixField load_field(const std::string& path);

// Writes the dump and returns the manifest text that was stored.
std::string save_decomposition(const CZDecomposition& dec, const std::string& dir);

} // namespace nclab
