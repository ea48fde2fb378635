#pragma once

#include <string>

#include "tilediff/grid.hpp"

namespace tilediff {

// Affine [min,max] -> [0,255] mapping recorded alongside a written image.
struct PgmMapping {
    double min = 0.0;
    double max = 0.0;
};

// Writes a binary (P5) 8-bit PGM; values are mapped affinely from the grid's
// [min, max]. Deterministic bytes for identical grids.
PgmMapping write_pgm(const std::string& path, const Grid& grid);

}  // namespace tilediff
