#pragma once

#include <vector>

#include "tilediff/grid.hpp"

namespace tilediff {

// Window-shaped weight field used for guided fusion; 1 at the center,
// configured floor at the corners.
using GuidanceMap = Grid;

// Overlapping patch windows laid on a canvas at fixed strides. Patches tile
// the canvas exactly (no ragged remainder) and are ordered row-major; that
// order keys the per-patch RNG substreams and the fusion accumulation.
class TileLayout {
public:
    static TileLayout make(int canvas_h, int canvas_w, int window_h, int window_w,
                           int stride_h, int stride_w);

    int canvas_height() const { return canvas_h_; }
    int canvas_width() const { return canvas_w_; }
    int window_height() const { return window_h_; }
    int window_width() const { return window_w_; }
    int stride_height() const { return stride_h_; }
    int stride_width() const { return stride_w_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int patch_count() const { return rows_ * cols_; }
    const std::vector<Region>& patches() const { return patches_; }

    TileLayout() = default;  // empty; populate via the factory

private:

    int canvas_h_ = 0, canvas_w_ = 0;
    int window_h_ = 0, window_w_ = 0;
    int stride_h_ = 0, stride_w_ = 0;
    int rows_ = 0, cols_ = 0;
    std::vector<Region> patches_;
};

// Throws ConfigError naming the offending extent and the nearest valid canvas
// sizes when the divisibility requirement fails.
TileLayout make_layout(int canvas_h, int canvas_w, int window_h, int window_w,
                       int stride_h, int stride_w);

// Per-cell count of covering patches (integer-valued, min >= 1).
Grid coverage_count(const TileLayout& layout);

// Separable triangular weights: 1 at the central cell(s), linear falloff to 0
// at the window edge, clamped below at `floor`.
GuidanceMap make_guidance_map(int window_h, int window_w, double floor);

// Columns c where the covering-patch count changes between c and c+1 in any
// row; the candidate seam locations of a layout.
std::vector<int> boundary_columns(const TileLayout& layout);

}  // namespace tilediff
