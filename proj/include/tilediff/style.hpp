#pragma once

#include "tilediff/grid.hpp"

namespace tilediff {

// One-shot style alignment: each non-overlapping window of the initial canvas
// noise is spherically interpolated toward `reference_noise` with ratio
// alpha (0 keeps the original noise, 1 tiles the reference).
struct StyleAlignConfig {
    double alpha = 0.0;
    Grid reference_noise;  // window-shaped

    int window_height() const { return reference_noise.height; }
    int window_width() const { return reference_noise.width; }
};

// Spherical linear interpolation of the flattened grids. Exact endpoints at
// alpha 0/1; falls back to lerp when the angle is below 1e-6 and rejects
// antipodal inputs (angle within 1e-6 of pi) and zero-norm inputs.
Grid slerp(const Grid& p, const Grid& q, double alpha);

// Applies slerp toward the reference on every non-overlapped window crop of
// the canvas. Canvas dimensions must be divisible by the window dimensions.
Grid apply_style_alignment(const Grid& canvas_noise, const StyleAlignConfig& config);

}  // namespace tilediff
