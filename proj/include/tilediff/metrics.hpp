#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tilediff/grid.hpp"

namespace tilediff {

// Mean |x[r][c+1] - x[r][c]| over the boundary columns minus the same
// statistic over all other columns; negative means smoother-than-baseline
// seams. Boundary columns must satisfy 0 <= c <= width-2.
double seam_energy(const Grid& grid, std::span<const int> boundary_cols);

// Per-pixel sample mean and unbiased variance over >= 2 equally shaped grids.
std::pair<Grid, Grid> ensemble_moments(std::span<const Grid> samples);

// Sup-norm distance between the empirical CDF of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, dynamic range taken from the joint min/max of the two grids.
// Both grids must be at least 11x11.
double ssim(const Grid& a, const Grid& b);

}  // namespace tilediff
