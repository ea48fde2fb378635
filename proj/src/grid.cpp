#include "tilediff/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tilediff/errors.hpp"

namespace tilediff {

Grid::Grid(int h, int w, double fill) : height(h), width(w) {
    if (h < 0 || w < 0) {
        throw std::invalid_argument("Grid dimensions must be non-negative, got " +
                                    std::to_string(h) + "x" + std::to_string(w));
    }
    values.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill);
}

std::string Region::describe() const {
    return "(row0=" + std::to_string(row0) + ", col0=" + std::to_string(col0) +
           ", height=" + std::to_string(height) + ", width=" + std::to_string(width) + ")";
}

bool region_inside(const Region& region, const Grid& grid) {
    return region.row0 >= 0 && region.col0 >= 0 && region.height >= 1 && region.width >= 1 &&
           region.row_end() <= grid.height && region.col_end() <= grid.width;
}

Grid crop(const Grid& grid, const Region& region) {
    if (!region_inside(region, grid)) {
        throw std::out_of_range("crop: region " + region.describe() + " outside grid " +
                                std::to_string(grid.height) + "x" + std::to_string(grid.width));
    }
    Grid out(region.height, region.width);
    for (int r = 0; r < region.height; ++r) {
        const double* src = grid.values.data() +
                            static_cast<std::size_t>(region.row0 + r) * grid.width + region.col0;
        double* dst = out.values.data() + static_cast<std::size_t>(r) * region.width;
        for (int c = 0; c < region.width; ++c) dst[c] = src[c];
    }
    return out;
}

void scatter(const Grid& patch, const Region& region, Grid& into) {
    if (patch.height != region.height || patch.width != region.width) {
        throw std::invalid_argument("scatter: patch " + std::to_string(patch.height) + "x" +
                                    std::to_string(patch.width) + " does not match region " +
                                    region.describe());
    }
    if (!region_inside(region, into)) {
        throw std::out_of_range("scatter: region " + region.describe() + " outside grid " +
                                std::to_string(into.height) + "x" + std::to_string(into.width));
    }
    for (int r = 0; r < region.height; ++r) {
        const double* src = patch.values.data() + static_cast<std::size_t>(r) * patch.width;
        double* dst = into.values.data() +
                      static_cast<std::size_t>(region.row0 + r) * into.width + region.col0;
        for (int c = 0; c < region.width; ++c) dst[c] = src[c];
    }
}

bool all_finite(const Grid& grid) {
    for (double v : grid.values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_finite(const Grid& grid, const char* context) {
    if (!all_finite(grid)) {
        throw NumericError(std::string("non-finite values in ") + context);
    }
}

void require_same_shape(const Grid& a, const Grid& b, const char* context) {
    if (a.height != b.height || a.width != b.width) {
        throw std::invalid_argument(std::string(context) + ": shape mismatch " +
                                    std::to_string(a.height) + "x" + std::to_string(a.width) +
                                    " vs " + std::to_string(b.height) + "x" +
                                    std::to_string(b.width));
    }
}

}  // namespace tilediff
