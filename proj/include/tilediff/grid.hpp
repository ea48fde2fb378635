#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tilediff {

// Dense row-major 2-D grid of doubles. Holds canvases, patches and noise
// draws alike; immutable by convention once an operation returns it.
struct Grid {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(int h, int w, double fill = 0.0);

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return values.size(); }

    static Grid zeros(int h, int w) { return Grid(h, w, 0.0); }
    static Grid constant(int h, int w, double value) { return Grid(h, w, value); }
};

// Rectangular window into a parent grid.
struct Region {
    int row0 = 0;
    int col0 = 0;
    int height = 0;
    int width = 0;

    int row_end() const { return row0 + height; }
    int col_end() const { return col0 + width; }
    std::string describe() const;

    bool operator==(const Region&) const = default;
};

bool region_inside(const Region& region, const Grid& grid);

// Copies `region` out of `grid`. Throws std::out_of_range naming the region
// if it does not lie fully inside.
Grid crop(const Grid& grid, const Region& region);

// Writes `patch` into `into` at `region`; patch shape must equal the region's.
void scatter(const Grid& patch, const Region& region, Grid& into);

bool all_finite(const Grid& grid);

// Throws NumericError mentioning `context` if any value is NaN/Inf.
void require_finite(const Grid& grid, const char* context);

void require_same_shape(const Grid& a, const Grid& b, const char* context);

}  // namespace tilediff
