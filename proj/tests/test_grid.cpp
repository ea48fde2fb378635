#include <doctest.h>

#include <stdexcept>

#include "tilediff/grid.hpp"
#include "tilediff/rng.hpp"

using namespace tilediff;

TEST_CASE("crop zero case") {
    Grid zeros = Grid::zeros(4, 4);
    Grid out = crop(zeros, Region{0, 0, 2, 2});
    CHECK(out.height == 2);
    CHECK(out.width == 2);
    for (double v : out.values) CHECK(v == 0.0);
}

TEST_CASE("crop of the full extent is value-identical") {
    RngStream stream(11, NoisePurpose::kAux);
    Grid grid = gaussian_grid(3, 5, stream);
    Grid out = crop(grid, Region{0, 0, 3, 5});
    CHECK(out.values == grid.values);
}

TEST_CASE("crop indexes row-major") {
    Grid grid(1, 3);
    grid.values = {1.0, 2.0, 3.0};
    Grid out = crop(grid, Region{0, 1, 1, 2});
    CHECK(out.values == std::vector<double>{2.0, 3.0});
}

TEST_CASE("crop rejects out-of-bounds regions and names the region") {
    Grid grid = Grid::zeros(4, 4);
    CHECK_THROWS_WITH_AS(crop(grid, Region{2, 2, 3, 3}),
                         doctest::Contains("(row0=2, col0=2, height=3, width=3)"),
                         std::out_of_range);
    CHECK_THROWS_AS(crop(grid, Region{-1, 0, 2, 2}), std::out_of_range);
    CHECK_THROWS_AS(crop(grid, Region{0, 0, 0, 2}), std::out_of_range);
}

TEST_CASE("scatter rejects shape mismatches") {
    Grid grid = Grid::zeros(4, 4);
    Grid patch = Grid::zeros(2, 2);
    CHECK_THROWS_AS(scatter(patch, Region{0, 0, 2, 3}, grid), std::invalid_argument);
    CHECK_THROWS_AS(scatter(patch, Region{3, 3, 2, 2}, grid), std::out_of_range);
}

TEST_CASE("crop/scatter round trip leaves the parent unchanged") {
    RngStream stream(5, NoisePurpose::kAux);
    for (int trial = 0; trial < 50; ++trial) {
        int h = 1 + static_cast<int>(stream.next_u64() % 12);
        int w = 1 + static_cast<int>(stream.next_u64() % 12);
        Grid grid = gaussian_grid(h, w, stream);
        Grid before = grid;
        Region region;
        region.height = 1 + static_cast<int>(stream.next_u64() % h);
        region.width = 1 + static_cast<int>(stream.next_u64() % w);
        region.row0 = static_cast<int>(stream.next_u64() % (h - region.height + 1));
        region.col0 = static_cast<int>(stream.next_u64() % (w - region.width + 1));
        scatter(crop(grid, region), region, grid);
        CHECK(grid.values == before.values);
    }
}

TEST_CASE("all_finite flags NaN and Inf") {
    Grid grid = Grid::zeros(2, 2);
    CHECK(all_finite(grid));
    grid.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(all_finite(grid));
    grid.at(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(all_finite(grid));
}
