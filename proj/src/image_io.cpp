#include "tilediff/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilediff {

PgmMapping write_pgm(const std::string& path, const Grid& grid) {
    if (grid.height < 1 || grid.width < 1) {
        throw std::invalid_argument("write_pgm: empty grid");
    }
    double lo = grid.values[0], hi = grid.values[0];
    for (double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;

    std::vector<std::uint8_t> pixels(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double scaled = range > 0.0 ? (grid.values[i] - lo) / range * 255.0 : 128.0;
        pixels[i] = static_cast<std::uint8_t>(std::lround(scaled));
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_pgm: cannot open " + path);
    }
    out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) {
        throw std::runtime_error("write_pgm: write failed for " + path);
    }
    return PgmMapping{lo, hi};
}

}  // namespace tilediff
