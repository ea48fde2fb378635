#include "tilediff/tiling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tilediff/errors.hpp"

namespace tilediff {

namespace {

void check_axis(const char* axis, int canvas, int window, int stride) {
    if (window < 1 || canvas < 1) {
        throw ConfigError(std::string("make_layout: ") + axis + " extents must be >= 1");
    }
    if (window > canvas) {
        throw ConfigError(std::string("make_layout: window ") + axis + " " +
                          std::to_string(window) + " exceeds canvas " + std::to_string(canvas));
    }
    if (stride < 1 || stride > window) {
        throw ConfigError(std::string("make_layout: stride ") + axis + " " +
                          std::to_string(stride) + " must be in [1, window " +
                          std::to_string(window) + "]");
    }
    int remainder = (canvas - window) % stride;
    if (remainder != 0) {
        int lower = canvas - remainder;
        int upper = lower + stride;
        throw ConfigError(std::string("make_layout: canvas ") + axis + " " +
                          std::to_string(canvas) + " does not tile exactly with window " +
                          std::to_string(window) + " and stride " + std::to_string(stride) +
                          "; nearest valid " + axis + "s are " + std::to_string(lower) + " and " +
                          std::to_string(upper));
    }
}

}  // namespace

TileLayout TileLayout::make(int canvas_h, int canvas_w, int window_h, int window_w, int stride_h,
                            int stride_w) {
    check_axis("height", canvas_h, window_h, stride_h);
    check_axis("width", canvas_w, window_w, stride_w);
    TileLayout layout;
    layout.canvas_h_ = canvas_h;
    layout.canvas_w_ = canvas_w;
    layout.window_h_ = window_h;
    layout.window_w_ = window_w;
    layout.stride_h_ = stride_h;
    layout.stride_w_ = stride_w;
    layout.rows_ = (canvas_h - window_h) / stride_h + 1;
    layout.cols_ = (canvas_w - window_w) / stride_w + 1;
    layout.patches_.reserve(static_cast<std::size_t>(layout.rows_) * layout.cols_);
    for (int pr = 0; pr < layout.rows_; ++pr) {
        for (int pc = 0; pc < layout.cols_; ++pc) {
            layout.patches_.push_back(Region{pr * stride_h, pc * stride_w, window_h, window_w});
        }
    }
    return layout;
}

TileLayout make_layout(int canvas_h, int canvas_w, int window_h, int window_w, int stride_h,
                       int stride_w) {
    return TileLayout::make(canvas_h, canvas_w, window_h, window_w, stride_h, stride_w);
}

Grid coverage_count(const TileLayout& layout) {
    Grid counts(layout.canvas_height(), layout.canvas_width(), 0.0);
    for (const Region& p : layout.patches()) {
        for (int r = p.row0; r < p.row_end(); ++r) {
            for (int c = p.col0; c < p.col_end(); ++c) {
                counts.at(r, c) += 1.0;
            }
        }
    }
    return counts;
}

namespace {

// Linear falloff from the central cell(s) to 0 at the window edge. For even
// extents both central cells carry weight 1 so the map is flip-symmetric.
double tri_weight(int u, int extent) {
    if (extent <= 2) return 1.0;
    double denom = (extent % 2 == 1) ? (extent - 1) / 2.0 : extent / 2.0 - 1.0;
    return std::min(u, extent - 1 - u) / denom;
}

}  // namespace

GuidanceMap make_guidance_map(int window_h, int window_w, double floor) {
    if (window_h < 1 || window_w < 1) {
        throw ConfigError("make_guidance_map: window dimensions must be >= 1");
    }
    if (!(floor > 0.0) || !(floor < 1.0)) {
        throw ConfigError("make_guidance_map: floor must lie in (0, 1), got " +
                          std::to_string(floor));
    }
    GuidanceMap map(window_h, window_w);
    for (int r = 0; r < window_h; ++r) {
        double wr = tri_weight(r, window_h);
        for (int c = 0; c < window_w; ++c) {
            map.at(r, c) = std::max(floor, wr * tri_weight(c, window_w));
        }
    }
    return map;
}

std::vector<int> boundary_columns(const TileLayout& layout) {
    Grid cover = coverage_count(layout);
    std::vector<int> cols;
    for (int c = 0; c + 1 < cover.width; ++c) {
        for (int r = 0; r < cover.height; ++r) {
            if (cover.at(r, c) != cover.at(r, c + 1)) {
                cols.push_back(c);
                break;
            }
        }
    }
    return cols;
}

}  // namespace tilediff
