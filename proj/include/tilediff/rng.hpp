#pragma once

#include <cstdint>
#include <random>

#include "tilediff/grid.hpp"

namespace tilediff {

// Substream purposes. A draw is fully determined by the key
// (master_seed, purpose, patch_index, timestep), so patches can be evaluated
// in any order (or concurrently) and still reproduce the same values.
enum class NoisePurpose : std::uint64_t {
    kCanvasInit = 1,  // initial canvas / patch noise x_T
    kStepNoise = 2,   // per-patch per-timestep z
    kStyleRef = 3,    // style-alignment reference noise
    kTrial = 4,       // Monte-Carlo trial draws in experiments
    kAux = 5,         // scratch draws in tests/tools
};

// Deterministic keyed substream of standard-normal and uniform draws.
// mt19937_64 is pinned by the standard, so sequences are reproducible across
// platforms; normals come from a hand-rolled Box-Muller because
// std::normal_distribution is implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, NoisePurpose purpose,
              std::uint64_t patch_index = 0, std::uint64_t timestep = 0);

    double normal();
    double uniform();  // [0, 1)
    std::uint64_t next_u64();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// height x width grid of i.i.d. standard-normal draws, row-major order.
// Throws std::invalid_argument on non-positive dimensions.
Grid gaussian_grid(int height, int width, RngStream& stream);
Grid gaussian_grid(int height, int width, RngStream&& stream);

}  // namespace tilediff
