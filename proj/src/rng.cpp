#include "tilediff/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tilediff {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, NoisePurpose purpose,
                     std::uint64_t patch_index, std::uint64_t timestep) {
    // Hash-chain the key fields so distinct tuples land on well-separated
    // engine seeds.
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    h = splitmix64(h ^ patch_index);
    h = splitmix64(h ^ timestep);
    engine_.seed(h);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
}

Grid gaussian_grid(int height, int width, RngStream& stream) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("gaussian_grid: dimensions must be >= 1, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
    Grid out(height, width);
    for (double& v : out.values) v = stream.normal();
    return out;
}

Grid gaussian_grid(int height, int width, RngStream&& stream) {
    return gaussian_grid(height, width, stream);
}

}  // namespace tilediff
