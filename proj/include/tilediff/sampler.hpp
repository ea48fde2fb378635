#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tilediff/denoiser.hpp"
#include "tilediff/fusion.hpp"
#include "tilediff/grid.hpp"
#include "tilediff/schedule.hpp"
#include "tilediff/style.hpp"
#include "tilediff/tiling.hpp"

namespace tilediff {

// One reverse step: the sampled x_{t-1} plus the step mean mu_t. Deterministic
// samplers return x_prev == mean (same bits).
struct StepOutput {
    Grid x_prev;
    Grid mean;
};

enum class SamplerMethod { kDdpm, kDdim };

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::kDdim;
    SigmaVariant sigma_variant = SigmaVariant::kBeta;
    int ddim_steps = 50;
};

// Stochastic ancestral step: mean = (x_t - beta_t/sqrt(1-ab_t) eps)/sqrt(alpha_t),
// x_prev = mean + sigma_t z. The caller passes z = 0 at t = 1.
StepOutput ddpm_step(const Grid& x_t, const Grid& eps_hat, int t,
                     const NoiseSchedule& schedule, SigmaVariant variant, const Grid& z);

// Deterministic update between arbitrary signal levels; exposed so degenerate
// cases (equal alpha-bars) are testable without a schedule.
Grid ddim_update(const Grid& x_t, const Grid& eps_hat, double alpha_bar_t, double alpha_bar_next);

// Deterministic (eta = 0) step from t to t_next < t; mean == x_prev.
StepOutput ddim_step(const Grid& x_t, const Grid& eps_hat, int t, int t_next,
                     const NoiseSchedule& schedule);

// Uniformly spaced decreasing timestep grid {T, ..., 0} with `steps` steps.
std::vector<int> ddim_timesteps(int T, int steps);

// Supplies the z grid for (patch_index, t); the engine's default draws the
// keyed substream, tests may inject zeros or replay sequences.
using NoiseProvider = std::function<Grid(int patch_index, int t)>;

// Called with the fused canvas after every joint timestep (t_next is the
// level just reached).
using StepObserver = std::function<void(int t_next, const Grid& canvas)>;

// Runs the reverse chain on one patch starting from x_start (the x_T noise).
Grid sample_chain(const Denoiser& denoiser, const SamplerConfig& sampler,
                  const NoiseSchedule& schedule, Grid x_start, const NoiseProvider& z_for,
                  int patch_index = 0);

// Single-patch sampling from keyed noise: x_T and every z come from the seed.
Grid sample_single(const Denoiser& denoiser, const SamplerConfig& sampler,
                   const NoiseSchedule& schedule, int height, int width, std::uint64_t seed);

// Joint tiled denoising: crop every patch, predict, step with per-patch keyed
// noise, then fuse each canvas cell from its covering patches after every
// timestep. The result does not depend on patch evaluation order.
Grid sample_joint(const Denoiser& denoiser, const SamplerConfig& sampler,
                  const NoiseSchedule& schedule, const TileLayout& layout,
                  const GuidanceMap& guidance, const FusionConfig& fusion,
                  const std::optional<StyleAlignConfig>& style, std::uint64_t seed,
                  const StepObserver& observer = nullptr);

// Same loop with the initial canvas and noise source supplied by the caller.
Grid sample_joint_from(const Denoiser& denoiser, const SamplerConfig& sampler,
                       const NoiseSchedule& schedule, const TileLayout& layout,
                       const GuidanceMap& guidance, const FusionConfig& fusion,
                       Grid canvas_init, const NoiseProvider& z_for,
                       const StepObserver& observer = nullptr);

}  // namespace tilediff
