#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tilediff/denoiser.hpp"
#include "tilediff/fusion.hpp"
#include "tilediff/sampler.hpp"
#include "tilediff/schedule.hpp"
#include "tilediff/style.hpp"
#include "tilediff/tiling.hpp"

namespace tilediff {

struct ScheduleParams {
    int timesteps = 1000;
    double beta_start = 1e-4;
    double beta_end = 0.02;
};

struct SamplerParams {
    std::string kind = "ddim";   // ddim | ddpm
    int steps = 50;              // ddim only; ddpm always runs all T steps
    std::string sigma = "beta";  // beta | tilde
};

struct PriorParams {
    std::string kind = "gp";  // gp | gmm | zero
    double length_scale = 8.0;
    std::vector<GmmComponent> components = {{1.0, 0.0, 1.0}};
};

struct LayoutParams {
    int canvas_h = 64;
    int canvas_w = 448;
    // window/stride <= 0 means "whole canvas, single patch"
    int window_h = 0;
    int window_w = 0;
    int stride_h = 0;
    int stride_w = 0;
};

struct FusionParams {
    std::string strategy = "md";  // md | gf
    bool vcf = false;
    double floor = 1e-4;
};

struct StyleParams {
    double alpha = 0.0;  // 0 disables style alignment
    std::optional<std::uint64_t> ref_seed;
};

// Fully resolved run description; JSON-serializable for config files and
// manifest echoes.
struct RunConfig {
    ScheduleParams schedule;
    SamplerParams sampler;
    PriorParams prior;
    LayoutParams layout;
    FusionParams fusion;
    StyleParams style;
    std::vector<std::uint64_t> seeds = {1};
    int trials = 100000;  // Monte-Carlo experiments
    std::string output_dir = "out";
};

// Parses a JSON config document; unknown keys are rejected. Throws
// ConfigError naming the offending field.
RunConfig load_config_json(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json(const RunConfig& config);

// Validated engine objects built from a RunConfig. Construction throws
// ConfigError naming the field that failed.
struct ResolvedRun {
    NoiseSchedule schedule;
    SamplerConfig sampler;
    std::unique_ptr<Denoiser> denoiser;
    TileLayout layout;
    GuidanceMap guidance;
    FusionConfig fusion;
    std::optional<StyleAlignConfig> style;  // resolved per-run (uses ref seed)
};

ResolvedRun resolve_config(const RunConfig& config);

}  // namespace tilediff
